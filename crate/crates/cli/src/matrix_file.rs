//! Matrix input files.
//!
//! CSV: one row per line, comma-separated decimal or `p/q` literals; lines
//! starting with `#` are ignored.
//!
//! JSON: `{"n": 3, "entries": [[...], ...], "kind": "nonneg" | "gram",
//! "factor": [[...], ...]}`. Entries may be nested rows or a flat row-major
//! array, and each value may be a JSON number or a string literal. A gram
//! file needs `factor` (`d x n`); `entries`, if present, must equal `V^T V`.

use std::path::Path;

use permbound_core::{gram_from_factor, parse_rational, Matrix, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Nonneg,
    Gram,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub kind: MatrixKind,
    pub entries: Matrix<Rational>,
    /// `d x n`, present for gram inputs.
    pub factor: Option<Matrix<Rational>>,
}

impl MatrixFile {
    pub fn nonneg(entries: Matrix<Rational>) -> Self {
        MatrixFile {
            kind: MatrixKind::Nonneg,
            entries,
            factor: None,
        }
    }

    pub fn gram(factor: Matrix<Rational>) -> Result<Self, CliError> {
        let g = gram_from_factor(factor.clone())?;
        Ok(MatrixFile {
            kind: MatrixKind::Gram,
            entries: g.gram().clone(),
            factor: Some(factor),
        })
    }

    pub fn n(&self) -> usize {
        self.entries.rows()
    }

    pub fn read(path: &Path, format: Option<Format>) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input("IoError", format!("{}: {e}", path.display())))?;
        match format.unwrap_or_else(|| Format::from_path(path)) {
            Format::Csv => Self::parse_csv(&text),
            Format::Json => Self::parse_json(&text),
        }
    }

    pub fn parse_csv(text: &str) -> Result<Self, CliError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| CliError::parse(e.to_string()))?;
            if record.iter().all(str::is_empty) {
                continue;
            }
            let row = record
                .iter()
                .enumerate()
                .map(|(col, field)| literal(field, line + 1, col + 1))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        let m = square(rows, None)?;
        Ok(Self::nonneg(m))
    }

    pub fn parse_json(text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::parse(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| CliError::parse("expected a JSON object"))?;
        let n = match obj.get("n") {
            Some(n) => Some(
                n.as_u64()
                    .ok_or_else(|| CliError::parse("\"n\" must be a non-negative integer"))?
                    as usize,
            ),
            None => None,
        };
        let kind = match obj.get("kind") {
            None => MatrixKind::Nonneg,
            Some(k) => serde_json::from_value(k.clone())
                .map_err(|_| CliError::parse(format!("unknown kind {k}")))?,
        };
        let entries = obj
            .get("entries")
            .map(|e| json_matrix(e, n, "entries"))
            .transpose()?;
        match kind {
            MatrixKind::Nonneg => {
                let entries = entries.ok_or_else(|| CliError::parse("missing \"entries\""))?;
                Ok(Self::nonneg(entries))
            }
            MatrixKind::Gram => {
                let factor = obj
                    .get("factor")
                    .ok_or_else(|| CliError::parse("kind \"gram\" requires \"factor\""))?;
                let factor = json_rows(factor, "factor")?;
                let factor = Matrix::from_rows(factor).map_err(CliError::from)?;
                if let Some(n) = n {
                    if factor.cols() != n {
                        return Err(CliError::parse(format!(
                            "factor has {} columns, declared n = {n}",
                            factor.cols()
                        )));
                    }
                }
                let file = Self::gram(factor)?;
                if let Some(entries) = entries {
                    if entries != file.entries {
                        return Err(CliError::input(
                            "InvalidGram",
                            "entries do not equal factor^T * factor",
                        ));
                    }
                }
                Ok(file)
            }
        }
    }

    /// Serializes with every value as an exact string literal.
    pub fn to_json(&self) -> String {
        let rows = |m: &Matrix<Rational>| -> Vec<Vec<String>> {
            m.to_rows()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect()
        };
        let mut obj = serde_json::json!({
            "n": self.n(),
            "kind": self.kind,
            "entries": rows(&self.entries),
        });
        if let Some(f) = &self.factor {
            obj["factor"] = serde_json::json!(rows(f));
        }
        serde_json::to_string_pretty(&obj).expect("serializable")
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
        for row in self.entries.to_rows() {
            writer
                .write_record(row.iter().map(ToString::to_string))
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory write")).expect("utf-8")
    }
}

fn literal(text: &str, row: usize, col: usize) -> Result<Rational, CliError> {
    parse_rational(text)
        .ok_or_else(|| CliError::parse(format!("row {row}, column {col}: cannot parse {text:?}")))
}

fn json_value(v: &Value, what: &str) -> Result<Rational, CliError> {
    let text = match v {
        Value::Number(num) => num.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(CliError::parse(format!("{what}: unexpected value {other}"))),
    };
    parse_rational(&text).ok_or_else(|| CliError::parse(format!("{what}: cannot parse {text:?}")))
}

fn json_rows(v: &Value, what: &str) -> Result<Vec<Vec<Rational>>, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| CliError::parse(format!("{what} must be an array")))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| CliError::parse(format!("{what} rows must be arrays")))?
                .iter()
                .map(|x| json_value(x, what))
                .collect()
        })
        .collect()
}

fn json_matrix(v: &Value, n: Option<usize>, what: &str) -> Result<Matrix<Rational>, CliError> {
    let arr = v
        .as_array()
        .ok_or_else(|| CliError::parse(format!("{what} must be an array")))?;
    let nested = arr.first().is_some_and(Value::is_array);
    let rows = if nested {
        json_rows(v, what)?
    } else {
        let flat = arr
            .iter()
            .map(|x| json_value(x, what))
            .collect::<Result<Vec<_>, _>>()?;
        let n = match n {
            Some(n) => n,
            None => {
                let root = (flat.len() as f64).sqrt().round() as usize;
                if root * root != flat.len() {
                    return Err(CliError::parse(format!(
                        "flat {what} of length {} is not square",
                        flat.len()
                    )));
                }
                root
            }
        };
        if n == 0 || flat.len() != n * n {
            return Err(CliError::parse(format!(
                "flat {what} has {} values, expected {}",
                flat.len(),
                n * n
            )));
        }
        flat.chunks(n).map(<[Rational]>::to_vec).collect()
    };
    square(rows, n)
}

fn square(rows: Vec<Vec<Rational>>, n: Option<usize>) -> Result<Matrix<Rational>, CliError> {
    if rows.is_empty() {
        return Err(CliError::parse("empty matrix"));
    }
    if let Some(n) = n {
        if rows.len() != n {
            return Err(CliError::parse(format!(
                "declared n = {n} but found {} rows",
                rows.len()
            )));
        }
    }
    let m = Matrix::from_rows(rows).map_err(|e| CliError::parse(e.to_string()))?;
    if !m.is_square() {
        return Err(CliError::parse(format!(
            "matrix is {}x{}, expected square",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use permbound_core::Scalar;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn csv_literals() {
        let f = MatrixFile::parse_csv("# comment\n1, 1/2\n0.25,3\n").unwrap();
        assert_eq!(f.entries[(0, 1)], q(1, 2));
        assert_eq!(f.entries[(1, 0)], q(1, 4));
        assert!(MatrixFile::parse_csv("1,2\n3\n").is_err());
        assert!(MatrixFile::parse_csv("1,2\n3,x\n").is_err());
        assert!(MatrixFile::parse_csv("1,2,3\n4,5,6\n").is_err());
    }

    #[test]
    fn json_variants() {
        let nested = MatrixFile::parse_json(r#"{"n":2,"entries":[[1,"1/2"],[0.5,2]]}"#).unwrap();
        let flat = MatrixFile::parse_json(r#"{"n":2,"entries":[1,"1/2",0.5,2],"kind":"nonneg"}"#).unwrap();
        assert_eq!(nested, flat);
        assert!(MatrixFile::parse_json(r#"{"n":3,"entries":[[1,2],[3,4]]}"#).is_err());
        assert!(MatrixFile::parse_json(r#"{"n":2,"kind":"gram","entries":[[1,0],[0,1]]}"#).is_err());

        let g = MatrixFile::parse_json(r#"{"n":2,"kind":"gram","factor":[[1,1],[0,1]]}"#).unwrap();
        assert_eq!(g.entries, Matrix::from_int_rows([[1, 1], [1, 2]]));
        let bad = MatrixFile::parse_json(r#"{"n":2,"kind":"gram","factor":[[1,1],[0,1]],"entries":[[1,0],[0,1]]}"#);
        assert_eq!(bad.unwrap_err().kind, "InvalidGram");
    }

    #[test]
    fn round_trips() {
        let f = MatrixFile::parse_csv("1/3,2\n-7/2,0.125\n").unwrap();
        assert_eq!(MatrixFile::parse_csv(&f.to_csv()).unwrap(), f);
        assert_eq!(MatrixFile::parse_json(&f.to_json()).unwrap(), f);
        let g = MatrixFile::gram(Matrix::from_int_rows([[1, -2], [3, 1]])).unwrap();
        assert_eq!(MatrixFile::parse_json(&g.to_json()).unwrap(), g);
    }
}
