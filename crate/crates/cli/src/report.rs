//! JSON reports. Every number is written as a string so rationals survive
//! as exact `p/q` literals.

use std::time::Instant;

use permbound_core::bounds::{diag_dominance_certify, BoundReport};
use permbound_core::{
    gram_from_factor, run_process, Arithmetic, GramMatrix, Matrix, ProcessInput, Rational, Scalar,
};
use serde::Serialize;

use crate::error::CliError;
use crate::matrix_file::{MatrixFile, MatrixKind};

/// Above this dimension the default arithmetic switches to floats.
pub const RATIONAL_DEFAULT_MAX: usize = 12;
pub const DEFAULT_EXACT_MAX: usize = 10;

#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    pub arithmetic: Option<Arithmetic>,
    pub exact_max: Option<usize>,
    /// 1-based.
    pub ordering: Option<Vec<usize>>,
    pub eps: Option<Rational>,
    pub snapshots: bool,
    pub timing: bool,
}

impl ReportOptions {
    pub fn arithmetic_for(&self, n: usize) -> Arithmetic {
        self.arithmetic.unwrap_or(if n <= RATIONAL_DEFAULT_MAX {
            Arithmetic::ExactRational
        } else {
            Arithmetic::Float64
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dominance {
    pub eps: String,
    pub certified: bool,
    pub bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ratios {
    pub process: Option<String>,
    pub rowsum: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub id: String,
    pub n: usize,
    pub arithmetic: String,
    pub kind: MatrixKind,
    pub process_bound: String,
    pub rowsum_bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_perm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diag_dominance: Option<Dominance>,
    pub ratios: Ratios,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordering: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped_steps: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pivots: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<String>,
}

fn text<T: Scalar>(v: &T) -> String {
    v.to_string()
}

fn rows_text<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(text).collect()).collect()
}

pub fn build_report(id: &str, file: &MatrixFile, opts: &ReportOptions) -> Result<Report, CliError> {
    match opts.arithmetic_for(file.n()) {
        Arithmetic::ExactRational => build(id, &Converted::<Rational>::from_file(file)?, opts),
        Arithmetic::Float64 => build(id, &Converted::<f64>::from_file(file)?, opts),
    }
}

/// Converts the file into the chosen backend; gram inputs are rebuilt from
/// the converted factor.
pub enum Converted<T> {
    Plain(Matrix<T>),
    Gram(GramMatrix<T>),
}

impl<T: Scalar> Converted<T> {
    pub fn from_file(file: &MatrixFile) -> Result<Self, CliError> {
        let conv = |m: &Matrix<Rational>| m.map(T::from_rational);
        Ok(match (&file.kind, &file.factor) {
            (MatrixKind::Gram, Some(f)) => Converted::Gram(gram_from_factor(conv(f))?),
            _ => Converted::Plain(conv(&file.entries)),
        })
    }

    pub fn input(&self) -> ProcessInput<'_, T> {
        match self {
            Converted::Plain(m) => m.into(),
            Converted::Gram(g) => g.into(),
        }
    }

    pub fn matrix(&self) -> &Matrix<T> {
        self.input().matrix()
    }

    pub fn kind(&self) -> MatrixKind {
        match self {
            Converted::Plain(_) => MatrixKind::Nonneg,
            Converted::Gram(_) => MatrixKind::Gram,
        }
    }
}

pub fn build<T: Scalar>(id: &str, conv: &Converted<T>, opts: &ReportOptions) -> Result<Report, CliError> {
    let start = Instant::now();
    let exact_max = opts.exact_max.unwrap_or(DEFAULT_EXACT_MAX);
    let trace = run_process(conv.input(), opts.snapshots, opts.ordering.as_deref())?;
    let base = BoundReport::compute(id, conv.input(), exact_max)?;
    let diag_dominance = match &opts.eps {
        Some(eps) => {
            let cert = diag_dominance_certify(conv.matrix(), &T::from_rational(eps))?;
            Some(Dominance {
                eps: text(&cert.eps),
                certified: cert.certified,
                bound: cert.bound.as_ref().map(text),
                first_violation: cert.first_violation,
            })
        }
        None => None,
    };
    // the ordered run determines the reported bound
    let process_bound = trace.bound();
    let exact = base.exact_perm.clone();
    let ratio = |num: &T| -> Option<String> {
        let den = exact.as_ref()?;
        (!den.is_zero()).then(|| text(&(num.clone() / den)))
    };
    Ok(Report {
        id: id.to_string(),
        n: base.n,
        arithmetic: T::ARITHMETIC.as_str().to_string(),
        kind: conv.kind(),
        process_bound: text(&process_bound),
        rowsum_bound: base.rowsum_bound.as_ref().map(text),
        exact_perm: exact.as_ref().map(text),
        diag_dominance,
        ratios: Ratios {
            process: ratio(&process_bound),
            rowsum: base.rowsum_bound.as_ref().and_then(ratio),
        },
        ordering: opts.ordering.clone(),
        skipped_steps: trace.skipped_steps.clone(),
        pivots: opts.snapshots.then(|| trace.pivots.iter().map(text).collect()),
        snapshots: trace
            .snapshots
            .as_ref()
            .map(|s| s.iter().map(rows_text).collect()),
        elapsed_ms: opts
            .timing
            .then(|| format!("{:.3}", start.elapsed().as_secs_f64() * 1e3)),
    })
}
