//! `verify`: module property checks run on a single input matrix.
//!
//! Everything runs in exact rational arithmetic. Checks that need many
//! permanents are limited by dimension and report SKIP beyond it.

use std::fmt;
use std::path::Path;

use permbound_core::bounds::{
    cycle_sum_ratio, diag_dominance_certify, entry_bound_check, perm_ratio_check, solve_majorant,
    verify_majorant, MajorantCertificate, MajorantMode,
};
use permbound_core::perminv::{check_identity_dominance, minor_ratio_with, permanental_inverse};
use permbound_core::permschur::{
    condense_inequality_sides, rank1_update_permanent, row_uncrossing_sides,
    schur_permanent_bound, two_row_inequality_sides, BlockSplit,
};
use permbound_core::process::{pivot_lower_bound_check, recursive_u};
use permbound_core::psd::{certify_process_psd, is_psd, permanent_tensor, psd_schur_check, TENSOR_MAX_N};
use permbound_core::{
    determinant_uncrossing_sides, gram_from_factor, permanent_ryser, run_process, Error, GramMatrix,
    IndexSet, Matrix, Rational, Scalar,
};
use serde::Deserialize;

use crate::error::CliError;
use crate::matrix_file::{MatrixFile, MatrixKind};

/// Largest dimension for checks that evaluate permanents.
pub const PERM_CHECK_MAX: usize = 10;
/// Largest dimension for checks that enumerate index subsets.
pub const EXHAUSTIVE_MAX: usize = 6;

type Q = Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Schur,
    Uncross,
    Boundedness,
    Psd,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub outcome: Outcome,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, detail) = match &self.outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => ("FAIL", d),
            Outcome::Skip(d) => ("SKIP", d),
        };
        if detail.is_empty() {
            write!(f, "{tag} {}", self.name)
        } else {
            write!(f, "{tag} {}: {detail}", self.name)
        }
    }
}

#[derive(Debug, Default)]
pub struct Verification {
    pub results: Vec<CheckResult>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        !self.results.iter().any(|r| matches!(r.outcome, Outcome::Fail(_)))
    }

    fn push(&mut self, name: &str, outcome: Outcome) {
        self.results.push(CheckResult {
            name: name.to_string(),
            outcome,
        });
    }

    /// Records a check body; core errors become FAIL lines, except the
    /// listed skip conditions.
    fn run(&mut self, name: &str, body: impl FnOnce() -> Result<Outcome, Error>) {
        let outcome = match body() {
            Ok(o) => o,
            Err(Error::ZeroPermanent) => Outcome::Skip("a required permanent is zero".into()),
            Err(Error::ZeroPivot { step }) => Outcome::Skip(format!("zero pivot at step {step}")),
            Err(e) => Outcome::Fail(e.to_string()),
        };
        self.push(name, outcome);
    }
}

/// Tally of a family of sub-checks.
#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }

    /// Counts a sub-check whose denominator vanished.
    fn skip_zero<T>(&mut self, r: Result<T, Error>) -> Result<Option<T>, Error> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(Error::ZeroPermanent) | Err(Error::ZeroPivot { .. }) => {
                self.skipped += 1;
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    fn outcome(self) -> Outcome {
        let skipped = if self.skipped > 0 {
            format!(", {} skipped for a zero permanent", self.skipped)
        } else {
            String::new()
        };
        match self.first_failure {
            Some(f) => Outcome::Fail(format!("{f} ({} checked{skipped})", self.checked)),
            None if self.checked == 0 => Outcome::Skip(format!("nothing to check{skipped}")),
            None => Outcome::Pass(format!("{} checked{skipped}", self.checked)),
        }
    }
}

/// Certificate file: `{"b": [[...]], "mode": "inequality" | "equality"}`.
#[derive(Debug, Deserialize)]
struct CertificateFile {
    b: serde_json::Value,
    #[serde(default)]
    mode: Option<String>,
}

pub fn read_certificate(path: &Path) -> Result<(Matrix<Q>, MajorantMode), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input("IoError", format!("{}: {e}", path.display())))?;
    let cert: CertificateFile =
        serde_json::from_str(&text).map_err(|e| CliError::parse(format!("certificate: {e}")))?;
    let mode = match cert.mode.as_deref() {
        None | Some("inequality") => MajorantMode::Inequality,
        Some("equality") => MajorantMode::Equality,
        Some(other) => return Err(CliError::parse(format!("unknown certificate mode {other:?}"))),
    };
    let wrapped = serde_json::json!({ "entries": cert.b });
    let b = MatrixFile::parse_json(&wrapped.to_string())?.entries;
    Ok((b, mode))
}

pub struct VerifyOptions {
    pub suite: Suite,
    pub certificate: Option<(Matrix<Q>, MajorantMode)>,
    pub eps: Option<Q>,
}

pub fn verify(file: &MatrixFile, opts: &VerifyOptions) -> Result<Verification, CliError> {
    let a = &file.entries;
    let gram = match (&file.kind, &file.factor) {
        (MatrixKind::Gram, Some(f)) => Some(gram_from_factor(f.clone())?),
        _ => None,
    };
    if opts.suite == Suite::Psd && gram.is_none() {
        return Err(CliError::input(
            "PreconditionViolated",
            "suite psd needs a gram input with a factor",
        ));
    }
    let mut v = Verification::default();
    let nonneg = a.is_nonnegative();
    let schur_like = matches!(opts.suite, Suite::Schur | Suite::Uncross | Suite::All);
    if schur_like && !nonneg {
        v.push(
            "nonnegative-suites",
            Outcome::Skip("input has negative entries".into()),
        );
    }
    if matches!(opts.suite, Suite::Schur | Suite::All) && nonneg {
        schur_suite(a, &mut v);
    }
    if matches!(opts.suite, Suite::Uncross | Suite::All) && nonneg {
        uncross_suite(a, &mut v);
    }
    if matches!(opts.suite, Suite::Boundedness | Suite::All) {
        boundedness_suite(a, &mut v);
    }
    if matches!(opts.suite, Suite::Psd | Suite::All) {
        match &gram {
            Some(g) => psd_suite(g, &mut v),
            None => v.push("psd", Outcome::Skip("input is not a gram matrix".into())),
        }
    }
    if opts.suite == Suite::All {
        process_suite(a, gram.as_ref(), opts.eps.as_ref(), &mut v);
    } else if let Some(eps) = &opts.eps {
        dominance_check(a, eps, &mut v);
    }
    if let Some((b, mode)) = &opts.certificate {
        certificate_check(a, b, *mode, &mut v)?;
    }
    Ok(v)
}

fn too_large(n: usize, max: usize) -> Outcome {
    Outcome::Skip(format!("n = {n} exceeds {max}"))
}

fn column_of(a: &Matrix<Q>, col: usize, rows: std::ops::Range<usize>) -> Vec<Q> {
    rows.map(|i| a[(i, col)].clone()).collect()
}

fn row_of(a: &Matrix<Q>, row: usize, cols: std::ops::Range<usize>) -> Vec<Q> {
    cols.map(|j| a[(row, j)].clone()).collect()
}

fn schur_suite(a: &Matrix<Q>, v: &mut Verification) {
    let n = a.rows();
    if n > PERM_CHECK_MAX {
        v.push("schur", too_large(n, PERM_CHECK_MAX));
        return;
    }
    v.run("identity-dominance", || {
        let dom = check_identity_dominance(a)?;
        Ok(if dom.holds {
            Outcome::Pass(String::new())
        } else {
            Outcome::Fail("B* B or B B* does not dominate I".into())
        })
    });
    v.run("schur-bound", || {
        let mut tally = Tally::default();
        for d in 1..n {
            let split = BlockSplit::new(a.clone(), d)?;
            let Some(sb) = tally.skip_zero(schur_permanent_bound(&split))? else { continue };
            tally.record(sb.holds(), || format!("d = {d}: {} > {}", sb.exact, sb.bound));
            if d == n - 1 {
                tally.record(sb.exact == sb.bound, || {
                    format!("k = 1: {} != {}", sb.exact, sb.bound)
                });
            }
        }
        Ok(tally.outcome())
    });
    v.run("rank1-equality", || {
        if n < 2 {
            return Ok(Outcome::Skip("n < 2".into()));
        }
        let d = n - 1;
        let head = IndexSet::prefix(d);
        let b = a.select(&head, &head)?;
        let x = row_of(a, d, 0..d);
        let y = column_of(a, d, 0..d);
        let sides = rank1_update_permanent(&b, &x, &y, &a[(d, d)])?;
        Ok(if sides.lhs == sides.rhs {
            Outcome::Pass(format!("per = {}", sides.lhs))
        } else {
            Outcome::Fail(format!("{} != {}", sides.lhs, sides.rhs))
        })
    });
    v.run("condense", || {
        let sides = condense_inequality_sides(a)?;
        Ok(if sides.holds() {
            Outcome::Pass(format!("{} <= {}", sides.lhs, sides.rhs))
        } else {
            Outcome::Fail(format!("{} > {}", sides.lhs, sides.rhs))
        })
    });
    v.run("minor-ratio", || {
        if n > EXHAUSTIVE_MAX {
            return Ok(too_large(n, EXHAUSTIVE_MAX));
        }
        let inv = permanental_inverse(a)?;
        let mut tally = Tally::default();
        let subsets: Vec<IndexSet> = IndexSet::all_subsets(n).collect();
        for s in &subsets {
            for t in subsets.iter().filter(|t| t.len() == s.len()) {
                let sides = minor_ratio_with(a, &inv, s, t)?;
                tally.record(sides.holds(), || {
                    format!("S = {s}, T = {t}: {} > {}", sides.lhs, sides.rhs)
                });
            }
        }
        Ok(tally.outcome())
    });
    v.run("two-row", || {
        if n < 3 {
            return Ok(Outcome::Skip("n < 3".into()));
        }
        let d = n - 2;
        let head = IndexSet::prefix(d);
        let b = a.select(&head, &head)?;
        let (x1, x2) = (row_of(a, d, 0..d), row_of(a, d + 1, 0..d));
        let (y1, y2) = (column_of(a, d, 0..d), column_of(a, d + 1, 0..d));
        let tail = IndexSet::interval(d + 1, n);
        let w = a.select(&tail, &tail)?;
        let sides = two_row_inequality_sides(&b, [&x1, &x2], [&y1, &y2], &w)?;
        Ok(if sides.holds() {
            Outcome::Pass(format!("{} <= {}", sides.lhs, sides.rhs))
        } else {
            Outcome::Fail(format!("{} > {}", sides.lhs, sides.rhs))
        })
    });
}

fn uncross_suite(a: &Matrix<Q>, v: &mut Verification) {
    let n = a.rows();
    if n > PERM_CHECK_MAX {
        v.push("uncross", too_large(n, PERM_CHECK_MAX));
        return;
    }
    v.run("row-uncrossing", || {
        let mut tally = Tally::default();
        for d in 0..n {
            let split = BlockSplit::new(a.clone(), d)?;
            let k = n - d;
            for i_star in 1..=k {
                let sides = row_uncrossing_sides(&split, i_star)?;
                tally.record(sides.holds(), || {
                    format!("d = {d}, i* = {i_star}: {} > {}", sides.lhs, sides.rhs)
                });
                if d == 0 || k == 1 {
                    tally.record(sides.lhs == sides.rhs, || {
                        format!("d = {d}, i* = {i_star}: expected equality, {} != {}", sides.lhs, sides.rhs)
                    });
                }
            }
        }
        Ok(tally.outcome())
    });
    v.run("determinant-uncrossing", || {
        if n < 2 {
            return Ok(Outcome::Skip("n < 2".into()));
        }
        let d = n - 2;
        let head = IndexSet::prefix(d);
        let b = a.select(&head, &head)?;
        let (x1, x2) = (row_of(a, d, 0..d), row_of(a, d + 1, 0..d));
        let (y1, y2) = (column_of(a, d, 0..d), column_of(a, d + 1, 0..d));
        let tail = IndexSet::interval(d + 1, n);
        let w = a.select(&tail, &tail)?;
        let (lhs, rhs) = determinant_uncrossing_sides(&b, [&x1, &x2], [&y1, &y2], &w)?;
        Ok(if lhs == rhs {
            Outcome::Pass(format!("both sides {lhs}"))
        } else {
            Outcome::Fail(format!("{lhs} != {rhs}"))
        })
    });
}

fn boundedness_suite(a: &Matrix<Q>, v: &mut Verification) {
    let n = a.rows();
    let unit = (0..n).all(|i| a[(i, i)] == Q::from_i64(1)) && a.is_nonnegative();
    if !unit {
        v.push(
            "boundedness",
            Outcome::Skip("needs a non-negative matrix with unit diagonal".into()),
        );
        return;
    }
    let max = a
        .as_slice()
        .iter()
        .fold(Q::from_i64(1), |acc, x| if *x > acc { x.clone() } else { acc });
    v.run("entry-bound", || {
        let check = entry_bound_check(a, &max)?;
        Ok(match check.first_violation {
            None => Outcome::Pass(format!("{} entries, M = {max}", check.checked)),
            Some((i, j, t)) => Outcome::Fail(format!("a^({t})_{i}{j} exceeds B(n,1,{t})")),
        })
    });
    if n > EXHAUSTIVE_MAX {
        v.push("perm-ratio", too_large(n, EXHAUSTIVE_MAX));
        v.push("cycle-sum", too_large(n, EXHAUSTIVE_MAX));
        return;
    }
    v.run("perm-ratio", || {
        let mut tally = Tally::default();
        for s in IndexSet::all_subsets(n) {
            for i in (1..=n).filter(|i| !s.contains(*i)) {
                for j in (1..=n).filter(|j| !s.contains(*j)) {
                    let Some(r) = tally.skip_zero(perm_ratio_check(a, &s, i, j, &max))? else { continue };
                    tally.record(r.holds, || {
                        format!("S = {s}, i = {i}, j = {j}: {} > {}", r.ratio, r.bound)
                    });
                }
            }
        }
        Ok(tally.outcome())
    });
    v.run("cycle-sum", || {
        let mut tally = Tally::default();
        for t in 1..=n {
            for s in IndexSet::interval(t + 1, n).subsets().filter(|s| s.len() >= 2) {
                for i0 in s.iter() {
                    let Some(r) = tally.skip_zero(cycle_sum_ratio(a, t, &s, i0, &max))? else { continue };
                    tally.record(r.holds, || {
                        format!("t = {t}, S = {s}, i0 = {i0}: {} > {}", r.ratio, r.bound)
                    });
                }
            }
        }
        Ok(tally.outcome())
    });
}

fn psd_suite(g: &GramMatrix<Q>, v: &mut Verification) {
    let n = g.n();
    let gram = g.gram();
    v.run("gram-factor", || {
        let rebuilt = g.factor().transpose().matmul(g.factor())?;
        Ok(if &rebuilt == gram {
            Outcome::Pass(format!("d = {}", g.d()))
        } else {
            Outcome::Fail("entries differ from V^T V".into())
        })
    });
    v.push(
        "is-psd",
        if is_psd(gram) {
            Outcome::Pass(String::new())
        } else {
            Outcome::Fail("elimination found a negative pivot".into())
        },
    );
    if n > PERM_CHECK_MAX {
        v.push("psd-permanents", too_large(n, PERM_CHECK_MAX));
        return;
    }
    v.run("tensor-permanent", || {
        if n > TENSOR_MAX_N {
            return Ok(too_large(n, TENSOR_MAX_N));
        }
        let tensor = match permanent_tensor(g) {
            Err(Error::DimensionTooLarge { .. }) => {
                return Ok(Outcome::Skip("tensor space too large".into()))
            }
            r => r?,
        };
        let ryser = permanent_ryser(gram)?;
        Ok(if tensor == ryser {
            Outcome::Pass(format!("per = {ryser}"))
        } else {
            Outcome::Fail(format!("tensor {tensor} != Ryser {ryser}"))
        })
    });
    v.run("psd-schur", || {
        let c = psd_schur_check(g)?;
        let detail = format!("{} <= {}", c.exact, c.rhs);
        Ok(if !c.holds {
            Outcome::Fail(format!("{} > {}", c.exact, c.rhs))
        } else if !c.identity_holds {
            Outcome::Fail("per(A) differs from a*alpha_0 + alpha_1".into())
        } else if !c.rhs_matches_alpha {
            Outcome::Fail("bound differs from the alpha series".into())
        } else if !c.alpha.all_nonnegative() {
            Outcome::Fail("negative alpha coefficient".into())
        } else {
            Outcome::Pass(detail)
        })
    });
    v.run("psd-process", || {
        let cert = certify_process_psd(g)?;
        Ok(match cert.steps.iter().find(|s| !(s.reconstructed && s.psd)) {
            None => Outcome::Pass(format!("{} trailing blocks", cert.steps.len())),
            Some(s) => Outcome::Fail(format!(
                "trailing block after step {}: reconstructed = {}, psd = {}",
                s.t, s.reconstructed, s.psd
            )),
        })
    });
    v.run("psd-soundness", || {
        let bound = run_process(g, false, None)?.bound();
        let exact = permanent_ryser(gram)?;
        Ok(if exact <= bound {
            Outcome::Pass(format!("{exact} <= {bound}"))
        } else {
            Outcome::Fail(format!("{exact} > {bound}"))
        })
    });
}

fn process_suite(a: &Matrix<Q>, gram: Option<&GramMatrix<Q>>, eps: Option<&Q>, v: &mut Verification) {
    let n = a.rows();
    if !a.is_nonnegative() {
        if gram.is_none() {
            v.push("process", Outcome::Skip("input has negative entries".into()));
        }
        return;
    }
    let small = n <= PERM_CHECK_MAX;
    v.run("process-soundness", || {
        if !small {
            return Ok(too_large(n, PERM_CHECK_MAX));
        }
        let bound = run_process(a, false, None)?.bound();
        let exact = permanent_ryser(a)?;
        Ok(if exact <= bound {
            Outcome::Pass(format!("{exact} <= {bound}"))
        } else {
            Outcome::Fail(format!("{exact} > {bound}"))
        })
    });
    v.run("pivot-ratios", || {
        if !small {
            return Ok(too_large(n, PERM_CHECK_MAX));
        }
        let checks = pivot_lower_bound_check(a)?;
        Ok(match checks.iter().find(|c| !c.holds) {
            None => Outcome::Pass(format!("{} steps", checks.len())),
            Some(c) => Outcome::Fail(format!("step {}: ratio {} > pivot {}", c.t, c.ratio, c.pivot)),
        })
    });
    v.run("recursive-u", || {
        let trace = run_process(a, true, None)?;
        let u = recursive_u(a)?;
        let last = trace.final_matrix().expect("snapshots kept");
        Ok(if u.entries() != last {
            Outcome::Fail("recursion differs from the final process matrix".into())
        } else if u.diagonal_product() != trace.bound() {
            Outcome::Fail("diagonal product differs from the pivot product".into())
        } else {
            Outcome::Pass(String::new())
        })
    });
    v.run("solved-majorant", || {
        let b = solve_majorant(a)?;
        let cert = verify_majorant(MajorantCertificate::new(a.clone(), b, MajorantMode::Equality))?;
        if !cert.verified {
            return Ok(Outcome::Fail("solved majorant does not dominate u".into()));
        }
        let bound = cert.bound();
        if small {
            let exact = permanent_ryser(a)?;
            if exact > bound {
                return Ok(Outcome::Fail(format!("{exact} > {bound}")));
            }
        }
        Ok(Outcome::Pass(format!("bound {bound}")))
    });
    if let Some(eps) = eps {
        dominance_check(a, eps, v);
    }
}

fn dominance_check(a: &Matrix<Q>, eps: &Q, v: &mut Verification) {
    let n = a.rows();
    v.run("diag-dominance", || {
        let cert = diag_dominance_certify(a, eps)?;
        let Some(bound) = cert.bound else {
            let (i, j) = cert.first_violation.expect("uncertified has a violation");
            return Ok(Outcome::Skip(format!("not certified at eps = {eps}: condition fails at ({i}, {j})")));
        };
        if n <= PERM_CHECK_MAX {
            let exact = permanent_ryser(a)?;
            if exact > bound {
                return Ok(Outcome::Fail(format!("{exact} > {bound}")));
            }
        }
        Ok(Outcome::Pass(format!("bound {bound}")))
    });
}

fn certificate_check(
    a: &Matrix<Q>,
    b: &Matrix<Q>,
    mode: MajorantMode,
    v: &mut Verification,
) -> Result<(), CliError> {
    let n = a.rows();
    let cert = MajorantCertificate::new(a.clone(), b.clone(), mode);
    let outcome = match verify_majorant(cert) {
        Err(Error::ConditionViolated { row, col }) => {
            Outcome::Fail(format!("ConditionViolated at ({row}, {col})"))
        }
        Err(e @ (Error::ZeroPivot { .. } | Error::NegativeEntry { .. })) => Outcome::Fail(e.to_string()),
        Err(e) => return Err(e.into()),
        Ok(cert) if !cert.verified => Outcome::Fail("certificate does not dominate u".into()),
        Ok(cert) => {
            let bound = cert.bound();
            if n <= PERM_CHECK_MAX && permanent_ryser(a)? > bound {
                Outcome::Fail(format!("per(A) exceeds {bound}"))
            } else {
                Outcome::Pass(format!("bound {bound}"))
            }
        }
    };
    v.push("majorant-certificate", outcome);
    Ok(())
}
