//! The Permanent Process and its Gaussian-elimination counterpart.
//!
//! At step `t` (1-based) the process updates every entry with `i, j > t`:
//!
//! ```text
//! a_ij <- a_ij + a_it * a_tj / a_tt
//! ```
//!
//! The product of the pivots `a_tt` taken at their own step upper-bounds
//! `per(A)` for non-negative and PSD inputs. Replacing `+` by `-` and
//! updating every row gives ordinary elimination, whose pivot product is
//! `det(A)`.

use crate::error::{Error, Result};
use crate::matcore::{permanent_ryser, validate_permutation, IndexSet, Matrix};
use crate::psd::GramMatrix;
use crate::scalar::{Arithmetic, Scalar};

/// Input certified for the process: either entrywise non-negative or a
/// Gram matrix (PSD by construction).
#[derive(Debug, Clone, Copy)]
pub enum ProcessInput<'a, T> {
    NonNegative(&'a Matrix<T>),
    Gram(&'a GramMatrix<T>),
}

impl<'a, T> From<&'a Matrix<T>> for ProcessInput<'a, T> {
    fn from(m: &'a Matrix<T>) -> Self {
        ProcessInput::NonNegative(m)
    }
}

impl<'a, T> From<&'a GramMatrix<T>> for ProcessInput<'a, T> {
    fn from(g: &'a GramMatrix<T>) -> Self {
        ProcessInput::Gram(g)
    }
}

impl<'a, T: Scalar> ProcessInput<'a, T> {
    pub fn matrix(&self) -> &'a Matrix<T> {
        match self {
            ProcessInput::NonNegative(m) => m,
            ProcessInput::Gram(g) => g.gram(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `+` update on the trailing block.
    Permanent,
    /// `-` update on every row, right of the pivot.
    Gaussian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessTrace<T> {
    pub n: usize,
    /// `pivots[t-1] = a_tt^(t)`.
    pub pivots: Vec<T>,
    /// `A^(1), ..., A^(n)` when requested.
    pub snapshots: Option<Vec<Matrix<T>>>,
    /// 1-based ordering applied symmetrically before the run.
    pub ordering: Vec<usize>,
    pub arithmetic: Arithmetic,
    pub variant: Variant,
    /// Steps skipped because a PSD input had a zero pivot with an all-zero row.
    pub skipped_steps: Vec<usize>,
}

impl<T: Scalar> ProcessTrace<T> {
    /// Product of the pivots.
    pub fn bound(&self) -> T {
        self.pivots.iter().fold(T::one(), |acc, p| acc * p)
    }

    /// `A^(t)` (1-based), when snapshots were kept.
    pub fn snapshot(&self, t: usize) -> Option<&Matrix<T>> {
        self.snapshots.as_ref()?.get(t.checked_sub(1)?)
    }

    /// `A^(n)`, when snapshots were kept.
    pub fn final_matrix(&self) -> Option<&Matrix<T>> {
        self.snapshots.as_ref()?.last()
    }
}

/// Runs the Permanent Process.
///
/// `ordering` is a 1-based permutation; position `k` of the processed
/// matrix holds original index `ordering[k]`.
pub fn run_process<'a, T: Scalar>(
    input: impl Into<ProcessInput<'a, T>>,
    keep_snapshots: bool,
    ordering: Option<&[usize]>,
) -> Result<ProcessTrace<T>> {
    let input = input.into();
    let source = input.matrix();
    source.ensure_square()?;
    let gram = matches!(input, ProcessInput::Gram(_));
    if !gram {
        if let Some((row, col)) = source.first_negative() {
            return Err(Error::NegativeInput { row, col });
        }
    }
    let (a, ordering) = apply_ordering(source, ordering)?;
    eliminate(a, ordering, Variant::Permanent, keep_snapshots, gram)
}

/// `Π pivots` of the Permanent Process.
pub fn process_bound<'a, T: Scalar>(input: impl Into<ProcessInput<'a, T>>) -> Result<T> {
    Ok(run_process(input, false, None)?.bound())
}

/// Elimination with the `-` update and no pivoting. The pivot product is `det(A)`.
pub fn run_gaussian_variant<T: Scalar>(a: &Matrix<T>, keep_snapshots: bool) -> Result<ProcessTrace<T>> {
    let n = a.n()?;
    eliminate(a.clone(), (1..=n).collect(), Variant::Gaussian, keep_snapshots, false)
}

fn apply_ordering<T: Scalar>(
    source: &Matrix<T>,
    ordering: Option<&[usize]>,
) -> Result<(Matrix<T>, Vec<usize>)> {
    let n = source.rows();
    match ordering {
        Some(order) => {
            validate_permutation(order, n)?;
            Ok((source.permute_symmetric(order)?, order.to_vec()))
        }
        None => Ok((source.clone(), (1..=n).collect())),
    }
}

fn eliminate<T: Scalar>(
    mut a: Matrix<T>,
    ordering: Vec<usize>,
    variant: Variant,
    keep_snapshots: bool,
    allow_zero_rows: bool,
) -> Result<ProcessTrace<T>> {
    let n = a.rows();
    let mut snapshots = keep_snapshots.then(|| vec![a.clone()]);
    let mut pivots = Vec::with_capacity(n);
    let mut skipped_steps = Vec::new();
    for t in 0..n {
        let pivot = a[(t, t)].clone();
        pivots.push(pivot.clone());
        if pivot.is_zero() && !allow_zero_rows {
            // a singular matrix legitimately ends elimination on a zero pivot
            if !(variant == Variant::Gaussian && t + 1 == n) {
                return Err(Error::ZeroPivot { step: t + 1 });
            }
        }
        if t + 1 == n {
            break;
        }
        if pivot.is_zero() {
            let row_clear = (t + 1..n).all(|i| a[(i, t)].is_zero() && a[(t, i)].is_zero());
            if !row_clear {
                return Err(Error::InvalidGram(format!(
                    "zero pivot with a non-zero row at step {}",
                    t + 1
                )));
            }
            skipped_steps.push(t + 1);
        } else {
            match variant {
                Variant::Permanent => {
                    for i in t + 1..n {
                        if a[(i, t)].is_zero() {
                            continue;
                        }
                        let factor = a[(i, t)].clone() / &pivot;
                        for j in t + 1..n {
                            let delta = factor.clone() * &a[(t, j)];
                            a[(i, j)] += &delta;
                        }
                    }
                }
                Variant::Gaussian => {
                    // row t is zeroed right of the pivot, so read it from a copy
                    let pivot_row: Vec<T> = a.row(t).to_vec();
                    for i in 0..n {
                        if a[(i, t)].is_zero() {
                            continue;
                        }
                        let factor = a[(i, t)].clone() / &pivot;
                        for j in t + 1..n {
                            let delta = factor.clone() * &pivot_row[j];
                            a[(i, j)] -= &delta;
                        }
                    }
                }
            }
        }
        if let Some(s) = snapshots.as_mut() {
            s.push(a.clone());
        }
    }
    Ok(ProcessTrace {
        n,
        pivots,
        snapshots,
        ordering,
        arithmetic: T::ARITHMETIC,
        variant,
        skipped_steps,
    })
}

/// `u_ij = a^(min(i,j))_ij`, the value each entry has when it freezes.
#[derive(Debug, Clone, PartialEq)]
pub struct UMatrix<T>(pub Matrix<T>);

impl<T: Scalar> UMatrix<T> {
    pub fn entries(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn diagonal_product(&self) -> T {
        self.0.diagonal().iter().fold(T::one(), |acc, v| acc * v)
    }
}

/// Computes `u` by the recursion `u_ij = a_ij + Σ_{s < min(i,j)} u_is u_sj / u_ss`.
pub fn recursive_u<T: Scalar>(a: &Matrix<T>) -> Result<UMatrix<T>> {
    let n = a.n()?;
    a.ensure_nonnegative()?;
    let mut u: Matrix<T> = Matrix::zeros(n, n);
    // fill in order of m = min(i,j): row m from the diagonal rightwards, column m downwards
    for m in 0..n {
        for k in m..n {
            for (i, j) in [(m, k), (k, m)] {
                let mut acc = a[(i, j)].clone();
                for s in 0..m {
                    acc += &(u[(i, s)].clone() * &u[(s, j)] / &u[(s, s)]);
                }
                u[(i, j)] = acc;
            }
        }
        if u[(m, m)].is_zero() {
            return Err(Error::ZeroPivot { step: m + 1 });
        }
    }
    Ok(UMatrix(u))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PivotCheck<T> {
    /// 1-based step.
    pub t: usize,
    pub pivot: T,
    /// `per(A^(t)(-[t-1],-[t-1])) / per(A^(t+1)(-[t],-[t]))`.
    pub ratio: T,
    pub holds: bool,
}

/// Checks each pivot against the ratio of consecutive trailing-block
/// permanents. The ratios telescope to `per(A)`.
pub fn pivot_lower_bound_check<'a, T: Scalar>(
    input: impl Into<ProcessInput<'a, T>>,
) -> Result<Vec<PivotCheck<T>>> {
    let trace = run_process(input, true, None)?;
    let n = trace.n;
    let trailing = |t: usize| -> Result<T> {
        // per(A^(t+1)(-[t], -[t])); the empty block when t = n
        if t == n {
            return Ok(T::one());
        }
        let snap = trace.snapshot(t + 1).expect("snapshots kept");
        let drop = IndexSet::prefix(t);
        permanent_ryser(&snap.delete(&drop, &drop)?)
    };
    let mut checks = Vec::with_capacity(n);
    let mut numer = permanent_ryser(trace.snapshot(1).expect("snapshots kept"))?;
    for t in 1..=n {
        let denom = trailing(t)?;
        if denom.is_zero() {
            return Err(Error::ZeroPermanent);
        }
        let ratio = numer / &denom;
        let pivot = trace.pivots[t - 1].clone();
        checks.push(PivotCheck {
            t,
            holds: ratio.approx_le(&pivot),
            pivot,
            ratio,
        });
        numer = denom;
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type M = Matrix<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn exp3() -> M {
        M::from_rows(vec![
            vec![q(1, 1), q(1, 2), q(1, 4)],
            vec![q(1, 2), q(1, 1), q(1, 2)],
            vec![q(1, 4), q(1, 2), q(1, 1)],
        ])
        .unwrap()
    }

    #[test]
    fn all_ones_three() {
        let a = M::filled(3, 3, q(1, 1));
        let trace = run_process(&a, true, None).unwrap();
        assert_eq!(trace.pivots, vec![q(1, 1), q(2, 1), q(4, 1)]);
        assert_eq!(trace.bound(), q(8, 1));
        assert_eq!(trace.snapshots.as_ref().unwrap().len(), 3);
        assert_eq!(trace.snapshot(2).unwrap()[(1, 2)], q(2, 1));
        assert_eq!(trace.final_matrix().unwrap()[(2, 2)], q(4, 1));
    }

    #[test]
    fn identity_and_exponential_examples() {
        let trace = run_process(&M::identity(5), false, None).unwrap();
        assert!(trace.pivots.iter().all(|p| *p == q(1, 1)));
        assert!(trace.snapshots.is_none());
        assert_eq!(process_bound(&exp3()).unwrap(), q(55, 32));
        let trace = run_process(&exp3(), false, None).unwrap();
        assert_eq!(trace.pivots, vec![q(1, 1), q(5, 4), q(11, 8)]);
    }

    #[test]
    fn all_ones_closed_form() {
        for n in 1..=8usize {
            let expected = q(1 << (n * (n - 1) / 2), 1);
            assert_eq!(process_bound(&M::filled(n, n, q(1, 1))).unwrap(), expected);
        }
    }

    #[test]
    fn errors_and_orderings() {
        let zero_diag = M::from_int_rows([[0, 1], [1, 1]]);
        assert_eq!(process_bound(&zero_diag), Err(Error::ZeroPivot { step: 1 }));
        let neg = M::from_int_rows([[1, -1], [1, 1]]);
        assert_eq!(
            process_bound(&neg),
            Err(Error::NegativeInput { row: 1, col: 2 })
        );
        // reordering moves the zero diagonal entry away from the first step
        let trace = run_process(&zero_diag, false, Some(&[2, 1])).unwrap();
        assert_eq!(trace.ordering, vec![2, 1]);
        assert_eq!(trace.pivots, vec![q(1, 1), q(1, 1)]);
        assert!(run_process(&zero_diag, false, Some(&[1, 1])).is_err());
    }

    #[test]
    fn gaussian_variant_examples() {
        let trace = run_gaussian_variant(&M::from_int_rows([[1, 2], [3, 4]]), true).unwrap();
        assert_eq!(trace.pivots, vec![q(1, 1), q(-2, 1)]);
        assert_eq!(trace.bound(), q(-2, 1));
        // lower triangular result
        assert_eq!(trace.final_matrix().unwrap()[(0, 1)], q(0, 1));
        assert_eq!(run_gaussian_variant(&M::identity(4), false).unwrap().bound(), q(1, 1));
        assert_eq!(
            run_gaussian_variant(&M::from_int_rows([[0, 1], [1, 0]]), false),
            Err(Error::ZeroPivot { step: 1 })
        );
    }

    #[test]
    fn recursive_u_examples() {
        let d = M::from_int_rows([[2, 0, 0], [0, 3, 0], [0, 0, 5]]);
        assert_eq!(recursive_u(&d).unwrap().0, d);
        let u = recursive_u(&M::filled(3, 3, q(1, 1))).unwrap();
        assert_eq!(u.0.diagonal(), vec![q(1, 1), q(2, 1), q(4, 1)]);
        assert_eq!(u.diagonal_product(), q(8, 1));
        assert_eq!(
            recursive_u(&M::from_int_rows([[0, 1], [1, 1]])),
            Err(Error::ZeroPivot { step: 1 })
        );
    }

    #[test]
    fn pivot_checks_on_examples() {
        let checks = pivot_lower_bound_check(&M::identity(4)).unwrap();
        assert!(checks.iter().all(|c| c.ratio == q(1, 1) && c.pivot == q(1, 1) && c.holds));

        let checks = pivot_lower_bound_check(&M::filled(3, 3, q(1, 1))).unwrap();
        assert_eq!(checks[0].ratio, q(6, 8));
        assert_eq!(checks[0].pivot, q(1, 1));
        assert!(checks.iter().all(|c| c.holds));
        let product = checks.iter().fold(q(1, 1), |acc, c| acc * &c.ratio);
        assert_eq!(product, q(6, 1));
    }
}
