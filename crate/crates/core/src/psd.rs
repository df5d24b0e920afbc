//! PSD inputs carried as Gram matrices `A = V^T V`.

use crate::error::{Error, Result};
use crate::matcore::{permanent_ryser, IndexSet, Matrix};
use crate::process::run_process;
use crate::scalar::{Arithmetic, Scalar};

/// Relative size below which a float entry counts as zero in [`is_psd`].
const PSD_FLOAT_TOL: f64 = 1e-10;

/// A PSD matrix together with the factor that certifies it.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T> {
    factor: Matrix<T>,
    gram: Matrix<T>,
}

impl<T: Scalar> GramMatrix<T> {
    /// `d x n` factor whose columns are `v_1, ..., v_n`.
    pub fn factor(&self) -> &Matrix<T> {
        &self.factor
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    pub fn n(&self) -> usize {
        self.gram.rows()
    }

    pub fn d(&self) -> usize {
        self.factor.rows()
    }
}

/// Builds `V^T V`. This is the only way to hand a PSD matrix to the process.
pub fn gram_from_factor<T: Scalar>(v: Matrix<T>) -> Result<GramMatrix<T>> {
    if v.rows() == 0 || v.cols() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "Gram factor must be at least 1x1, got {}x{}",
            v.rows(),
            v.cols()
        )));
    }
    let gram = v.transpose().matmul(&v)?;
    Ok(GramMatrix { factor: v, gram })
}

/// Largest `n` accepted by [`permanent_tensor`].
pub const TENSOR_MAX_N: usize = 6;
/// Largest tensor space dimension `d^n` accepted by [`permanent_tensor`].
pub const TENSOR_MAX_SPACE: usize = 1 << 20;

/// `per(A) = (1/n!) || Σ_σ v_σ(1) ⊗ ... ⊗ v_σ(n) ||^2`.
pub fn permanent_tensor<T: Scalar>(g: &GramMatrix<T>) -> Result<T> {
    let n = g.n();
    let d = g.d();
    if n > TENSOR_MAX_N {
        return Err(Error::DimensionTooLarge { n, max: TENSOR_MAX_N });
    }
    let space = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(d));
    let space = match space {
        Some(s) if s <= TENSOR_MAX_SPACE => s,
        _ => {
            return Err(Error::DimensionTooLarge {
                n: d.saturating_pow(n as u32),
                max: TENSOR_MAX_SPACE,
            })
        }
    };
    let columns: Vec<Vec<T>> = (0..n).map(|j| g.factor.col(j)).collect();
    let mut sym = vec![T::zero(); space];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut factorial = T::one();
    for k in 1..=n {
        factorial *= &T::from_i64(k as i64);
    }
    loop {
        let mut tensor = vec![T::one()];
        for &p in &perm {
            let v = &columns[p];
            let mut next = Vec::with_capacity(tensor.len() * d);
            for t in &tensor {
                for vr in v {
                    next.push(t.clone() * vr);
                }
            }
            tensor = next;
        }
        for (acc, t) in sym.iter_mut().zip(&tensor) {
            *acc += t;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let norm_sq = sym.iter().fold(T::zero(), |acc, s| acc + &(s.clone() * s));
    Ok(norm_sq / &factorial)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Coefficients of `per(a B + x x^T) = Σ_ℓ a^(m-ℓ) α_ℓ`, `m = dim(B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCoefficients<T> {
    /// `α_0, ..., α_m`; `α_0 = per(B)`.
    pub coeffs: Vec<T>,
}

impl<T: Scalar> AlphaCoefficients<T> {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn alpha(&self, l: usize) -> T {
        self.coeffs.get(l).cloned().unwrap_or_else(T::zero)
    }

    /// `per(a B + x x^T)` reassembled from the coefficients.
    pub fn evaluate(&self, a: &T) -> T {
        // Horner over descending powers of a: α_0 is the leading coefficient
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc * a + c)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| T::zero().approx_le(c))
    }
}

/// Recovers the α-coefficients by evaluating the permanent at `a = 1, ..., m+1`
/// and interpolating.
pub fn alpha_coefficients<T: Scalar>(b: &Matrix<T>, x: &[T]) -> Result<AlphaCoefficients<T>> {
    let m = b.n()?;
    if x.len() != m {
        return Err(Error::DimensionMismatch(format!("x must have length {m}")));
    }
    if m > T::RYSER_MAX {
        return Err(Error::DimensionTooLarge { n: m, max: T::RYSER_MAX });
    }
    let outer = Matrix::from_fn(m, m, |i, j| x[i].clone() * &x[j]);
    let nodes: Vec<T> = (1..=m + 1).map(|k| T::from_i64(k as i64)).collect();
    let values = nodes
        .iter()
        .map(|a| permanent_ryser(&b.scale(a).add(&outer)?))
        .collect::<Result<Vec<T>>>()?;
    let ascending = interpolate(&nodes, &values);
    Ok(AlphaCoefficients {
        coeffs: ascending.into_iter().rev().collect(),
    })
}

/// Lagrange interpolation; returns monomial coefficients in ascending order.
fn interpolate<T: Scalar>(nodes: &[T], values: &[T]) -> Vec<T> {
    let k = nodes.len();
    let mut coeffs = vec![T::zero(); k];
    for i in 0..k {
        let mut basis = vec![T::one()];
        let mut denom = T::one();
        for j in 0..k {
            if i == j {
                continue;
            }
            // basis *= (a - nodes[j])
            let mut next = vec![T::zero(); basis.len() + 1];
            for (p, c) in basis.iter().enumerate() {
                next[p + 1] += c;
                next[p] -= &(c.clone() * &nodes[j]);
            }
            basis = next;
            denom *= &(nodes[i].clone() - &nodes[j]);
        }
        let scale = values[i].clone() / &denom;
        for (c, bcoef) in coeffs.iter_mut().zip(&basis) {
            *c += &(bcoef.clone() * &scale);
        }
    }
    coeffs
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdSchurCheck<T> {
    /// `per(A)`.
    pub exact: T,
    /// `a * per(B + x x^T / a)`.
    pub rhs: T,
    pub holds: bool,
    pub alpha: AlphaCoefficients<T>,
    /// `per(A) = a α_0 + α_1`.
    pub identity_holds: bool,
    /// `rhs = Σ_ℓ a^(1-ℓ) α_ℓ`.
    pub rhs_matches_alpha: bool,
}

/// Splits `A = [[B, x], [x^T, a]]` at the last row and checks
/// `per(A) <= a per(B + x x^T / a)`.
pub fn psd_schur_check<T: Scalar>(g: &GramMatrix<T>) -> Result<PsdSchurCheck<T>> {
    let n = g.n();
    let gram = &g.gram;
    let a = gram[(n - 1, n - 1)].clone();
    if a.is_zero() {
        return Err(Error::ZeroPivot { step: n });
    }
    let head = IndexSet::prefix(n - 1);
    let b = gram.select(&head, &head)?;
    let x: Vec<T> = (0..n - 1).map(|i| gram[(i, n - 1)].clone()).collect();
    let condensed = Matrix::from_fn(n - 1, n - 1, |i, j| {
        b[(i, j)].clone() + &(x[i].clone() * &x[j] / &a)
    });
    let exact = permanent_ryser(gram)?;
    let rhs = a.clone() * permanent_ryser(&condensed)?;
    let alpha = alpha_coefficients(&b, &x)?;

    let linear = a.clone() * &alpha.alpha(0) + &alpha.alpha(1);
    let identity_holds = exact.approx_eq(&linear);
    // Σ_ℓ a^(1-ℓ) α_ℓ = a * Σ_ℓ α_ℓ (1/a)^ℓ
    let inv_a = T::one() / &a;
    let mut power = T::one();
    let mut series = T::zero();
    for c in &alpha.coeffs {
        series += &(c.clone() * &power);
        power *= &inv_a;
    }
    let rhs_matches_alpha = rhs.approx_eq(&(a.clone() * series));
    Ok(PsdSchurCheck {
        holds: exact.approx_le(&rhs),
        exact,
        rhs,
        alpha,
        identity_holds,
        rhs_matches_alpha,
    })
}

/// Exact PSD test by symmetric elimination with diagonal pivoting.
///
/// A zero maximal diagonal forces the remaining block to vanish; no square
/// roots are taken, so the test is exact for rationals.
pub fn is_psd<T: Scalar>(m: &Matrix<T>) -> bool {
    if !m.is_square() || !m.is_symmetric() {
        return false;
    }
    let mut s = m.to_rows();
    let mut active: Vec<usize> = (0..m.rows()).collect();
    let near_zero = |v: &T, scale: &T| match T::ARITHMETIC {
        Arithmetic::ExactRational => v.is_zero(),
        Arithmetic::Float64 => v.abs().to_f64() <= PSD_FLOAT_TOL * scale.to_f64().max(1.0),
    };
    while !active.is_empty() {
        let p = *active
            .iter()
            .max_by(|&&i, &&j| s[i][i].partial_cmp(&s[j][j]).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty");
        let pivot = s[p][p].clone();
        let scale = pivot.abs();
        if active.iter().any(|&i| s[i][i].is_negative() && !near_zero(&s[i][i], &scale)) {
            return false;
        }
        if near_zero(&pivot, &scale) {
            let big = active
                .iter()
                .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                .map(|(i, j)| s[i][j].abs())
                .fold(T::zero(), |acc, v| if v > acc { v } else { acc });
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| near_zero(&s[i][j], &big)));
        }
        active.retain(|&i| i != p);
        for &i in &active {
            if s[i][p].is_zero() {
                continue;
            }
            let factor = s[i][p].clone() / &pivot;
            for &j in &active {
                let delta = factor.clone() * &s[p][j];
                s[i][j] -= &delta;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrailingStep {
    /// Trailing block `{t+1, ..., n}` of `A^(t+1)`.
    pub t: usize,
    /// The weighted factor reproduces the block exactly.
    pub reconstructed: bool,
    pub psd: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdProcessCertificate<T> {
    pub bound: T,
    pub steps: Vec<TrailingStep>,
}

impl<T> PsdProcessCertificate<T> {
    pub fn all_ok(&self) -> bool {
        self.steps.iter().all(|s| s.reconstructed && s.psd)
    }
}

/// Runs the process on a Gram matrix and certifies every trailing block
/// `A^(t+1)({t+1..n},{t+1..n})` as PSD.
///
/// The block is tracked as `Σ_r w_r f_r f_r^T` with positive weights: the
/// rows of `V` with weight 1, plus one row per step holding column `t` of
/// `A^(t)` with weight `1 / a_tt`. This is `V^T V + Σ x x^T / a` without
/// square roots. Each block is additionally run through [`is_psd`].
pub fn certify_process_psd<T: Scalar>(g: &GramMatrix<T>) -> Result<PsdProcessCertificate<T>> {
    let n = g.n();
    let trace = run_process(g, true, None)?;
    let mut rows: Vec<(T, Vec<T>)> = (0..g.d())
        .map(|r| (T::one(), g.factor.row(r).to_vec()))
        .collect();
    let mut steps = Vec::with_capacity(n.saturating_sub(1));
    for t in 1..n {
        let current = trace.snapshot(t).expect("snapshots kept");
        let pivot = current[(t - 1, t - 1)].clone();
        if !pivot.is_zero() {
            rows.push((T::one() / &pivot, current.col(t - 1)));
        }
        let next = trace.snapshot(t + 1).expect("snapshots kept");
        let tail = IndexSet::interval(t + 1, n);
        let block = next.select(&tail, &tail)?;
        let reconstructed = (t..n).all(|i| {
            (t..n).all(|j| {
                let mut acc = T::zero();
                for (w, f) in &rows {
                    acc += &(w.clone() * &f[i] * &f[j]);
                }
                acc.approx_eq(&next[(i, j)])
            })
        });
        steps.push(TrailingStep {
            t,
            reconstructed,
            psd: is_psd(&block),
        });
    }
    Ok(PsdProcessCertificate {
        bound: trace.bound(),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::{permanent_naive, process_bound};

    type M = Matrix<Rational>;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn gram_construction() {
        let g = gram_from_factor(M::identity(3)).unwrap();
        assert_eq!(g.gram(), &M::identity(3));
        let ones = gram_from_factor(M::filled(1, 4, q(1))).unwrap();
        assert_eq!(ones.gram(), &M::filled(4, 4, q(1)));
        assert_eq!(permanent_naive(ones.gram()).unwrap(), q(24));
        assert!(gram_from_factor(M::zeros(0, 3)).is_err());
    }

    #[test]
    fn tensor_formula_examples() {
        let i2 = gram_from_factor(M::identity(2)).unwrap();
        assert_eq!(permanent_tensor(&i2).unwrap(), q(1));
        let ones = gram_from_factor(M::filled(1, 3, q(1))).unwrap();
        assert_eq!(permanent_tensor(&ones).unwrap(), q(6));
        let g = gram_from_factor(M::from_int_rows([[1, -1, 2], [0, 1, 1], [2, 0, -1]])).unwrap();
        assert_eq!(permanent_tensor(&g).unwrap(), permanent_naive(g.gram()).unwrap());
        let wide = gram_from_factor(M::identity(7)).unwrap();
        assert!(matches!(permanent_tensor(&wide), Err(Error::DimensionTooLarge { .. })));
    }

    #[test]
    fn alpha_examples() {
        let b = M::from_int_rows([[2, 1], [1, 3]]);
        let zero = alpha_coefficients(&b, &[q(0), q(0)]).unwrap();
        assert_eq!(zero.coeffs, vec![q(7), q(0), q(0)]);

        let alpha = alpha_coefficients(&M::identity(2), &[q(1), q(1)]).unwrap();
        assert_eq!(alpha.coeffs, vec![q(1), q(2), q(2)]);
        assert_eq!(alpha.evaluate(&q(3)), q(17));
        assert_eq!(alpha.degree(), 2);
        assert!(alpha.all_nonnegative());
    }

    #[test]
    fn psd_schur_examples() {
        let ones = gram_from_factor(M::filled(1, 3, q(1))).unwrap();
        let c = psd_schur_check(&ones).unwrap();
        assert_eq!((c.exact.clone(), c.rhs.clone()), (q(6), q(8)));
        assert!(c.holds && c.identity_holds && c.rhs_matches_alpha);

        // x = 0: block diagonal, equality
        let v = M::from_int_rows([[1, 2, 0], [3, 1, 0], [0, 0, 2]]);
        let c = psd_schur_check(&gram_from_factor(v).unwrap()).unwrap();
        assert_eq!(c.exact, c.rhs);

        // a != 1 separates a α_0 + α_1 from a^2 α_0 + a α_1
        let g = gram_from_factor(M::from_int_rows([[1, 1], [0, 1]])).unwrap();
        assert_eq!(g.gram(), &M::from_int_rows([[1, 1], [1, 2]]));
        let c = psd_schur_check(&g).unwrap();
        assert_eq!(c.exact, q(3));
        assert!(c.identity_holds);

        let degenerate = gram_from_factor(M::from_int_rows([[1, 0], [0, 0]])).unwrap();
        assert_eq!(psd_schur_check(&degenerate), Err(Error::ZeroPivot { step: 2 }));
    }

    #[test]
    fn psd_test_accepts_and_rejects() {
        assert!(is_psd(&M::identity(3)));
        assert!(is_psd(&M::filled(3, 3, q(1))));
        assert!(is_psd(&M::from_int_rows([[0, 0], [0, 0]])));
        assert!(!is_psd(&M::from_int_rows([[1, 2], [2, 1]])));
        assert!(!is_psd(&M::from_int_rows([[0, 1], [1, 0]])));
        assert!(!is_psd(&M::from_int_rows([[1, 2], [0, 1]])));
        assert!(!is_psd(&M::from_int_rows([[-1]])));
        assert!(is_psd(&Matrix::<f64>::from_int_rows([[4, 2], [2, 1]])));
    }

    #[test]
    fn process_on_gram_skips_structural_zero() {
        // v_1 = 0 gives a zero first row and column
        let v = M::from_int_rows([[0, 1, 2], [0, 1, -1], [0, 0, 1]]);
        let g = gram_from_factor(v).unwrap();
        let trace = run_process(&g, false, None).unwrap();
        assert_eq!(trace.skipped_steps, vec![1]);
        assert_eq!(trace.bound(), q(0));
        assert_eq!(permanent_naive(g.gram()).unwrap(), q(0));

        let cert = certify_process_psd(&g).unwrap();
        assert!(cert.all_ok());
    }

    #[test]
    fn certified_process_on_negative_entries() {
        let v = M::from_int_rows([[1, -1, 2], [2, 1, -1], [0, 1, 1]]);
        let g = gram_from_factor(v).unwrap();
        assert!(g.gram().first_negative().is_some());
        assert!(process_bound(g.gram()).is_err());
        let bound = process_bound(&g).unwrap();
        assert!(permanent_naive(g.gram()).unwrap() <= bound);
        let cert = certify_process_psd(&g).unwrap();
        assert_eq!(cert.bound, bound);
        assert!(cert.all_ok());
    }
}
