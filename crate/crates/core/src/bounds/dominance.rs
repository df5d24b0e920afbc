use crate::error::{Error, Result};
use crate::matcore::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceCertificate<T> {
    pub eps: T,
    pub certified: bool,
    /// `(1+ε)^n Π a_ii` when certified.
    pub bound: Option<T>,
    /// First failing entry in row-major order, 1-based.
    pub first_violation: Option<(usize, usize)>,
}

/// Checks `(1+ε)^2/ε · Σ_{s < min(i,j)} a_is a_sj / a_ss <= a_ij` everywhere.
/// When it holds, `per(A) <= (1+ε)^n Π a_ii`.
pub fn diag_dominance_certify<T: Scalar>(a: &Matrix<T>, eps: &T) -> Result<DominanceCertificate<T>> {
    let n = a.n()?;
    if !eps.is_positive() {
        return Err(Error::ParameterOutOfRange(format!("eps must be positive, got {eps}")));
    }
    a.ensure_nonnegative()?;
    if let Some(s) = (0..n).find(|&s| !a[(s, s)].is_positive()) {
        return Err(Error::ZeroPivot { step: s + 1 });
    }
    let one_plus = T::one() + eps;
    let factor = one_plus.clone() * &one_plus / eps;
    let mut first_violation = None;
    'scan: for i in 0..n {
        for j in 0..n {
            let mut sum = T::zero();
            for s in 0..i.min(j) {
                sum += &(a[(i, s)].clone() * &a[(s, j)] / &a[(s, s)]);
            }
            if !(factor.clone() * sum).approx_le(&a[(i, j)]) {
                first_violation = Some((i + 1, j + 1));
                break 'scan;
            }
        }
    }
    let certified = first_violation.is_none();
    let bound = certified.then(|| {
        a.diagonal()
            .iter()
            .fold(one_plus.powi(n as u32), |acc, d| acc * d)
    });
    Ok(DominanceCertificate {
        eps: eps.clone(),
        certified,
        bound,
        first_violation,
    })
}
