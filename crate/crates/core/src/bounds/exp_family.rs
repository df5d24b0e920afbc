//! The family `a_ij = c^(-|i-j|)`.

use crate::error::{Error, Result};
use crate::matcore::Matrix;
use crate::scalar::Scalar;

fn check_params<T: Scalar>(n: usize, c: &T) -> Result<()> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("n must be at least 1".into()));
    }
    if !c.is_positive() {
        return Err(Error::ParameterOutOfRange(format!("c must be positive, got {c}")));
    }
    Ok(())
}

pub fn exp_family<T: Scalar>(n: usize, c: &T) -> Result<Matrix<T>> {
    check_params(n, c)?;
    let inv = T::one() / c;
    Ok(Matrix::from_fn(n, n, |i, j| inv.powi(i.abs_diff(j) as u32)))
}

/// The matrix `A^(n)` of the process on [`exp_family`], in closed form:
/// `c^(-|i-j|) (1 + Σ_{k=1}^{min(i,j)-1} 2^(k-1) c^(-2k))`.
pub fn exp_family_closed_form<T: Scalar>(n: usize, c: &T) -> Result<Matrix<T>> {
    check_params(n, c)?;
    let inv = T::one() / c;
    let inv_sq = inv.clone() * &inv;
    // growth[m] = 1 + Σ_{k=1}^{m} 2^(k-1) c^(-2k)
    let mut growth = Vec::with_capacity(n);
    let mut acc = T::one();
    let mut term = inv_sq.clone();
    growth.push(acc.clone());
    for _ in 1..n {
        acc += &term;
        growth.push(acc.clone());
        term = term * &inv_sq * T::from_i64(2);
    }
    Ok(Matrix::from_fn(n, n, |i, j| {
        inv.powi(i.abs_diff(j) as u32) * &growth[i.min(j)]
    }))
}

/// `(1 + 1/(c^2 - 2))^n`, an upper bound on the process bound when `c^2 > 2`.
pub fn exp_family_cap<T: Scalar>(n: usize, c: &T) -> Result<T> {
    check_params(n, c)?;
    let gap = c.clone() * c - T::from_i64(2);
    if !gap.is_positive() {
        return Err(Error::ParameterOutOfRange(format!("c^2 must exceed 2, got c = {c}")));
    }
    Ok((T::one() + T::one() / gap).powi(n as u32))
}
