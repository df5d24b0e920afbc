//! The permanental inverse `B*` with entries `per(B_{j,i}) / per(B)`.

use crate::error::{Error, Result};
use crate::matcore::{permanent_ryser, IndexSet, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct PermanentalInverse<T> {
    /// `per(B)`, strictly positive.
    pub source_perm: T,
    pub entries: Matrix<T>,
}

pub fn permanental_inverse<T: Scalar>(b: &Matrix<T>) -> Result<PermanentalInverse<T>> {
    let n = b.n()?;
    b.ensure_nonnegative()?;
    let per = permanent_ryser(b)?;
    if per.is_zero() {
        return Err(Error::ZeroPermanent);
    }
    let mut entries = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // entry (i, j) deletes row j and column i
            entries[(i, j)] = permanent_ryser(&b.minor(j + 1, i + 1)?)? / &per;
        }
    }
    Ok(PermanentalInverse {
        source_perm: per,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityDominance<T> {
    /// `B* B`.
    pub left: Matrix<T>,
    /// `B B*`.
    pub right: Matrix<T>,
    pub holds: bool,
}

/// Checks `B* B >= I` and `B B* >= I`: unit diagonal and non-negative
/// off-diagonal entries.
pub fn check_identity_dominance<T: Scalar>(b: &Matrix<T>) -> Result<IdentityDominance<T>> {
    let inv = permanental_inverse(b)?;
    let left = inv.entries.matmul(b)?;
    let right = b.matmul(&inv.entries)?;
    let dominates_identity = |m: &Matrix<T>| {
        (0..m.rows()).all(|i| {
            (0..m.cols()).all(|j| {
                if i == j {
                    m[(i, j)].approx_eq(&T::one())
                } else {
                    T::zero().approx_le(&m[(i, j)])
                }
            })
        })
    };
    let holds = dominates_identity(&left) && dominates_identity(&right);
    Ok(IdentityDominance { left, right, holds })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sides<T> {
    pub lhs: T,
    pub rhs: T,
}

impl<T: Scalar> Sides<T> {
    /// `lhs <= rhs` under the backend's inequality slack.
    pub fn holds(&self) -> bool {
        self.lhs.approx_le(&self.rhs)
    }

    pub fn is_equality(&self) -> bool {
        self.lhs.approx_eq(&self.rhs)
    }
}

/// `per(B(-S,-T)) / per(B)` against `per(B*(T,S))`.
pub fn minor_ratio_inequality<T: Scalar>(
    b: &Matrix<T>,
    s: &IndexSet,
    t: &IndexSet,
) -> Result<Sides<T>> {
    let inv = permanental_inverse(b)?;
    minor_ratio_with(b, &inv, s, t)
}

/// As [`minor_ratio_inequality`], reusing a precomputed inverse.
pub fn minor_ratio_with<T: Scalar>(
    b: &Matrix<T>,
    inv: &PermanentalInverse<T>,
    s: &IndexSet,
    t: &IndexSet,
) -> Result<Sides<T>> {
    if s.len() != t.len() {
        return Err(Error::DimensionMismatch(format!(
            "|S| = {} but |T| = {}",
            s.len(),
            t.len()
        )));
    }
    let lhs = permanent_ryser(&b.delete(s, t)?)? / &inv.source_perm;
    let rhs = permanent_ryser(&inv.entries.select(t, s)?)?;
    Ok(Sides { lhs, rhs })
}
