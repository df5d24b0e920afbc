//! Bounds derived from the process: majorants, diagonal dominance,
//! entry-size control for unit-diagonal inputs, the exponential family,
//! and the row-sum baseline.

mod boundedness;
mod dominance;
mod exp_family;
mod majorant;
mod report;

pub use boundedness::{
    bound_function, cycle_sum_ratio, entry_bound_check, perm_ratio_check, BoundFunction,
    CycleSumRatio, EntryBoundCheck, PermRatioCheck,
};
pub use dominance::{diag_dominance_certify, DominanceCertificate};
pub use exp_family::{exp_family, exp_family_cap, exp_family_closed_form};
pub use majorant::{solve_majorant, verify_majorant, MajorantCertificate, MajorantMode};
pub use report::BoundReport;

use crate::error::Result;
use crate::matcore::Matrix;
use crate::scalar::Scalar;

/// `Π_i Σ_j a_ij`.
pub fn rowsum_bound<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    a.ensure_square()?;
    a.ensure_nonnegative()?;
    Ok((0..a.rows())
        .map(|i| a.row(i).iter().fold(T::zero(), |acc, v| acc + v))
        .fold(T::one(), |acc, s| acc * s))
}
