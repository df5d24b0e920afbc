//! Upper bounds on matrix permanents via the Permanent Process.
//!
//! The process runs a Gaussian-elimination-like sweep whose pivot product
//! bounds `per(A)` from above for entrywise non-negative and PSD inputs.
//! Alongside it the crate provides exact permanent oracles, the permanental
//! inverse and the block inequalities behind the bound, majorant and
//! diagonal-dominance certificates, and entry-size checks.
//!
//! Every routine is generic over [`Scalar`], implemented for `f64` and for
//! exact [`Rational`] arithmetic.

pub mod bounds;
mod error;
pub mod matcore;
pub mod perminv;
pub mod permschur;
pub mod process;
pub mod psd;
pub mod sample;
mod scalar;

pub use error::{Error, Result};
pub use matcore::{
    determinant, determinant_uncrossing_sides, permanent_naive, permanent_ryser, IndexSet, Matrix,
    NAIVE_MAX,
};
pub use perminv::Sides;
pub use process::{process_bound, run_process, ProcessInput, ProcessTrace};
pub use psd::{gram_from_factor, GramMatrix};
pub use scalar::{parse_rational, Arithmetic, Rational, Scalar, FLOAT_EQ_REL_TOL, FLOAT_LE_SLACK};
