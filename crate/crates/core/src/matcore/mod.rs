//! Dense matrices, index sets, and the exact permanent/determinant oracles.

mod index;
mod matrix;
mod oracle;

pub use index::IndexSet;
pub use matrix::Matrix;
pub(crate) use matrix::validate_permutation;
pub(crate) use oracle::two_row_border;
pub use oracle::{
    determinant, determinant_uncrossing_sides, permanent_naive, permanent_ryser, NAIVE_MAX,
};
