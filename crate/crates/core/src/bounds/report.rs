use crate::bounds::rowsum_bound;
use crate::error::Result;
use crate::matcore::permanent_ryser;
use crate::process::{process_bound, ProcessInput};
use crate::scalar::Scalar;

/// Process bound, row-sum baseline, and (for small inputs) the exact value.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub matrix_id: String,
    pub n: usize,
    pub process_bound: T,
    /// `None` when the input has negative entries.
    pub rowsum_bound: Option<T>,
    pub exact_perm: Option<T>,
}

impl<T: Scalar> BoundReport<T> {
    /// Computes `per(A)` exactly when `n <= exact_max`.
    pub fn compute<'a>(
        matrix_id: impl Into<String>,
        input: impl Into<ProcessInput<'a, T>>,
        exact_max: usize,
    ) -> Result<Self> {
        let input = input.into();
        let a = input.matrix();
        let n = a.n()?;
        let process_bound = process_bound(input)?;
        let rowsum_bound = if a.is_nonnegative() {
            Some(rowsum_bound(a)?)
        } else {
            None
        };
        let exact_perm = if n <= exact_max.min(T::RYSER_MAX) {
            Some(permanent_ryser(a)?)
        } else {
            None
        };
        Ok(BoundReport {
            matrix_id: matrix_id.into(),
            n,
            process_bound,
            rowsum_bound,
            exact_perm,
        })
    }

    /// `process_bound / per(A)`.
    pub fn process_ratio(&self) -> Option<T> {
        ratio(&self.process_bound, self.exact_perm.as_ref()?)
    }

    /// `rowsum_bound / per(A)`.
    pub fn rowsum_ratio(&self) -> Option<T> {
        ratio(self.rowsum_bound.as_ref()?, self.exact_perm.as_ref()?)
    }

    /// `per(A) <= process_bound`, when the exact value is known.
    pub fn is_consistent(&self) -> Option<bool> {
        Some(self.exact_perm.as_ref()?.approx_le(&self.process_bound))
    }
}

fn ratio<T: Scalar>(num: &T, den: &T) -> Option<T> {
    (!den.is_zero()).then(|| num.clone() / den)
}
