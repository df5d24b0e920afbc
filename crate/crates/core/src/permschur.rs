//! Permanental analogues of Schur's formula.
//!
//! Blocks follow the layout `A = [[B, Y], [X^T, W]]` with `B` of size
//! `d x d` and `W` of size `k x k`. `x_i` is the i-th column of `X` (so the
//! i-th row of `X^T`) and `y_j` the j-th column of `Y`.

use crate::error::{Error, Result};
use crate::matcore::{permanent_ryser, two_row_border, IndexSet, Matrix};
use crate::perminv::{permanental_inverse, Sides};
use crate::scalar::Scalar;

/// A square matrix split after its first `d` rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSplit<T> {
    d: usize,
    source: Matrix<T>,
}

impl<T: Scalar> BlockSplit<T> {
    /// `d` may be zero (empty `B`), but the lower-right block must be non-empty.
    pub fn new(source: Matrix<T>, d: usize) -> Result<Self> {
        let n = source.n()?;
        if d >= n {
            return Err(Error::DimensionMismatch(format!(
                "split point d = {d} must be below n = {n}"
            )));
        }
        Ok(BlockSplit { d, source })
    }

    pub fn from_blocks(b: &Matrix<T>, y: &Matrix<T>, xt: &Matrix<T>, w: &Matrix<T>) -> Result<Self> {
        b.ensure_square()?;
        w.ensure_square()?;
        Self::new(Matrix::from_blocks(b, y, xt, w)?, b.rows())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.source.rows() - self.d
    }

    pub fn source(&self) -> &Matrix<T> {
        &self.source
    }

    fn head(&self) -> IndexSet {
        IndexSet::prefix(self.d)
    }

    fn tail(&self) -> IndexSet {
        IndexSet::interval(self.d + 1, self.source.rows())
    }

    pub fn b(&self) -> Matrix<T> {
        self.source.select(&self.head(), &self.head()).expect("in range")
    }

    pub fn y(&self) -> Matrix<T> {
        self.source.select(&self.head(), &self.tail()).expect("in range")
    }

    pub fn xt(&self) -> Matrix<T> {
        self.source.select(&self.tail(), &self.head()).expect("in range")
    }

    pub fn w(&self) -> Matrix<T> {
        self.source.select(&self.tail(), &self.tail()).expect("in range")
    }
}

/// Both sides of `per([[B, y], [x^T, w]]) = per(B) (w + x^T B* y)`.
pub fn rank1_update_permanent<T: Scalar>(
    b: &Matrix<T>,
    x: &[T],
    y: &[T],
    w: &T,
) -> Result<Sides<T>> {
    let d = b.n()?;
    if x.len() != d || y.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "x and y must have length {d}"
        )));
    }
    if x.iter().chain(y).chain([w]).any(Scalar::is_negative) {
        return Err(Error::PreconditionViolated(
            "border entries must be non-negative".into(),
        ));
    }
    let inv = permanental_inverse(b)?;
    let lhs = permanent_ryser(&Matrix::bordered(b, x, y, w)?)?;
    let mut quad = w.clone();
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            quad += &(xi.clone() * &inv.entries[(i, j)] * yj);
        }
    }
    Ok(Sides {
        lhs,
        rhs: inv.source_perm * quad,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurBound<T> {
    /// `per(A)`.
    pub exact: T,
    /// `per(B) * per(W + X^T B* Y)`.
    pub bound: T,
}

impl<T: Scalar> SchurBound<T> {
    pub fn holds(&self) -> bool {
        self.exact.approx_le(&self.bound)
    }
}

/// The permanental Schur bound `per(A) <= per(B) per(W + X^T B* Y)`.
pub fn schur_permanent_bound<T: Scalar>(split: &BlockSplit<T>) -> Result<SchurBound<T>> {
    split.source.ensure_nonnegative()?;
    let b = split.b();
    let inv = permanental_inverse(&b)?;
    let complement = split
        .w()
        .add(&split.xt().matmul(&inv.entries)?.matmul(&split.y())?)?;
    Ok(SchurBound {
        exact: permanent_ryser(&split.source)?,
        bound: inv.source_perm * permanent_ryser(&complement)?,
    })
}

/// Sides of the row-uncrossing inequality
/// `per(M) per(B) <= sum_j per([[B, Y_{.,-j}], [X^T_{-i*,.}, W_{i*,j}]]) per([[B, y_j], [x_{i*}^T, w_{i*,j}]])`.
///
/// `i_star` is 1-based within the `W` block.
pub fn row_uncrossing_sides<T: Scalar>(split: &BlockSplit<T>, i_star: usize) -> Result<Sides<T>> {
    let k = split.k();
    if i_star == 0 || i_star > k {
        return Err(Error::IndexOutOfRange { index: i_star, n: k });
    }
    split.source.ensure_nonnegative()?;
    let d = split.d();
    let n = d + k;
    let b = split.b();
    let per_b = permanent_ryser(&b)?;
    let lhs = permanent_ryser(&split.source)? * &per_b;

    let row_star = d + i_star;
    let mut rhs = T::zero();
    for j in 1..=k {
        let col_j = d + j;
        // delete the W row i* and the W column j from the full matrix
        let reduced = split.source.delete(
            &IndexSet::singleton(row_star)?,
            &IndexSet::singleton(col_j)?,
        )?;
        let rows = IndexSet::prefix(d).with(row_star)?;
        let cols = IndexSet::prefix(d).with(col_j)?;
        let single = split.source.select(&rows, &cols)?;
        debug_assert_eq!(reduced.rows(), n - 1);
        rhs += &(permanent_ryser(&reduced)? * permanent_ryser(&single)?);
    }
    Ok(Sides { lhs, rhs })
}

/// Sides of the two-row inequality
/// `per([[B,y1,y2],[x1',w11,w12],[x2',w21,w22]]) per(B)
///   <= per[[B,y1],[x1',w11]] per[[B,y2],[x2',w22]] + per[[B,y2],[x1',w12]] per[[B,y1],[x2',w21]]`.
pub fn two_row_inequality_sides<T: Scalar>(
    b: &Matrix<T>,
    x: [&[T]; 2],
    y: [&[T]; 2],
    w: &Matrix<T>,
) -> Result<Sides<T>> {
    b.ensure_square()?;
    if w.rows() != 2 || w.cols() != 2 {
        return Err(Error::DimensionMismatch("w must be 2x2".into()));
    }
    let full = two_row_border(b, x, y, w)?;
    full.ensure_nonnegative()?;
    let lhs = permanent_ryser(&full)? * permanent_ryser(b)?;
    let per1 = |xi: usize, yj: usize| -> Result<T> {
        permanent_ryser(&Matrix::bordered(b, x[xi], y[yj], &w[(xi, yj)])?)
    };
    let rhs = per1(0, 0)? * per1(1, 1)? + per1(0, 1)? * per1(1, 0)?;
    Ok(Sides { lhs, rhs })
}

/// `C` with `c_ij = w_ij + x_i y_j / b`.
pub fn condense<T: Scalar>(b: &T, x: &[T], y: &[T], w: &Matrix<T>) -> Result<Matrix<T>> {
    let k = w.n()?;
    if x.len() != k || y.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "x and y must have length {k}"
        )));
    }
    if b.is_zero() {
        return Err(Error::ZeroPivot { step: 1 });
    }
    Ok(Matrix::from_fn(k, k, |i, j| {
        w[(i, j)].clone() + &(x[i].clone() * &y[j] / b)
    }))
}

/// Sides of `per(A) / a_11 <= per(C)` where `C` condenses `A` around its
/// first pivot (`C` is the trailing block after one process step).
pub fn condense_inequality_sides<T: Scalar>(a: &Matrix<T>) -> Result<Sides<T>> {
    let n = a.n()?;
    if n == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    a.ensure_nonnegative()?;
    let pivot = a[(0, 0)].clone();
    let x: Vec<T> = (1..n).map(|i| a[(i, 0)].clone()).collect();
    let y: Vec<T> = (1..n).map(|j| a[(0, j)].clone()).collect();
    let w = a.delete(&IndexSet::prefix(1), &IndexSet::prefix(1))?;
    let c = condense(&pivot, &x, &y, &w)?;
    Ok(Sides {
        lhs: permanent_ryser(a)? / &pivot,
        rhs: permanent_ryser(&c)?,
    })
}
