//! Exact permanent and determinant oracles.

use crate::error::{Error, Result};
use crate::matcore::Matrix;
use crate::scalar::Scalar;

/// Largest dimension accepted by [`permanent_naive`].
pub const NAIVE_MAX: usize = 10;

/// Permanent by direct summation over all `n!` permutations.
pub fn permanent_naive<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    let n = m.n()?;
    if n > NAIVE_MAX {
        return Err(Error::DimensionTooLarge { n, max: NAIVE_MAX });
    }
    fn expand<T: Scalar>(m: &Matrix<T>, row: usize, used: u32, partial: &T, acc: &mut T) {
        let n = m.rows();
        if row == n {
            *acc += partial;
            return;
        }
        for col in 0..n {
            if used & (1 << col) == 0 {
                let next = partial.clone() * &m[(row, col)];
                expand(m, row + 1, used | (1 << col), &next, acc);
            }
        }
    }
    let mut acc = T::zero();
    expand(m, 0, 0, &T::one(), &mut acc);
    Ok(acc)
}

/// Permanent by Ryser's inclusion-exclusion formula.
pub fn permanent_ryser<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    let n = m.n()?;
    if n > T::RYSER_MAX {
        return Err(Error::DimensionTooLarge { n, max: T::RYSER_MAX });
    }
    if n == 0 {
        return Ok(T::one());
    }
    Ok(T::ryser_kernel(m))
}

/// Determinant by Gaussian elimination with partial pivoting (largest
/// magnitude in the column). Exact for rationals.
pub fn determinant<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    let n = m.n()?;
    let mut a = m.to_rows();
    let mut det = T::one();
    for k in 0..n {
        let pivot_row = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .max_by(|&i, &j| {
                a[i][k]
                    .abs()
                    .partial_cmp(&a[j][k].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(p) = pivot_row else {
            return Ok(T::zero());
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = a[i][k].clone() / &pivot;
            let (upper, lower) = a.split_at_mut(i);
            for (dst, src) in lower[0][k..].iter_mut().zip(&upper[k][k..]) {
                *dst -= &(factor.clone() * src);
            }
        }
    }
    Ok(det)
}

/// Both sides of the two-row determinant uncrossing identity
/// `det[[B,y1,y2],[x1',w11,w12],[x2',w21,w22]] * det(B)
///    = det[[B,y1],[x1',w11]] det[[B,y2],[x2',w22]] - det[[B,y2],[x1',w12]] det[[B,y1],[x2',w21]]`.
pub fn determinant_uncrossing_sides<T: Scalar>(
    b: &Matrix<T>,
    x: [&[T]; 2],
    y: [&[T]; 2],
    w: &Matrix<T>,
) -> Result<(T, T)> {
    b.ensure_square()?;
    if w.rows() != 2 || w.cols() != 2 {
        return Err(Error::DimensionMismatch("w must be 2x2".into()));
    }
    let full = two_row_border(b, x, y, w)?;
    let lhs = determinant(&full)? * determinant(b)?;
    let det1 = |xi: usize, yj: usize| -> Result<T> {
        determinant(&Matrix::bordered(b, x[xi], y[yj], &w[(xi, yj)])?)
    };
    let rhs = det1(0, 0)? * det1(1, 1)? - det1(0, 1)? * det1(1, 0)?;
    Ok((lhs, rhs))
}

/// `[[B, y1, y2], [x1', w11, w12], [x2', w21, w22]]`.
pub(crate) fn two_row_border<T: Scalar>(
    b: &Matrix<T>,
    x: [&[T]; 2],
    y: [&[T]; 2],
    w: &Matrix<T>,
) -> Result<Matrix<T>> {
    let d = b.rows();
    if x.iter().chain(y.iter()).any(|v| v.len() != d) {
        return Err(Error::DimensionMismatch(format!(
            "border vectors must have length {d}"
        )));
    }
    let ys = Matrix::from_fn(d, 2, |i, j| y[j][i].clone());
    let xt = Matrix::from_fn(2, d, |i, j| x[i][j].clone());
    Matrix::from_blocks(b, &ys, &xt, w)
}
