use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::matcore::IndexSet;
use crate::scalar::Scalar;

/// Dense row-major matrix. Rectangular shapes are allowed as carriers for
/// border blocks; the permanent and determinant reject them.
///
/// `m[(i, j)]` addresses storage with 0-based indices. Operations that take
/// an [`IndexSet`] use 1-based indices.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Square matrix from integer rows; convenient for literals.
    pub fn from_int_rows<const N: usize>(rows: [[i64; N]; N]) -> Self {
        Self::from_fn(N, N, |i, j| T::from_i64(rows[i][j]))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self::from_fn(rows, cols, |_, _| value.clone())
    }

    /// Column vector (`len x 1`).
    pub fn column(values: &[T]) -> Self {
        Self::from_fn(values.len(), 1, |i, _| values[i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Dimension of a square matrix.
    pub fn n(&self) -> Result<usize> {
        self.ensure_square()?;
        Ok(self.rows)
    }

    pub fn ensure_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc += &(self[(i, k)].clone() * &other[(k, j)]);
            }
            acc
        }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: &T) -> Self {
        self.map(|v| v.clone() * factor)
    }

    /// Entrywise `self >= other`, with the backend's inequality slack.
    pub fn dominates(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| b.approx_le(a))
    }

    /// First negative entry (1-based), if any.
    pub fn first_negative(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(Scalar::is_negative)
            .map(|k| (k / self.cols + 1, k % self.cols + 1))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.first_negative().is_none()
    }

    pub fn ensure_nonnegative(&self) -> Result<()> {
        match self.first_negative() {
            Some((row, col)) => Err(Error::NegativeEntry { row, col }),
            None => Ok(()),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..i).all(|j| self[(i, j)].approx_eq(&self[(j, i)])))
    }

    /// Rows and columns by 0-based position lists; repeats are allowed.
    pub fn gather(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    /// `m(S, T)`: rows in `rows`, columns in `cols`.
    pub fn select(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Self> {
        rows.check_within(self.rows)?;
        cols.check_within(self.cols)?;
        Ok(self.gather(&rows.zero_based(), &cols.zero_based()))
    }

    /// `m(-S, -T)`: everything except the rows in `rows` and columns in `cols`.
    pub fn delete(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Self> {
        rows.check_within(self.rows)?;
        cols.check_within(self.cols)?;
        self.select(&rows.complement(self.rows), &cols.complement(self.cols))
    }

    /// The minor matrix with row `i` and column `j` removed (1-based).
    pub fn minor(&self, i: usize, j: usize) -> Result<Self> {
        self.delete(&IndexSet::singleton(i)?, &IndexSet::singleton(j)?)
    }

    /// `P A P^T` for the 1-based permutation `order` (position `k` receives
    /// original index `order[k]`).
    pub fn permute_symmetric(&self, order: &[usize]) -> Result<Self> {
        let n = self.n()?;
        let idx = validate_permutation(order, n)?;
        Ok(self.gather(&idx, &idx))
    }

    /// Assembles `[[B, Y], [Xt, W]]`.
    pub fn from_blocks(b: &Self, y: &Self, xt: &Self, w: &Self) -> Result<Self> {
        if b.rows != y.rows || xt.rows != w.rows || b.cols != xt.cols || y.cols != w.cols {
            return Err(Error::DimensionMismatch(format!(
                "blocks {}x{}, {}x{}, {}x{}, {}x{} do not tile",
                b.rows, b.cols, y.rows, y.cols, xt.rows, xt.cols, w.rows, w.cols
            )));
        }
        let rows = b.rows + xt.rows;
        let cols = b.cols + y.cols;
        Ok(Self::from_fn(rows, cols, |i, j| {
            match (i < b.rows, j < b.cols) {
                (true, true) => b[(i, j)].clone(),
                (true, false) => y[(i, j - b.cols)].clone(),
                (false, true) => xt[(i - b.rows, j)].clone(),
                (false, false) => w[(i - b.rows, j - b.cols)].clone(),
            }
        }))
    }

    /// `[[B, y], [x^T, w]]` for vectors `x`, `y` and scalar `w`.
    pub fn bordered(b: &Self, x: &[T], y: &[T], w: &T) -> Result<Self> {
        let xt = Self::column(x).transpose();
        Self::from_blocks(b, &Self::column(y), &xt, &Self::filled(1, 1, w.clone()))
    }

    pub fn max_bit_length(&self) -> Option<u64> {
        self.data.iter().map(Scalar::bit_length).max().flatten()
    }

    pub fn encoding_bits(&self) -> Option<u64> {
        self.data.iter().map(Scalar::encoding_bits).sum()
    }
}

/// Converts a 1-based permutation of `[n]` into 0-based positions.
pub(crate) fn validate_permutation(order: &[usize], n: usize) -> Result<Vec<usize>> {
    if order.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "ordering has {} entries, matrix dimension is {n}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in order {
        if p == 0 || p > n {
            return Err(Error::IndexOutOfRange { index: p, n });
        }
        if seen[p - 1] {
            return Err(Error::DimensionMismatch(format!(
                "ordering repeats index {p}"
            )));
        }
        seen[p - 1] = true;
    }
    Ok(order.iter().map(|p| p - 1).collect())
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            f.write_str(if i == 0 { "[" } else { ", [" })?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            f.write_str(if i == 0 { "[" } else { ", [" })?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type M = Matrix<Rational>;

    fn set(ix: &[usize]) -> IndexSet {
        IndexSet::new(ix.iter().copied()).unwrap()
    }

    #[test]
    fn select_examples() {
        let m = M::from_int_rows([[1, 2], [3, 4]]);
        assert_eq!(
            m.select(&set(&[1]), &set(&[2])).unwrap(),
            M::from_int_rows([[2]])
        );
        let empty = m.select(&IndexSet::empty(), &IndexSet::empty()).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 0));

        let a = M::from_fn(4, 4, |i, j| Rational::from_i64((10 * (i + 1) + j + 1) as i64));
        assert_eq!(
            a.select(&set(&[2, 4]), &set(&[1, 3])).unwrap(),
            M::from_int_rows([[21, 23], [41, 43]])
        );
        assert_eq!(
            m.select(&set(&[3]), &set(&[1])),
            Err(Error::IndexOutOfRange { index: 3, n: 2 })
        );
    }

    #[test]
    fn delete_examples() {
        let m = M::from_int_rows([[1, 2], [3, 4]]);
        assert_eq!(
            m.delete(&set(&[1]), &set(&[1])).unwrap(),
            M::from_int_rows([[4]])
        );
        assert_eq!(m.delete(&IndexSet::empty(), &IndexSet::empty()).unwrap(), m);

        let a = M::from_int_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]]);
        assert_eq!(
            a.delete(&set(&[2]), &set(&[3])).unwrap(),
            M::from_int_rows([[1, 2], [7, 8]])
        );
        assert!(a.delete(&set(&[4]), &IndexSet::empty()).is_err());
    }

    #[test]
    fn blocks_tile_and_validate() {
        let b = M::from_int_rows([[1, 2], [3, 4]]);
        let one = Rational::from_i64(1);
        let a = M::bordered(&b, &[one.clone(), one.clone()], &[one.clone(), one.clone()], &one)
            .unwrap();
        assert_eq!(a, M::from_int_rows([[1, 2, 1], [3, 4, 1], [1, 1, 1]]));
        assert!(M::from_blocks(&b, &M::zeros(1, 1), &M::zeros(1, 2), &M::zeros(1, 1)).is_err());
    }

    #[test]
    fn symmetric_permutation() {
        let a = M::from_int_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]]);
        let p = a.permute_symmetric(&[3, 1, 2]).unwrap();
        assert_eq!(p, M::from_int_rows([[9, 7, 8], [3, 1, 2], [6, 4, 5]]));
        assert!(a.permute_symmetric(&[1, 1, 2]).is_err());
        assert!(a.permute_symmetric(&[1, 2]).is_err());
        assert!(a.permute_symmetric(&[0, 1, 2]).is_err());
    }

    #[test]
    fn products_and_checks() {
        let a = M::from_int_rows([[1, 2], [3, 4]]);
        assert_eq!(
            a.matmul(&M::identity(2)).unwrap(),
            a
        );
        assert_eq!(a.transpose(), M::from_int_rows([[1, 3], [2, 4]]));
        assert!(a.matmul(&M::zeros(3, 1)).is_err());
        assert!(a.is_nonnegative());
        let neg = M::from_int_rows([[1, -2], [3, 4]]);
        assert_eq!(neg.first_negative(), Some((1, 2)));
        assert!(!a.is_symmetric());
        assert!(M::identity(3).is_symmetric());
        assert!(a.dominates(&M::identity(2)));
    }
}
