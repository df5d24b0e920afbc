use crate::error::{Error, Result};
use crate::matcore::Matrix;
use crate::process::recursive_u;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MajorantMode {
    /// `a_ij + Σ b_is b_sj / a_ss <= b_ij`.
    Inequality,
    /// The same relation with equality at every entry.
    Equality,
}

/// A candidate `B` whose diagonal product bounds `per(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorantCertificate<T> {
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub mode: MajorantMode,
    pub verified: bool,
}

impl<T: Scalar> MajorantCertificate<T> {
    pub fn new(a: Matrix<T>, b: Matrix<T>, mode: MajorantMode) -> Self {
        MajorantCertificate {
            a,
            b,
            mode,
            verified: false,
        }
    }

    /// `Π b_ii`.
    pub fn bound(&self) -> T {
        self.b.diagonal().iter().fold(T::one(), |acc, v| acc * v)
    }
}

/// `a_ij + Σ_{s < min(i,j)} b_is b_sj / a_ss` (0-based `i`, `j`).
fn recursion_value<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, i: usize, j: usize) -> T {
    let mut acc = a[(i, j)].clone();
    for s in 0..i.min(j) {
        acc += &(b[(i, s)].clone() * &b[(s, j)] / &a[(s, s)]);
    }
    acc
}

fn check_positive_diagonal<T: Scalar>(a: &Matrix<T>) -> Result<()> {
    match (0..a.rows()).find(|&s| !a[(s, s)].is_positive()) {
        Some(s) => Err(Error::ZeroPivot { step: s + 1 }),
        None => Ok(()),
    }
}

/// Checks the majorant condition at every entry, then confirms `u <= b`
/// against [`recursive_u`].
pub fn verify_majorant<T: Scalar>(cert: MajorantCertificate<T>) -> Result<MajorantCertificate<T>> {
    let n = cert.a.n()?;
    if cert.b.rows() != n || cert.b.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "majorant is {}x{}, matrix is {n}x{n}",
            cert.b.rows(),
            cert.b.cols()
        )));
    }
    cert.a.ensure_nonnegative()?;
    cert.b.ensure_nonnegative()?;
    check_positive_diagonal(&cert.a)?;
    for i in 0..n {
        for j in 0..n {
            let lhs = recursion_value(&cert.a, &cert.b, i, j);
            let rhs = &cert.b[(i, j)];
            let ok = match cert.mode {
                MajorantMode::Inequality => lhs.approx_le(rhs),
                MajorantMode::Equality => lhs.approx_eq(rhs),
            };
            if !ok {
                return Err(Error::ConditionViolated { row: i + 1, col: j + 1 });
            }
        }
    }
    let u = recursive_u(&cert.a)?;
    let verified = cert.b.dominates(u.entries());
    Ok(MajorantCertificate { verified, ..cert })
}

/// Builds `B` from the equality form of the majorant condition, filling
/// entries in order of `min(i,j)`.
pub fn solve_majorant<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let n = a.n()?;
    a.ensure_nonnegative()?;
    check_positive_diagonal(a)?;
    let mut b = Matrix::zeros(n, n);
    for m in 0..n {
        for k in m..n {
            b[(m, k)] = recursion_value(a, &b, m, k);
            b[(k, m)] = recursion_value(a, &b, k, m);
        }
    }
    Ok(b)
}
