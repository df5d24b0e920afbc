//! Scalar backends: IEEE `f64` and arbitrary-precision rationals.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Identities are
//! checked with [`Scalar::approx_eq`] and inequalities with
//! [`Scalar::approx_le`]; both are exact comparisons for [`Rational`] and
//! tolerance-aware for `f64`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matcore::Matrix;

/// Exact rational scalar.
pub type Rational = BigRational;

/// Relative tolerance for float equality assertions.
pub const FLOAT_EQ_REL_TOL: f64 = 1e-9;

/// Relative slack for float inequality assertions (absorbs rounding only).
pub const FLOAT_LE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arithmetic {
    Float64,
    ExactRational,
}

impl Arithmetic {
    pub fn as_str(self) -> &'static str {
        match self {
            Arithmetic::Float64 => "float",
            Arithmetic::ExactRational => "rational",
        }
    }
}

impl fmt::Display for Arithmetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    const ARITHMETIC: Arithmetic;

    /// Largest dimension accepted by the Ryser oracle for this backend.
    const RYSER_MAX: usize;

    fn from_i64(v: i64) -> Self;

    /// `numer / denom`; panics on a zero denominator.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc *= self;
        }
        acc
    }

    /// Equality: exact for rationals, relative tolerance [`FLOAT_EQ_REL_TOL`] for floats.
    fn approx_eq(&self, other: &Self) -> bool;

    /// `self <= other`: exact for rationals, with [`FLOAT_LE_SLACK`] relative slack for floats.
    fn approx_le(&self, other: &Self) -> bool;

    /// Bit length of the larger of numerator and denominator; `None` for floats.
    fn bit_length(&self) -> Option<u64>;

    /// Total encoding size (numerator bits + denominator bits); `None` for floats.
    fn encoding_bits(&self) -> Option<u64>;

    /// Ryser inclusion-exclusion kernel. Callers go through
    /// [`permanent_ryser`](crate::permanent_ryser), which validates the shape.
    fn ryser_kernel(m: &Matrix<Self>) -> Self {
        ryser_generic(m)
    }
}

impl Scalar for f64 {
    const ARITHMETIC: Arithmetic = Arithmetic::Float64;
    const RYSER_MAX: usize = 30;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        numer as f64 / denom as f64
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let scale = f64::abs(*self).max(f64::abs(*other)).max(f64::MIN_POSITIVE);
        f64::abs(self - other) <= FLOAT_EQ_REL_TOL * scale
    }

    fn approx_le(&self, other: &Self) -> bool {
        let scale = f64::abs(*self).max(f64::abs(*other));
        *self <= *other + FLOAT_LE_SLACK * scale
    }

    fn bit_length(&self) -> Option<u64> {
        None
    }

    fn encoding_bits(&self) -> Option<u64> {
        None
    }
}

impl Scalar for Rational {
    const ARITHMETIC: Arithmetic = Arithmetic::ExactRational;
    const RYSER_MAX: usize = 24;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn approx_le(&self, other: &Self) -> bool {
        self <= other
    }

    fn bit_length(&self) -> Option<u64> {
        Some(self.numer().bits().max(self.denom().bits()))
    }

    fn encoding_bits(&self) -> Option<u64> {
        Some(self.numer().bits() + self.denom().bits())
    }

    /// Clears row denominators and runs Ryser over big integers, which is
    /// considerably cheaper than rational additions in the inner loop.
    fn ryser_kernel(m: &Matrix<Self>) -> Self {
        let n = m.rows();
        let mut scale = BigInt::one();
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let lcm = m
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            rows.push(
                m.row(i)
                    .iter()
                    .map(|v| v.numer() * (&lcm / v.denom()))
                    .collect(),
            );
            scale *= lcm;
        }
        let mut sums = vec![BigInt::zero(); n];
        let mut total = BigInt::zero();
        for k in 1u64..(1u64 << n) {
            let bit = k.trailing_zeros() as usize;
            let gray = k ^ (k >> 1);
            let added = gray & (1 << bit) != 0;
            for (sum, row) in sums.iter_mut().zip(&rows) {
                if added {
                    *sum += &row[bit];
                } else {
                    *sum -= &row[bit];
                }
            }
            let prod = sums.iter().fold(BigInt::one(), |acc, s| acc * s);
            if (n - gray.count_ones() as usize).is_multiple_of(2) {
                total += prod;
            } else {
                total -= prod;
            }
        }
        Rational::new(total, scale)
    }
}

/// Gray-code Ryser over any field backend, O(2^n n).
pub(crate) fn ryser_generic<T: Scalar>(m: &Matrix<T>) -> T {
    let n = m.rows();
    if n == 0 {
        return T::one();
    }
    let mut sums = vec![T::zero(); n];
    let mut total = T::zero();
    for k in 1u64..(1u64 << n) {
        let bit = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        let added = gray & (1 << bit) != 0;
        for (i, sum) in sums.iter_mut().enumerate() {
            if added {
                *sum += &m[(i, bit)];
            } else {
                *sum -= &m[(i, bit)];
            }
        }
        let prod = sums.iter().fold(T::one(), |acc, s| acc * s);
        if (n - gray.count_ones() as usize).is_multiple_of(2) {
            total += &prod;
        } else {
            total -= &prod;
        }
    }
    total
}

/// Parses a decimal (`-1.25`, `3`, `2.5e-3`) or rational (`p/q`) literal exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let shift = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if shift >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, shift as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-shift) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn parses_literals_exactly() {
        assert_eq!(parse_rational("3"), Some(q(3, 1)));
        assert_eq!(parse_rational("-1.25"), Some(q(-5, 4)));
        assert_eq!(parse_rational("0.1"), Some(q(1, 10)));
        assert_eq!(parse_rational("2.5e-3"), Some(q(1, 400)));
        assert_eq!(parse_rational("1E2"), Some(q(100, 1)));
        assert_eq!(parse_rational(" 6/4 "), Some(q(3, 2)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
        assert_eq!(parse_rational("-"), None);
    }

    #[test]
    fn float_comparisons_absorb_rounding_only() {
        assert!((0.1f64 + 0.2).approx_le(&0.3));
        assert!(!(0.31f64).approx_le(&0.3));
        assert!((1.0f64).approx_eq(&(1.0 + 1e-12)));
        assert!(!(1.0f64).approx_eq(&1.001));
    }

    #[test]
    fn rational_comparisons_are_exact() {
        assert!(!q(1, 3).approx_eq(&Rational::from_rational(&q(333_333_333, 1_000_000_000))));
        assert!(q(1, 3).approx_le(&q(1, 3)));
        assert_eq!(q(3, 4).bit_length(), Some(3));
        assert_eq!(q(3, 4).encoding_bits(), Some(5));
        assert_eq!(2.0f64.bit_length(), None);
    }
}
