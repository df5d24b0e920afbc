//! Random instance generators with small rational entries.

use num_traits::Zero;
use rand::Rng;

use crate::bounds::diag_dominance_certify;
use crate::matcore::Matrix;
use crate::psd::{gram_from_factor, GramMatrix};
use crate::scalar::{Rational, Scalar};

/// Largest denominator drawn by the generators.
pub const MAX_DENOM: i64 = 4;

/// Uniform `p/q` in `[lo, hi]` with `q` drawn from `1..=MAX_DENOM`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, lo: &Rational, hi: &Rational) -> Rational {
    let q = rng.gen_range(1..=MAX_DENOM);
    let scale = Rational::from_i64(q);
    let lo_n = (lo.clone() * &scale).ceil().to_integer();
    let hi_n = (hi.clone() * &scale).floor().to_integer();
    let lo_i: i64 = lo_n.try_into().expect("bounded range");
    let hi_i: i64 = hi_n.try_into().expect("bounded range");
    Rational::from_ratio(rng.gen_range(lo_i..=hi_i), q)
}

/// Non-negative entries in `[0, max]`, diagonal in `(0, max]` so every
/// pivot is positive.
pub fn random_nonnegative<R: Rng + ?Sized>(rng: &mut R, n: usize, max: i64) -> Matrix<Rational> {
    let zero = Rational::from_i64(0);
    let hi = Rational::from_i64(max);
    let eps = Rational::from_ratio(1, MAX_DENOM);
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            random_rational(rng, &eps, &hi)
        } else {
            random_rational(rng, &zero, &hi)
        }
    })
}

/// `d x n` factor with entries in `[-max, max]` and no zero column.
pub fn random_gram<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, max: i64) -> GramMatrix<Rational> {
    let lo = Rational::from_i64(-max);
    let hi = Rational::from_i64(max);
    let mut v = Matrix::from_fn(d, n, |_, _| random_rational(rng, &lo, &hi));
    for j in 0..n {
        while v.col(j).iter().all(|x| x.is_zero()) {
            let r = rng.gen_range(0..d);
            v[(r, j)] = random_rational(rng, &lo, &hi);
        }
    }
    gram_from_factor(v).expect("non-empty factor")
}

/// Unit diagonal, off-diagonal entries in `[0, m]`.
pub fn random_unit_diagonal<R: Rng + ?Sized>(rng: &mut R, n: usize, m: &Rational) -> Matrix<Rational> {
    let zero = Rational::from_i64(0);
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Rational::from_i64(1)
        } else {
            random_rational(rng, &zero, m)
        }
    })
}

/// Unit-diagonal matrix that satisfies the diagonal-dominance condition for `eps`.
///
/// Off-diagonal entries start as `delta * p/q` with `p/q` in `[0, 1]`, so a
/// small `delta` still yields non-zero entries; a pass in order of
/// `min(i,j)` then raises every entry that falls short of its condition.
/// Diagonal entries are raised only if the condition at `(i,i)` fails.
pub fn random_dd<R: Rng + ?Sized>(rng: &mut R, n: usize, eps: &Rational, delta: &Rational) -> Matrix<Rational> {
    let zero = Rational::from_i64(0);
    let one = Rational::from_i64(1);
    let mut a = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            one.clone()
        } else {
            random_rational(rng, &zero, &one) * delta
        }
    });
    let one_plus = Rational::from_i64(1) + eps;
    let factor = one_plus.clone() * &one_plus / eps;
    for m in 0..n {
        for k in m..n {
            for (i, j) in [(m, k), (k, m)] {
                let mut sum = Rational::from_i64(0);
                for s in 0..m {
                    sum += &(a[(i, s)].clone() * &a[(s, j)] / &a[(s, s)]);
                }
                let need = factor.clone() * sum;
                if a[(i, j)] < need {
                    a[(i, j)] = need;
                }
            }
        }
    }
    debug_assert!(diag_dominance_certify(&a, eps).map(|c| c.certified).unwrap_or(false));
    a
}
