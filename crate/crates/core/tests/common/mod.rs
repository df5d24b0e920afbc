//! Test-only oracles, written independently of the library routines.
#![allow(dead_code)]

use permbound_core::{Matrix, Rational, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Q = Rational;
pub type M = Matrix<Q>;

pub fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Permanent by listing every permutation (Heap's algorithm).
pub fn perm_by_permutations(a: &M) -> Q {
    let n = a.rows();
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let term = |p: &[usize]| (0..n).fold(q(1, 1), |acc, i| acc * &a[(i, p[i])]);
    let mut total = term(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            total += &term(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    total
}

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(a: &M) -> Q {
    let n = a.rows();
    if n == 0 {
        return q(1, 1);
    }
    let mut total = q(0, 1);
    for j in 0..n {
        if a[(0, j)] == q(0, 1) {
            continue;
        }
        let minor = Matrix::from_fn(n - 1, n - 1, |r, c| a[(r + 1, if c < j { c } else { c + 1 })].clone());
        let term = a[(0, j)].clone() * det_cofactor(&minor);
        if j % 2 == 0 {
            total += &term;
        } else {
            total -= &term;
        }
    }
    total
}

/// Rows and columns by 0-based position, repeats allowed.
pub fn gather(a: &M, rows: &[usize], cols: &[usize]) -> M {
    Matrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])].clone())
}

/// Runs the `+` update by hand on a dense copy and returns `A^(1..=n)`.
pub fn process_by_hand(a: &M) -> Vec<M> {
    let n = a.rows();
    let mut cur = a.to_rows();
    let mut out = vec![a.clone()];
    for t in 0..n.saturating_sub(1) {
        let prev = cur.clone();
        for i in t + 1..n {
            for j in t + 1..n {
                cur[i][j] = prev[i][j].clone() + prev[i][t].clone() * &prev[t][j] / &prev[t][t];
            }
        }
        out.push(Matrix::from_rows(cur.clone()).unwrap());
    }
    out
}

pub fn random_signed(rng: &mut ChaCha8Rng, rows: usize, cols: usize, max: i64) -> M {
    use rand::Rng;
    Matrix::from_fn(rows, cols, |_, _| q(rng.gen_range(-max * 3..=max * 3), 3))
}

pub fn f64_of(v: &Q) -> f64 {
    v.to_f64()
}
