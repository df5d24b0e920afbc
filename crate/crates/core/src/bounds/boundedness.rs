//! Entry-size control for unit-diagonal inputs with entries in `[0, M]`.

use crate::error::{Error, Result};
use crate::matcore::{permanent_ryser, IndexSet, Matrix};
use crate::process::run_process;
use crate::scalar::Scalar;

/// `B(n,k,t) = γ_n · g(k,t)` with `γ_m = m! M^m` and `g(k,t) = M^k (M+1)^(t-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundFunction<T> {
    pub n: usize,
    pub m: T,
}

impl<T: Scalar> BoundFunction<T> {
    pub fn new(n: usize, m: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::ParameterOutOfRange("n must be at least 1".into()));
        }
        if m < T::one() {
            return Err(Error::ParameterOutOfRange(format!("M must be at least 1, got {m}")));
        }
        Ok(BoundFunction { n, m })
    }

    /// `γ_k = k! M^k`.
    pub fn gamma(&self, k: usize) -> T {
        (1..=k).fold(self.m.powi(k as u32), |acc, f| acc * T::from_i64(f as i64))
    }

    pub fn g(&self, k: usize, t: usize) -> T {
        let next = self.m.clone() + T::one();
        self.m.powi(k as u32) * next.powi(t.saturating_sub(1) as u32)
    }

    pub fn value(&self, k: usize, t: usize) -> Result<T> {
        if k == 0 || t == 0 {
            return Err(Error::ParameterOutOfRange(format!(
                "k and t must be at least 1, got k = {k}, t = {t}"
            )));
        }
        Ok(self.gamma(self.n) * self.g(k, t))
    }
}

pub fn bound_function<T: Scalar>(n: usize, m: &T, k: usize, t: usize) -> Result<T> {
    BoundFunction::new(n, m.clone())?.value(k, t)
}

fn check_unit_bounded<T: Scalar>(a: &Matrix<T>, m: &T) -> Result<BoundFunction<T>> {
    let n = a.n()?;
    let bf = BoundFunction::new(n, m.clone())?;
    for i in 0..n {
        for j in 0..n {
            let v = &a[(i, j)];
            if i == j && !v.is_one() {
                return Err(Error::PreconditionViolated(format!(
                    "diagonal entry ({}, {}) is {v}, expected 1",
                    i + 1,
                    j + 1
                )));
            }
            if v.is_negative() || v > m {
                return Err(Error::PreconditionViolated(format!(
                    "entry ({}, {}) = {v} lies outside [0, {m}]",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(bf)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntryBoundCheck {
    /// Number of `(i, j, t)` triples compared.
    pub checked: usize,
    /// First `(i, j, t)` with `a^(t)_ij > B(n,1,t)`, 1-based.
    pub first_violation: Option<(usize, usize, usize)>,
}

/// Compares every `a^(t)_ij` with `t <= min(i,j)` against `B(n,1,t)`.
pub fn entry_bound_check<T: Scalar>(a: &Matrix<T>, m: &T) -> Result<EntryBoundCheck> {
    let bf = check_unit_bounded(a, m)?;
    let n = bf.n;
    let trace = run_process(a, true, None)?;
    let mut checked = 0;
    for t in 1..=n {
        let cap = bf.value(1, t)?;
        let snap = trace.snapshot(t).expect("snapshots kept");
        for i in t - 1..n {
            for j in t - 1..n {
                checked += 1;
                if !snap[(i, j)].approx_le(&cap) {
                    return Ok(EntryBoundCheck {
                        checked,
                        first_violation: Some((i + 1, j + 1, t)),
                    });
                }
            }
        }
    }
    Ok(EntryBoundCheck {
        checked,
        first_violation: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleSumRatio<T> {
    pub ratio: T,
    /// `B(n, |S|, t)`.
    pub bound: T,
    pub holds: bool,
}

/// Sum over the `(|S|-1)!` cyclic permutations of `S` of `Π a^(t)_{i,σ(i)}`,
/// divided by `per(A^(t)(S - i0, S - i0))`.
pub fn cycle_sum_ratio<T: Scalar>(
    a: &Matrix<T>,
    t: usize,
    s: &IndexSet,
    i0: usize,
    m: &T,
) -> Result<CycleSumRatio<T>> {
    let bf = check_unit_bounded(a, m)?;
    let n = bf.n;
    if t == 0 || t > n {
        return Err(Error::IndexOutOfRange { index: t, n });
    }
    s.check_within(n)?;
    if s.len() < 2 {
        return Err(Error::PreconditionViolated("S needs at least two elements".into()));
    }
    if s.iter().any(|i| i <= t) {
        return Err(Error::PreconditionViolated(format!("S = {s} must lie in {{{}..{n}}}", t + 1)));
    }
    if !s.contains(i0) {
        return Err(Error::PreconditionViolated(format!("i0 = {i0} is not in S = {s}")));
    }
    let trace = run_process(a, true, None)?;
    let snap = trace.snapshot(t).expect("snapshots kept");
    let members: Vec<usize> = s.iter().map(|i| i - 1).collect();
    let numer = cycle_sum(snap, &members);
    let rest = s.without(i0);
    let denom = permanent_ryser(&snap.select(&rest, &rest)?)?;
    if denom.is_zero() {
        return Err(Error::ZeroPermanent);
    }
    let ratio = numer / &denom;
    let bound = bf.value(s.len(), t)?;
    Ok(CycleSumRatio {
        holds: ratio.approx_le(&bound),
        ratio,
        bound,
    })
}

/// Σ over single cycles through all of `members` (0-based) of the edge products.
fn cycle_sum<T: Scalar>(a: &Matrix<T>, members: &[usize]) -> T {
    // fix members[0] as the start; the remaining order enumerates each cycle once
    let start = members[0];
    let mut rest: Vec<usize> = members[1..].to_vec();
    let mut total = T::zero();
    permute(&mut rest, 0, &mut |order| {
        let mut prod = a[(start, order[0])].clone();
        for w in order.windows(2) {
            prod *= &a[(w[0], w[1])];
        }
        prod *= &a[(order[order.len() - 1], start)];
        total += &prod;
    });
    total
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PermRatioCheck<T> {
    pub ratio: T,
    /// `γ_{|S|+1}`.
    pub bound: T,
    pub holds: bool,
}

/// `per(A(S+i, S+j)) / per(A(S,S))` against `γ_{|S|+1}`.
pub fn perm_ratio_check<T: Scalar>(
    a: &Matrix<T>,
    s: &IndexSet,
    i: usize,
    j: usize,
    m: &T,
) -> Result<PermRatioCheck<T>> {
    let bf = check_unit_bounded(a, m)?;
    let n = bf.n;
    s.check_within(n)?;
    for idx in [i, j] {
        if idx == 0 || idx > n {
            return Err(Error::IndexOutOfRange { index: idx, n });
        }
        if s.contains(idx) {
            return Err(Error::PreconditionViolated(format!("{idx} must lie outside S = {s}")));
        }
    }
    let denom = permanent_ryser(&a.select(s, s)?)?;
    if denom.is_zero() {
        return Err(Error::ZeroPermanent);
    }
    let numer = permanent_ryser(&a.select(&s.with(i)?, &s.with(j)?)?)?;
    let ratio = numer / &denom;
    let bound = bf.gamma(s.len() + 1);
    Ok(PermRatioCheck {
        holds: ratio.approx_le(&bound),
        ratio,
        bound,
    })
}
