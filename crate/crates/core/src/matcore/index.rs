use std::fmt;

use crate::error::{Error, Result};

/// A strictly increasing set of 1-based indices.
///
/// Range checks against a concrete dimension happen when the set is used
/// (`select`, `delete`, ...), since the same set is often applied to
/// matrices of different sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IndexSet {
    members: Vec<usize>,
}

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet { members: Vec::new() }
    }

    /// Builds a set from arbitrary 1-based indices; duplicates and zero are rejected.
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = indices.into_iter().collect();
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DimensionMismatch(format!(
                    "index {} repeated in index set",
                    w[0]
                )));
            }
        }
        if members.first() == Some(&0) {
            return Err(Error::IndexOutOfRange { index: 0, n: 0 });
        }
        Ok(IndexSet { members })
    }

    /// `[k] = {1, ..., k}`.
    pub fn prefix(k: usize) -> Self {
        IndexSet {
            members: (1..=k).collect(),
        }
    }

    /// `{lo, ..., hi}` (empty when `lo > hi`).
    pub fn interval(lo: usize, hi: usize) -> Self {
        IndexSet {
            members: (lo.max(1)..=hi).collect(),
        }
    }

    pub fn singleton(i: usize) -> Result<Self> {
        Self::new([i])
    }

    /// Every subset of `{1, ..., n}`, in bitmask order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = IndexSet> {
        (0u64..(1u64 << n)).map(move |mask| IndexSet {
            members: (0..n).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect(),
        })
    }

    /// Every subset of `self`.
    pub fn subsets(&self) -> impl Iterator<Item = IndexSet> + '_ {
        let k = self.members.len();
        (0u64..(1u64 << k)).map(move |mask| IndexSet {
            members: (0..k)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| self.members[b])
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    /// `self + {i}`.
    pub fn with(&self, i: usize) -> Result<Self> {
        Self::new(self.iter().chain([i]))
    }

    /// `self - {i}`.
    pub fn without(&self, i: usize) -> Self {
        IndexSet {
            members: self.iter().filter(|&m| m != i).collect(),
        }
    }

    /// `[n] \ self`.
    pub fn complement(&self, n: usize) -> Self {
        IndexSet {
            members: (1..=n).filter(|&i| !self.contains(i)).collect(),
        }
    }

    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.members.last() {
            Some(&last) if last > n => Err(Error::IndexOutOfRange { index: last, n }),
            _ => Ok(()),
        }
    }

    /// 0-based positions, for internal storage access.
    pub(crate) fn zero_based(&self) -> Vec<usize> {
        self.members.iter().map(|i| i - 1).collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}
