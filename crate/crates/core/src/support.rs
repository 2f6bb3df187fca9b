//! Finitely supported integer sequences.
//!
//! A [`SupportSeq`] is a function `Z -> Z` that is zero outside a finite
//! window, stored sparsely. It houses the presentation multiplicities
//! `a(n)`, `b(n)` and their difference.
//!
//! Invariants:
//! - stored entries are exactly the nonzero values
//! - evaluation outside the stored support returns 0

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Bound;

use crate::scalar::Int;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SupportSeq<I: Int> {
    entries: BTreeMap<I, I>,
}

impl<I: Int> SupportSeq<I> {
    /// The identically zero sequence.
    pub fn zero() -> Self {
        SupportSeq {
            entries: BTreeMap::new(),
        }
    }

    /// Builds a sequence from `(index, value)` pairs, summing repeated
    /// indices and dropping zero totals.
    pub fn from_pairs<T: IntoIterator<Item = (I, I)>>(pairs: T) -> Self {
        let mut seq = Self::zero();
        for (n, v) in pairs {
            seq.add(n, v);
        }
        seq
    }

    /// Adds `v` to the entry at `n`, removing it if the total becomes zero.
    pub fn add(&mut self, n: I, v: I) {
        if v.is_zero() {
            return;
        }
        let total = self.get(&n) + v;
        if total.is_zero() {
            self.entries.remove(&n);
        } else {
            self.entries.insert(n, total);
        }
    }

    /// Value at `n`; zero outside the support.
    pub fn get(&self, n: &I) -> I {
        self.entries.get(n).cloned().unwrap_or_else(I::zero)
    }

    /// Smallest index with a nonzero value, absent when the sequence is zero.
    pub fn lo(&self) -> Option<&I> {
        self.entries.keys().next()
    }

    /// Largest index with a nonzero value, absent when the sequence is zero.
    pub fn hi(&self) -> Option<&I> {
        self.entries.keys().next_back()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of nonzero entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nonzero entries in ascending index order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&I, &I)> {
        self.entries.iter()
    }

    /// Sum of all values.
    pub fn total(&self) -> I {
        self.entries
            .values()
            .fold(I::zero(), |acc, v| acc + v.clone())
    }

    /// Sum of the values at indices `<= n`.
    pub fn prefix_total(&self, n: &I) -> I {
        self.entries
            .range((Bound::Unbounded, Bound::Included(n.clone())))
            .fold(I::zero(), |acc, (_, v)| acc + v.clone())
    }

    /// Pointwise difference `self - other`.
    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, v) in other.iter() {
            out.add(n.clone(), -v.clone());
        }
        out
    }

    /// The sequence `max(self, 0)` of positive values.
    pub fn positive_part(&self) -> Self {
        SupportSeq {
            entries: self
                .entries
                .iter()
                .filter(|(_, v)| v.is_positive())
                .map(|(n, v)| (n.clone(), v.clone()))
                .collect(),
        }
    }

    /// The sequence `max(-self, 0)` holding the negated negative values.
    pub fn negative_part(&self) -> Self {
        SupportSeq {
            entries: self
                .entries
                .iter()
                .filter(|(_, v)| v.is_negative())
                .map(|(n, v)| (n.clone(), -v.clone()))
                .collect(),
        }
    }

    /// Restriction to the half-open interval `(lower, upper]`, where `None`
    /// means unbounded on that side.
    pub fn restrict(&self, lower: Option<&I>, upper: Option<&I>) -> Self {
        let lo = match lower {
            Some(m) => Bound::Excluded(m.clone()),
            None => Bound::Unbounded,
        };
        let hi = match upper {
            Some(m) => Bound::Included(m.clone()),
            None => Bound::Unbounded,
        };
        SupportSeq {
            entries: self
                .entries
                .range((lo, hi))
                .map(|(n, v)| (n.clone(), v.clone()))
                .collect(),
        }
    }

    /// Pointwise multiplication by a scalar.
    pub fn scale(&self, k: &I) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        SupportSeq {
            entries: self
                .entries
                .iter()
                .map(|(n, v)| (n.clone(), v.clone() * k.clone()))
                .collect(),
        }
    }

    /// True when every stored value is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|v| !v.is_negative())
    }
}

impl<I: Int> fmt::Display for SupportSeq<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (n, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{v}")?;
        }
        write!(f, "}}")
    }
}

impl<I: Int> FromIterator<(I, I)> for SupportSeq<I> {
    fn from_iter<T: IntoIterator<Item = (I, I)>>(iter: T) -> Self {
        Self::from_pairs(iter)
    }
}
