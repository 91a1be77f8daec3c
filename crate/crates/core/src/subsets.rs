//! Subsets of the ground set `[n] = {1, ..., n}` packed into a machine word.
//!
//! Element `i` lives at bit `i - 1`. On a family of sets of equal cardinality
//! the recursive "compare maxima, then recurse on the rest" order is the
//! colexicographic order, and colex coincides with comparing the packed words
//! as unsigned integers. Everything in this module leans on that equivalence.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_N: u32 = 32;

/// A subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SubsetMask {
    bits: u32,
    n: u32,
}

impl SubsetMask {
    pub fn from_bits(n: u32, bits: u32) -> Result<Self> {
        check_ground(n)?;
        if n < MAX_N && bits >> n != 0 {
            let element = 32 - bits.leading_zeros();
            return Err(Error::ElementOutOfRange { element, n });
        }
        Ok(Self { bits, n })
    }

    /// Builds a set from 1-based elements. Duplicates are tolerated.
    pub fn from_elements(n: u32, elements: &[u32]) -> Result<Self> {
        check_ground(n)?;
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            bits |= 1 << (e - 1);
        }
        Ok(Self { bits, n })
    }

    pub fn empty(n: u32) -> Result<Self> {
        Self::from_bits(n, 0)
    }

    pub fn full(n: u32) -> Result<Self> {
        check_ground(n)?;
        Ok(Self { bits: full_bits(n), n })
    }

    // Callers guarantee bits fit in n.
    pub(crate) fn raw(n: u32, bits: u32) -> Self {
        debug_assert!(n == MAX_N || bits >> n == 0);
        Self { bits, n }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn len(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, element: u32) -> bool {
        element >= 1 && element <= self.n && self.bits & (1 << (element - 1)) != 0
    }

    /// Largest element, if any.
    pub fn max(self) -> Option<u32> {
        (self.bits != 0).then(|| 32 - self.bits.leading_zeros())
    }

    pub fn is_subset(self, other: SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: SubsetMask) -> bool {
        self.bits & other.bits == 0
    }

    pub fn union(self, other: SubsetMask) -> SubsetMask {
        Self::raw(self.n.max(other.n), self.bits | other.bits)
    }

    pub fn difference(self, other: SubsetMask) -> SubsetMask {
        Self::raw(self.n, self.bits & !other.bits)
    }

    pub fn complement(self) -> SubsetMask {
        Self::raw(self.n, full_bits(self.n) & !self.bits)
    }

    pub fn with(self, element: u32) -> Result<SubsetMask> {
        if element == 0 || element > self.n {
            return Err(Error::ElementOutOfRange { element, n: self.n });
        }
        Ok(Self::raw(self.n, self.bits | 1 << (element - 1)))
    }

    pub fn without(self, element: u32) -> SubsetMask {
        if element == 0 || element > self.n {
            return self;
        }
        Self::raw(self.n, self.bits & !(1 << (element - 1)))
    }

    /// Same set viewed over a different ground set.
    pub fn with_ground(self, n: u32) -> Result<SubsetMask> {
        Self::from_bits(n, self.bits)
    }

    /// Sorted 1-based elements.
    pub fn elements(self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            Some(i + 1)
        })
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Order used whenever sets of mixed cardinality are listed: by cardinality
/// first, colex within a level.
pub fn graded_colex(a: SubsetMask, b: SubsetMask) -> Ordering {
    a.len().cmp(&b.len()).then(a.bits.cmp(&b.bits))
}

/// Colex comparison of two sets of the same cardinality over the same `[n]`.
pub fn colex_compare(a: SubsetMask, b: SubsetMask) -> Result<Ordering> {
    if a.n != b.n || a.len() != b.len() {
        return Err(Error::InvalidComparison { left: a, right: b });
    }
    Ok(a.bits.cmp(&b.bits))
}

/// `A(n, k)`: every `k`-subset of `[n]` in colex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelFamily {
    pub n: u32,
    pub k: u32,
    pub members: Vec<SubsetMask>,
}

impl LevelFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn enumerate_level(n: u32, k: u32) -> Result<LevelFamily> {
    check_ground(n)?;
    if k > n {
        return Err(Error::EmptyFamily { n, k });
    }
    let members = LevelIter::new(n, k).collect();
    Ok(LevelFamily { n, k, members })
}

/// Streams the `k`-subsets of `[n]` in colex order without materializing them.
pub struct LevelIter {
    n: u32,
    next: Option<u64>,
}

impl LevelIter {
    pub fn new(n: u32, k: u32) -> Self {
        let next = (k <= n).then(|| (1u64 << k) - 1);
        Self { n, next }
    }
}

impl Iterator for LevelIter {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        // Gosper's hack; u64 keeps the carry out of bit n visible.
        self.next = if cur == 0 {
            None
        } else {
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            let succ = (((ripple ^ cur) >> 2) / low) | ripple;
            (succ >> self.n == 0).then_some(succ)
        };
        Some(SubsetMask::raw(self.n, cur as u32))
    }
}

/// Position of `set` in `enumerate_level(n, |set|)`. Independent of `n`.
pub fn rank_colex(set: SubsetMask) -> u64 {
    set.iter()
        .enumerate()
        .map(|(i, e)| binomial_unchecked(e as u64 - 1, i as u64 + 1))
        .sum()
}

pub fn unrank_colex(n: u32, k: u32, index: u64) -> Result<SubsetMask> {
    check_ground(n)?;
    if k > n {
        return Err(Error::EmptyFamily { n, k });
    }
    let count = binomial(n as u64, k as u64)?;
    if index >= count {
        return Err(Error::IndexOutOfRange { index, count });
    }
    let mut rest = index;
    let mut bits = 0u32;
    let mut top = n as u64;
    for i in (1..=k as u64).rev() {
        // largest c < top with C(c, i) <= rest
        let mut c = top - 1;
        while binomial_unchecked(c, i) > rest {
            c -= 1;
        }
        rest -= binomial_unchecked(c, i);
        bits |= 1 << c;
        top = c;
    }
    Ok(SubsetMask::raw(n, bits))
}

/// Exact `C(n, k)`; `k > n` gives 0.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by i + 1 at every step
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow { n, k })?
            / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow { n, k });
        }
    }
    Ok(acc as u64)
}

fn binomial_unchecked(n: u64, k: u64) -> u64 {
    binomial(n, k).expect("binomial within ground-set bound")
}

pub(crate) fn full_bits(n: u32) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn check_ground(n: u32) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::GroundSetSize(n));
    }
    Ok(())
}
