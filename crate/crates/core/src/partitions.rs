//! Subset posets, intervals, and interval partitions.
//!
//! A partition of a poset into intervals `[F_i, G_i]` is the poset-level form
//! of a Stanley decomposition; its Stanley depth is `min |G_i|`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matchings::{verify_psi, PsiMap};
use crate::subsets::{check_ground, enumerate_level, full_bits, graded_colex, SubsetMask};

/// Posets are materialized element by element; beyond this they are refused.
pub const MAX_MATERIALIZED_N: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosetKind {
    /// `{F : |F| >= d}`.
    Veronese { d: u32 },
    /// `{F : |F| <= d - 1}`.
    Quotient { d: u32 },
    /// Upward closure of the generator supports.
    Generated { generators: Vec<SubsetMask> },
}

impl fmt::Display for PosetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetKind::Veronese { d } => write!(f, "veronese(d={d})"),
            PosetKind::Quotient { d } => write!(f, "quotient(d={d})"),
            PosetKind::Generated { generators } => write!(f, "upset of {} generators", generators.len()),
        }
    }
}

/// A materialized family of subsets of `[n]`, elements sorted by
/// (cardinality, colex).
#[derive(Clone, Debug)]
pub struct SubsetPoset {
    n: u32,
    kind: PosetKind,
    elements: Vec<SubsetMask>,
    index: HashMap<u32, usize>,
}

impl SubsetPoset {
    fn materialize(n: u32, kind: PosetKind, keep: impl Fn(u32) -> bool) -> Result<Self> {
        check_ground(n)?;
        if n > MAX_MATERIALIZED_N {
            return Err(Error::TooLarge { what: "subset poset", n });
        }
        let mut elements: Vec<SubsetMask> =
            (0..=full_bits(n)).filter(|&b| keep(b)).map(|b| SubsetMask::raw(n, b)).collect();
        elements.sort_by(|a, b| graded_colex(*a, *b));
        let index = elements.iter().enumerate().map(|(i, s)| (s.bits(), i)).collect();
        Ok(Self { n, kind, elements, index })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kind(&self) -> &PosetKind {
        &self.kind
    }

    /// The `d` of a Veronese or quotient poset.
    pub fn d(&self) -> Option<u32> {
        match self.kind {
            PosetKind::Veronese { d } | PosetKind::Quotient { d } => Some(d),
            PosetKind::Generated { .. } => None,
        }
    }

    pub fn elements(&self) -> &[SubsetMask] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, set: SubsetMask) -> bool {
        set.n() == self.n && self.index.contains_key(&set.bits())
    }

    /// Position in [`elements`](Self::elements).
    pub fn position(&self, set: SubsetMask) -> Option<usize> {
        if set.n() != self.n {
            return None;
        }
        self.index.get(&set.bits()).copied()
    }

    /// True when every member of `interval` lies in the poset.
    pub fn contains_interval(&self, interval: &Interval) -> bool {
        interval.is_well_formed() && interval.members().all(|h| self.contains(h))
    }
}

/// `Δ(n, d) = {F ⊆ [n] : |F| >= d}`.
pub fn veronese_poset(n: u32, d: u32) -> Result<SubsetPoset> {
    check_ground(n)?;
    if d == 0 {
        return Err(Error::InvalidInput("Veronese degree must be at least 1".into()));
    }
    if d > n {
        return Err(Error::EmptyPoset(format!("no subsets of [{n}] have at least {d} elements")));
    }
    SubsetPoset::materialize(n, PosetKind::Veronese { d }, |b| b.count_ones() >= d)
}

/// `Q(n, d) = {F ⊆ [n] : |F| <= d - 1}`: supports of monomials outside the ideal.
pub fn quotient_poset(n: u32, d: u32) -> Result<SubsetPoset> {
    check_ground(n)?;
    if d == 0 || d > n {
        return Err(Error::InvalidInput(format!("quotient needs 1 <= d <= n, got n={n}, d={d}")));
    }
    SubsetPoset::materialize(n, PosetKind::Quotient { d }, |b| b.count_ones() < d)
}

/// All subsets of `[n]` containing at least one generator.
pub fn generated_upset(n: u32, generators: &[SubsetMask]) -> Result<SubsetPoset> {
    check_ground(n)?;
    if generators.is_empty() {
        return Err(Error::InvalidInput("generator list is empty".into()));
    }
    let mut gens = Vec::with_capacity(generators.len());
    for &g in generators {
        if g.n() != n && g.bits() & !full_bits(n) != 0 {
            return Err(Error::InvalidInput(format!("generator {g} is not a subset of [{n}]")));
        }
        gens.push(g.with_ground(n)?);
    }
    gens.sort_by(|a, b| graded_colex(*a, *b));
    gens.dedup();
    let bits: Vec<u32> = gens.iter().map(|g| g.bits()).collect();
    SubsetPoset::materialize(n, PosetKind::Generated { generators: gens }, |b| bits.iter().any(|&g| g & !b == 0))
}

/// `[lower, upper] = {H : lower ⊆ H ⊆ upper}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    pub lower: SubsetMask,
    pub upper: SubsetMask,
}

impl Interval {
    pub fn new(lower: SubsetMask, upper: SubsetMask) -> Result<Self> {
        if !lower.is_subset(upper) || lower.n() != upper.n() {
            return Err(Error::InvalidInput(format!("interval [{lower}, {upper}] has lower not contained in upper")));
        }
        Ok(Self { lower, upper })
    }

    pub fn singleton(set: SubsetMask) -> Self {
        Self { lower: set, upper: set }
    }

    pub fn is_well_formed(&self) -> bool {
        self.lower.is_subset(self.upper) && self.lower.n() == self.upper.n()
    }

    /// Number of sets in the interval, `2^(|upper| - |lower|)`.
    pub fn size(&self) -> u64 {
        1 << (self.upper.len() - self.lower.len())
    }

    pub fn contains(&self, set: SubsetMask) -> bool {
        self.lower.is_subset(set) && set.is_subset(self.upper)
    }

    /// Members in increasing bit order. Empty for a malformed interval.
    pub fn members(&self) -> impl Iterator<Item = SubsetMask> {
        let (n, base) = (self.lower.n(), self.lower.bits());
        let free = if self.is_well_formed() { self.upper.bits() & !base } else { 0 };
        let mut sub = Some(0u32);
        let well_formed = self.is_well_formed();
        std::iter::from_fn(move || {
            if !well_formed {
                return None;
            }
            let cur = sub?;
            // next submask of `free` in increasing order
            sub = (cur != free).then(|| (cur.wrapping_sub(free)) & free);
            Some(SubsetMask::raw(n, base | cur))
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

/// A list of intervals claimed to partition a poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalPartition {
    pub n: u32,
    pub kind: PosetKind,
    pub intervals: Vec<Interval>,
}

impl IntervalPartition {
    pub fn new(poset: &SubsetPoset, intervals: Vec<Interval>) -> Self {
        let mut p = Self { n: poset.n, kind: poset.kind.clone(), intervals };
        p.canonicalize();
        p
    }

    /// Sorts intervals by (|lower|, colex of lower), then by upper.
    pub fn canonicalize(&mut self) {
        self.intervals
            .sort_by(|a, b| graded_colex(a.lower, b.lower).then(graded_colex(a.upper, b.upper)));
    }

    /// `min |upper|` over the intervals, without checking validity.
    pub fn sdepth(&self) -> Option<u32> {
        self.intervals.iter().map(|i| i.upper.len()).min()
    }

    /// Rebuilds the poset this partition claims to cover.
    pub fn poset(&self) -> Result<SubsetPoset> {
        match &self.kind {
            PosetKind::Veronese { d } => veronese_poset(self.n, *d),
            PosetKind::Quotient { d } => quotient_poset(self.n, *d),
            PosetKind::Generated { generators } => generated_upset(self.n, generators),
        }
    }
}

/// The partition of `Δ(n, d)` induced by a superset injection Ψ:
/// `[F, Ψ(F)]` for each `d`-set, singletons for the `(d+1)`-sets outside the
/// image of Ψ, and singletons for every set of size `d + 2` or more.
/// Needs `n >= 2d + 1`; its Stanley depth is `d + 1`.
pub fn psi_partition(n: u32, d: u32, psi: &PsiMap) -> Result<IntervalPartition> {
    if d == 0 || n < 2 * d + 1 {
        return Err(Error::Hypothesis { n, d, requirement: "n >= 2d + 1" });
    }
    if psi.n != n || psi.d != d {
        return Err(Error::InvalidInput(format!("map is for n={}, d={}, expected n={n}, d={d}", psi.n, psi.d)));
    }
    let report = verify_psi(psi);
    if !report.passed() {
        return Err(Error::InvalidInput(format!("superset map fails verification: {:?}", report.violations[0])));
    }
    let poset = veronese_poset(n, d)?;
    let mut intervals: Vec<Interval> = psi.pairs().iter().map(|&(f, g)| Interval { lower: f, upper: g }).collect();
    let mut hit: Vec<u32> = psi.images().map(|g| g.bits()).collect();
    hit.sort_unstable();
    for h in enumerate_level(n, d + 1)?.members {
        if hit.binary_search(&h.bits()).is_err() {
            intervals.push(Interval::singleton(h));
        }
    }
    for k in d + 2..=n {
        intervals.extend(enumerate_level(n, k)?.members.into_iter().map(Interval::singleton));
    }
    Ok(IntervalPartition::new(&poset, intervals))
}

/// Partition of `Q(n, d)` with Stanley depth `d - 1`, built by splitting on
/// whether `n` belongs to a set: the sets avoiding `n` form `Q(n-1, d)`, the
/// ones containing it are `Q(n-1, d-1)` with `n` added.
pub fn quotient_partition(n: u32, d: u32) -> Result<IntervalPartition> {
    let poset = quotient_poset(n, d)?;
    let mut intervals = Vec::new();
    quotient_intervals(n, d, 0, &mut intervals);
    let intervals = intervals
        .into_iter()
        .map(|(lo, hi)| Interval { lower: SubsetMask::raw(n, lo), upper: SubsetMask::raw(n, hi) })
        .collect();
    Ok(IntervalPartition::new(&poset, intervals))
}

// Intervals of Q(m, d) on ground set [m], shifted up by `lift` (the elements
// above m already forced into every set).
fn quotient_intervals(m: u32, d: u32, lift: u32, out: &mut Vec<(u32, u32)>) {
    if d == 1 {
        out.push((lift, lift));
    } else if d > m {
        out.push((lift, lift | full_bits(m)));
    } else {
        quotient_intervals(m - 1, d, lift, out);
        quotient_intervals(m - 1, d - 1, lift | 1 << (m - 1), out);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    /// Intervals that are malformed or reach outside the poset.
    pub containment: Vec<Interval>,
    /// Poset elements covered more than once, with the covering intervals.
    pub overlaps: Vec<Overlap>,
    pub uncovered: Vec<SubsetMask>,
    /// `min |upper|`, present only when the partition is valid.
    pub sdepth: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Overlap {
    pub element: SubsetMask,
    pub intervals: Vec<Interval>,
}

impl PartitionReport {
    pub fn is_valid(&self) -> bool {
        self.containment.is_empty() && self.overlaps.is_empty() && self.uncovered.is_empty()
    }
}

/// Checks `partition` against `poset` element by element.
pub fn verify_partition(poset: &SubsetPoset, partition: &IntervalPartition) -> PartitionReport {
    let mut report = PartitionReport::default();
    let mut cover: Vec<Vec<usize>> = vec![Vec::new(); poset.len()];
    for (i, interval) in partition.intervals.iter().enumerate() {
        if !interval.is_well_formed() || interval.lower.n() != poset.n() {
            report.containment.push(*interval);
            continue;
        }
        let mut outside = false;
        for h in interval.members() {
            match poset.position(h) {
                Some(p) => cover[p].push(i),
                None => outside = true,
            }
        }
        if outside {
            report.containment.push(*interval);
        }
    }
    for (p, by) in cover.into_iter().enumerate() {
        let element = poset.elements()[p];
        match by.len() {
            0 => report.uncovered.push(element),
            1 => {}
            _ => report.overlaps.push(Overlap {
                element,
                intervals: by.into_iter().map(|i| partition.intervals[i]).collect(),
            }),
        }
    }
    if report.is_valid() {
        report.sdepth = partition.sdepth();
        if poset.is_empty() {
            report.sdepth = None;
        }
    }
    report
}
