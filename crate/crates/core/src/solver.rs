//! Exact Stanley depth of a materialized poset by exhaustive interval
//! partition search.
//!
//! `exists_partition(P, s)` is a depth-first exact cover. At each node it
//! picks an uncovered element `F` from the lowest uncovered cardinality (such
//! an element cannot be covered except as the lower end of an interval), tries
//! every interval `[F, G]` with `|G| >= s` whose members all lie in `P` and are
//! still uncovered, recurses, and undoes. `G` is tried by descending
//! (cardinality, colex) unless configured otherwise.
//!
//! A partition reaching `s` also reaches `s - 1`, so `sdepth_exact` walks down
//! from an upper bound and stops at the first success.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{
    quotient_poset, veronese_poset, Interval, IntervalPartition, PosetKind, SubsetPoset, MAX_MATERIALIZED_N,
};
use crate::subsets::{full_bits, graded_colex, SubsetMask};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(600);
/// Largest `n` solved without the large-instance override.
pub const ENVELOPE_N: u32 = 7;

/// Which uncovered element the search branches on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ElementChoice {
    /// The (cardinality, colex)-minimal uncovered element.
    Lowest,
    /// Among uncovered elements of the lowest uncovered cardinality, the one
    /// with the fewest intervals that still fit (ties: colex-minimal). An
    /// element with none fails the branch immediately.
    #[default]
    FewestFits,
}

/// Order in which intervals `[F, G]` are tried for the branching element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BranchOrder {
    /// `G` by descending (cardinality, colex).
    #[default]
    LargestFirst,
    /// `G` by ascending cardinality, descending colex within a cardinality.
    SmallestFirst,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub node_budget: u64,
    pub time_limit: Option<Duration>,
    pub element_choice: ElementChoice,
    pub branch_order: BranchOrder,
    /// Prune a branch when the lowest uncovered level cannot be lifted to
    /// level `s` with what is left one level up.
    pub level_pruning: bool,
    pub allow_large: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            node_budget: DEFAULT_NODE_BUDGET,
            time_limit: Some(DEFAULT_TIME_LIMIT),
            element_choice: ElementChoice::default(),
            branch_order: BranchOrder::default(),
            level_pruning: true,
            allow_large: false,
        }
    }
}

impl SolverConfig {
    /// Plain search: lowest element first, largest interval first, no pruning.
    pub fn plain() -> Self {
        Self { element_choice: ElementChoice::Lowest, level_pruning: false, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(IntervalPartition),
    /// The search space was exhausted: no such partition exists.
    Absent,
    /// Node budget or wall clock ran out before a verdict.
    Timeout,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

fn check_envelope(poset: &SubsetPoset, config: &SolverConfig) -> Result<()> {
    if poset.n() > ENVELOPE_N && !config.allow_large {
        return Err(Error::OutsideEnvelope { n: poset.n(), max: ENVELOPE_N });
    }
    if poset.n() > MAX_MATERIALIZED_N {
        return Err(Error::TooLarge { what: "solver instance", n: poset.n() });
    }
    Ok(())
}

/// Searches for a partition of `poset` into intervals whose upper ends all have
/// at least `s` elements.
pub fn exists_partition(poset: &SubsetPoset, s: u32, config: &SolverConfig) -> Result<SearchResult> {
    check_envelope(poset, config)?;
    if s > poset.n() {
        return Err(Error::InvalidInput(format!("target {s} exceeds ground set size {}", poset.n())));
    }
    let mut search = Search::new(poset, s, config);
    let outcome = match search.run() {
        Verdict::Found => {
            let intervals = search
                .chosen
                .iter()
                .map(|&(lo, hi)| Interval { lower: SubsetMask::raw(poset.n(), lo), upper: SubsetMask::raw(poset.n(), hi) })
                .collect();
            SearchOutcome::Found(IntervalPartition::new(poset, intervals))
        }
        Verdict::Absent => SearchOutcome::Absent,
        Verdict::Timeout => SearchOutcome::Timeout,
    };
    Ok(SearchResult { outcome, nodes: search.nodes })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Found,
    Absent,
    Timeout,
}

struct Candidate {
    upper: u32,
    members: Vec<u64>,
}

struct Search<'a> {
    poset: &'a SubsetPoset,
    s: u32,
    config: &'a SolverConfig,
    words: usize,
    uncovered: Vec<u64>,
    /// Uncovered count per cardinality level.
    level_left: Vec<u64>,
    card: Vec<u32>,
    /// Candidate intervals per lower element, built on first visit.
    candidates: Vec<Option<Vec<Candidate>>>,
    /// bits -> element position, `u32::MAX` when absent.
    position: Vec<u32>,
    chosen: Vec<(u32, u32)>,
    nodes: u64,
    started: Instant,
}

impl<'a> Search<'a> {
    fn new(poset: &'a SubsetPoset, s: u32, config: &'a SolverConfig) -> Self {
        let len = poset.len();
        let words = len.div_ceil(64);
        let mut uncovered = vec![0u64; words];
        for i in 0..len {
            uncovered[i / 64] |= 1 << (i % 64);
        }
        let card: Vec<u32> = poset.elements().iter().map(|e| e.len()).collect();
        let mut level_left = vec![0u64; poset.n() as usize + 2];
        for &c in &card {
            level_left[c as usize] += 1;
        }
        let mut position = vec![u32::MAX; full_bits(poset.n()) as usize + 1];
        for (i, e) in poset.elements().iter().enumerate() {
            position[e.bits() as usize] = i as u32;
        }
        Self {
            poset,
            s,
            config,
            words,
            uncovered,
            level_left,
            card,
            candidates: (0..len).map(|_| None).collect(),
            position,
            chosen: Vec::new(),
            nodes: 0,
            started: Instant::now(),
        }
    }

    fn run(&mut self) -> Verdict {
        self.descend()
    }

    fn first_uncovered(&self) -> Option<usize> {
        self.uncovered
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn out_of_budget(&self) -> bool {
        if self.nodes > self.config.node_budget {
            return true;
        }
        match self.config.time_limit {
            Some(limit) if self.nodes.is_multiple_of(4096) => self.started.elapsed() > limit,
            _ => false,
        }
    }

    fn build_candidates(&self, lower: usize) -> Vec<Candidate> {
        let n = self.poset.n();
        let f = self.poset.elements()[lower].bits();
        let free = full_bits(n) & !f;
        let mut found = Vec::new();
        // every G ⊇ F: F plus a submask of the free bits
        let mut sub = free;
        loop {
            let g = f | sub;
            if g.count_ones() >= self.s {
                if let Some(members) = self.interval_members(f, g) {
                    found.push(Candidate { upper: g, members });
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        match self.config.branch_order {
            BranchOrder::LargestFirst => {
                found.sort_by(|a, b| graded_colex(SubsetMask::raw(n, b.upper), SubsetMask::raw(n, a.upper)))
            }
            BranchOrder::SmallestFirst => found.sort_by(|a, b| {
                a.upper.count_ones().cmp(&b.upper.count_ones()).then(b.upper.cmp(&a.upper))
            }),
        }
        found
    }

    // Member bitset of [f, g], or None if some member lies outside the poset.
    fn interval_members(&self, f: u32, g: u32) -> Option<Vec<u64>> {
        let free = g & !f;
        let mut members = vec![0u64; self.words];
        let mut sub = free;
        loop {
            let p = self.position[(f | sub) as usize];
            if p == u32::MAX {
                return None;
            }
            members[p as usize / 64] |= 1 << (p % 64);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        Some(members)
    }

    fn fits(&self, members: &[u64]) -> bool {
        members.iter().zip(&self.uncovered).all(|(m, u)| m & !u == 0)
    }

    fn toggle(&mut self, members: &[u64], cover: bool) {
        for (w, m) in members.iter().enumerate() {
            let mut bits = *m;
            while bits != 0 {
                let p = w * 64 + bits.trailing_zeros() as usize;
                let level = &mut self.level_left[self.card[p] as usize];
                if cover {
                    *level -= 1;
                } else {
                    *level += 1;
                }
                bits &= bits - 1;
            }
            if cover {
                self.uncovered[w] &= !m;
            } else {
                self.uncovered[w] |= m;
            }
        }
    }

    // Each uncovered set at the lowest uncovered level k < s must be the
    // lower end of its own interval, which needs s - k sets from level k + 1.
    fn hopeless(&self, lowest: usize) -> bool {
        let k = self.card[lowest] as usize;
        if k as u32 >= self.s {
            return false;
        }
        let need = self.level_left[k].saturating_mul((self.s as usize - k) as u64);
        need > self.level_left[k + 1]
    }

    fn ensure_candidates(&mut self, p: usize) {
        if self.candidates[p].is_none() {
            self.candidates[p] = Some(self.build_candidates(p));
        }
    }

    // Every uncovered element of the lowest uncovered level must be the lower
    // end of its interval, so branching on any of them is complete. None when
    // one of them has nothing left that fits.
    fn fewest_fits(&mut self, level: u32) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for w in 0..self.words {
            let mut bits = self.uncovered[w];
            while bits != 0 {
                let p = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if self.card[p] != level {
                    // elements are sorted by cardinality
                    return best.map(|b| b.0);
                }
                self.ensure_candidates(p);
                let fits = self.candidates[p]
                    .as_ref()
                    .expect("built above")
                    .iter()
                    .filter(|c| self.fits(&c.members))
                    .count();
                if fits == 0 {
                    return None;
                }
                if best.is_none_or(|(_, b)| fits < b) {
                    best = Some((p, fits));
                }
            }
        }
        best.map(|b| b.0)
    }

    fn descend(&mut self) -> Verdict {
        self.nodes += 1;
        if self.out_of_budget() {
            return Verdict::Timeout;
        }
        let Some(lowest) = self.first_uncovered() else {
            return Verdict::Found;
        };
        if self.config.level_pruning && self.hopeless(lowest) {
            return Verdict::Absent;
        }
        let lowest = match self.config.element_choice {
            ElementChoice::Lowest => lowest,
            ElementChoice::FewestFits => match self.fewest_fits(self.card[lowest]) {
                Some(p) => p,
                None => return Verdict::Absent,
            },
        };
        self.ensure_candidates(lowest);
        let candidates = self.candidates[lowest].take().expect("built above");
        let lower_bits = self.poset.elements()[lowest].bits();
        let mut verdict = Verdict::Absent;
        for c in &candidates {
            if !self.fits(&c.members) {
                continue;
            }
            self.toggle(&c.members, true);
            self.chosen.push((lower_bits, c.upper));
            match self.descend() {
                Verdict::Absent => {
                    self.chosen.pop();
                    self.toggle(&c.members, false);
                }
                other => {
                    verdict = other;
                    if other == Verdict::Timeout {
                        self.chosen.pop();
                        self.toggle(&c.members, false);
                    }
                    break;
                }
            }
        }
        self.candidates[lowest] = Some(candidates);
        verdict
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Solved,
    Timeout,
    BoundOnly,
}

/// Bounds, exact value and certificate for one poset.
#[derive(Clone, Debug, Serialize)]
pub struct SdepthReport {
    pub n: u32,
    pub d: Option<u32>,
    pub poset: String,
    pub lower: u32,
    pub upper: u32,
    pub exact: Option<u32>,
    /// `d + floor((n - d) / (d + 1))`, Veronese posets only.
    pub conjecture: Option<u32>,
    /// Whether `(n - d) / (d + 1)` is an integer.
    pub conjecture_integral: Option<bool>,
    pub agrees: Option<bool>,
    pub status: Status,
    pub nodes: u64,
    #[serde(skip)]
    pub certificate: Option<IntervalPartition>,
}

/// `d + floor((n - d) / (d + 1))`: each interval starting at a `d`-set with
/// top of size `s` holds `s - d` sets of size `d + 1`, and there are only
/// `C(n, d+1) = (n-d)/(d+1) · C(n, d)` of those to share.
pub fn counting_upper_bound(n: u32, d: u32) -> Result<u32> {
    if d == 0 || d > n {
        return Err(Error::InvalidInput(format!("bound needs 1 <= d <= n, got n={n}, d={d}")));
    }
    Ok(d + (n - d) / (d + 1))
}

/// The conjectured value, floored, and whether the unfloored value is integral.
pub fn conjecture_value(n: u32, d: u32) -> Result<(u32, bool)> {
    Ok((counting_upper_bound(n, d)?, (n - d).is_multiple_of(d + 1)))
}

// Every singleton partition works, so the smallest element is a lower bound.
fn trivial_bounds(poset: &SubsetPoset) -> (u32, u32) {
    let lower = poset.elements().first().map_or(0, |e| e.len());
    let top = poset.elements().last().map_or(0, |e| e.len());
    (lower, top.min(poset.n()))
}

fn bounds(poset: &SubsetPoset) -> Result<(u32, u32)> {
    let (lower, top) = trivial_bounds(poset);
    match poset.kind() {
        PosetKind::Veronese { d } => Ok((*d, counting_upper_bound(poset.n(), *d)?.min(top))),
        _ => Ok((lower, top)),
    }
}

fn base_report(poset: &SubsetPoset) -> Result<SdepthReport> {
    let (lower, upper) = bounds(poset)?;
    let (conjecture, conjecture_integral) = match poset.kind() {
        PosetKind::Veronese { d } => {
            let (v, integral) = conjecture_value(poset.n(), *d)?;
            (Some(v), Some(integral))
        }
        _ => (None, None),
    };
    Ok(SdepthReport {
        n: poset.n(),
        d: poset.d(),
        poset: poset_label(poset),
        lower,
        upper,
        exact: None,
        conjecture,
        conjecture_integral,
        agrees: None,
        status: Status::BoundOnly,
        nodes: 0,
        certificate: None,
    })
}

pub fn poset_label(poset: &SubsetPoset) -> String {
    match poset.kind() {
        PosetKind::Veronese { d } => format!("veronese:{}:{d}", poset.n()),
        PosetKind::Quotient { d } => format!("quotient:{}:{d}", poset.n()),
        PosetKind::Generated { .. } => format!("upset:{}", poset.n()),
    }
}

/// Bounds only, no search.
pub fn sdepth_bounds(poset: &SubsetPoset) -> Result<SdepthReport> {
    if poset.is_empty() {
        return Err(Error::EmptyPoset("nothing to partition".into()));
    }
    base_report(poset)
}

/// Largest `s` for which [`exists_partition`] succeeds.
pub fn sdepth_exact(poset: &SubsetPoset, config: &SolverConfig) -> Result<SdepthReport> {
    if poset.is_empty() {
        return Err(Error::EmptyPoset("nothing to partition".into()));
    }
    check_envelope(poset, config)?;
    let mut report = base_report(poset)?;
    let mut s = report.upper;
    loop {
        let result = exists_partition(poset, s, config)?;
        report.nodes += result.nodes;
        match result.outcome {
            SearchOutcome::Found(partition) => {
                report.exact = Some(s);
                report.lower = report.lower.max(s);
                report.upper = s;
                report.certificate = Some(partition);
                report.status = Status::Solved;
                break;
            }
            SearchOutcome::Absent if s > report.lower => s -= 1,
            SearchOutcome::Absent => {
                // singletons always reach the lower bound
                unreachable!("no partition at the trivial lower bound {s}");
            }
            SearchOutcome::Timeout => {
                report.upper = s;
                report.status = Status::Timeout;
                break;
            }
        }
    }
    if let (Some(exact), Some(conj)) = (report.exact, report.conjecture) {
        report.agrees = Some(exact == conj);
    }
    Ok(report)
}

/// Exact Stanley depth of `Δ(n, d)` compared with `d + floor((n-d)/(d+1))`.
pub fn conjecture_check(n: u32, d: u32, config: &SolverConfig) -> Result<SdepthReport> {
    if d == 0 || 2 * d > n {
        return Err(Error::Hypothesis { n, d, requirement: "1 <= d <= n/2" });
    }
    sdepth_exact(&veronese_poset(n, d)?, config)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StanleyCheck {
    pub n: u32,
    pub d: u32,
    pub sdepth_ideal: u32,
    pub sdepth_quotient: u32,
    /// Depth of the quotient ring, `d - 1`; that of the ideal is `d`.
    pub depth_quotient: u32,
    pub holds: bool,
}

/// Computes both Stanley depths and checks `sdepth(I) >= sdepth(S/I) + 1`
/// together with `sdepth(S/I) >= d - 1` and `sdepth(I) >= d`.
pub fn stanley_inequality_check(n: u32, d: u32, config: &SolverConfig) -> Result<StanleyCheck> {
    let solve = |poset: SubsetPoset| -> Result<u32> {
        let report = sdepth_exact(&poset, config)?;
        report.exact.ok_or_else(|| Error::InvalidInput(format!("{} timed out after {} nodes", report.poset, report.nodes)))
    };
    let sdepth_ideal = solve(veronese_poset(n, d)?)?;
    let sdepth_quotient = solve(quotient_poset(n, d)?)?;
    let depth_quotient = d - 1;
    let holds = sdepth_ideal > sdepth_quotient && sdepth_quotient >= depth_quotient && sdepth_ideal >= d;
    Ok(StanleyCheck { n, d, sdepth_ideal, sdepth_quotient, depth_quotient, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{quotient_partition, verify_partition};

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn counting_bound_examples() {
        assert_eq!(counting_upper_bound(5, 2).unwrap(), 3);
        assert_eq!(counting_upper_bound(9, 9).unwrap(), 9);
        assert_eq!(counting_upper_bound(7, 2).unwrap(), 3);
        assert!(counting_upper_bound(3, 4).is_err());
    }

    #[test]
    fn delta_3_1_at_two_and_three() {
        let poset = veronese_poset(3, 1).unwrap();
        let r = exists_partition(&poset, 2, &cfg()).unwrap();
        let SearchOutcome::Found(p) = r.outcome else { panic!("expected a partition") };
        let v = verify_partition(&poset, &p);
        assert!(v.is_valid());
        assert!(v.sdepth.unwrap() >= 2);
        assert_eq!(exists_partition(&poset, 3, &cfg()).unwrap().outcome, SearchOutcome::Absent);
    }

    #[test]
    fn quotient_4_2_at_one() {
        let poset = quotient_poset(4, 2).unwrap();
        let SearchOutcome::Found(p) = exists_partition(&poset, 1, &cfg()).unwrap().outcome else { panic!() };
        assert_eq!(verify_partition(&poset, &p).sdepth, Some(1));
        assert_eq!(verify_partition(&poset, &quotient_partition(4, 2).unwrap()).sdepth, Some(1));
    }

    #[test]
    fn exact_small_cases() {
        assert_eq!(sdepth_exact(&veronese_poset(3, 1).unwrap(), &cfg()).unwrap().exact, Some(2));
        assert_eq!(sdepth_exact(&veronese_poset(4, 2).unwrap(), &cfg()).unwrap().exact, Some(2));
        assert_eq!(sdepth_exact(&quotient_poset(4, 1).unwrap(), &cfg()).unwrap().exact, Some(0));
        for n in 1..=5 {
            for d in 1..=n {
                let r = sdepth_exact(&quotient_poset(n, d).unwrap(), &cfg()).unwrap();
                assert_eq!(r.exact, Some(d - 1), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn strategies_agree() {
        let variants = [
            SolverConfig::plain(),
            SolverConfig { level_pruning: true, ..SolverConfig::plain() },
            SolverConfig { level_pruning: false, ..cfg() },
            SolverConfig { branch_order: BranchOrder::SmallestFirst, ..cfg() },
            cfg(),
        ];
        for n in 1..=6 {
            for d in 1..=n {
                for poset in [veronese_poset(n, d).unwrap(), quotient_poset(n, d).unwrap()] {
                    let exact: Vec<_> = variants.iter().map(|c| sdepth_exact(&poset, c).unwrap().exact).collect();
                    assert!(exact.iter().all(|e| e.is_some() && *e == exact[0]), "{} {exact:?}", poset_label(&poset));
                }
            }
        }
    }

    #[test]
    fn pruning_only_removes_nodes() {
        let pruned = SolverConfig { level_pruning: true, ..SolverConfig::plain() };
        for n in 1..=6 {
            for d in 1..=n {
                let poset = veronese_poset(n, d).unwrap();
                let a = sdepth_exact(&poset, &SolverConfig::plain()).unwrap();
                let b = sdepth_exact(&poset, &pruned).unwrap();
                assert!(b.nodes <= a.nodes, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn exhausts_without_pruning_help() {
        // the plain search refutes s = 3 on Δ(3,1) by exhaustion
        let poset = veronese_poset(3, 1).unwrap();
        let r = exists_partition(&poset, 3, &SolverConfig::plain()).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Absent);
        assert!(r.nodes > 1);
    }

    #[test]
    fn timeout_is_not_absence() {
        let tiny = SolverConfig { node_budget: 3, ..cfg() };
        let r = sdepth_exact(&veronese_poset(6, 1).unwrap(), &tiny).unwrap();
        assert_eq!(r.status, Status::Timeout);
        assert_eq!(r.exact, None);
        assert_eq!(r.agrees, None);
    }

    #[test]
    fn envelope_guard() {
        let poset = veronese_poset(8, 4).unwrap();
        assert!(matches!(sdepth_exact(&poset, &cfg()), Err(Error::OutsideEnvelope { .. })));
        let large = SolverConfig { allow_large: true, ..cfg() };
        assert_eq!(sdepth_exact(&poset, &large).unwrap().exact, Some(4));
    }

    #[test]
    fn conjecture_and_stanley_examples() {
        let r = conjecture_check(5, 2, &cfg()).unwrap();
        assert_eq!((r.exact, r.conjecture, r.agrees), (Some(3), Some(3), Some(true)));
        let r = conjecture_check(4, 1, &cfg()).unwrap();
        assert_eq!((r.exact, r.conjecture, r.conjecture_integral), (Some(2), Some(2), Some(false)));
        let r = conjecture_check(6, 3, &cfg()).unwrap();
        assert_eq!((r.exact, r.agrees), (Some(3), Some(true)));
        assert!(conjecture_check(5, 3, &cfg()).is_err());

        let c = stanley_inequality_check(3, 1, &cfg()).unwrap();
        assert_eq!((c.sdepth_ideal, c.sdepth_quotient, c.holds), (2, 0, true));
        let c = stanley_inequality_check(4, 2, &cfg()).unwrap();
        assert_eq!((c.sdepth_ideal, c.sdepth_quotient, c.holds), (2, 1, true));
        let c = stanley_inequality_check(5, 2, &cfg()).unwrap();
        assert_eq!((c.sdepth_ideal, c.sdepth_quotient, c.holds), (3, 1, true));
    }

    #[test]
    fn deterministic_certificates() {
        let poset = veronese_poset(6, 2).unwrap();
        let a = sdepth_exact(&poset, &cfg()).unwrap();
        let b = sdepth_exact(&poset, &cfg()).unwrap();
        assert_eq!(a.certificate, b.certificate);
        assert_eq!(a.nodes, b.nodes);
    }
}
