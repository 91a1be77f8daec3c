//! The disjoint bijection `Φ(n, d)` on `d`-sets and the superset injection
//! `Ψ(n, d)` from `d`-sets into `(d+1)`-sets, with verifiers and
//! matching-based constructions that serve as independent oracles.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::bipartite;
use crate::error::{Error, Result};
use crate::subsets::{check_ground, enumerate_level, graded_colex, rank_colex, SubsetMask};

// Tables are materialized; keep a level below a few million sets.
const MAX_LEVEL_SIZE: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Phi,
    Psi,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::Phi => "phi",
            MapKind::Psi => "psi",
        })
    }
}

/// How `build_phi` should construct the map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PhiMethod {
    Greedy,
    Matching,
    #[default]
    Auto,
}

/// Which construction actually produced a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// `F ↦ [n] \ F`, the `n = 2d` case of Φ.
    Complement,
    /// Greedy over single elements with the image pool excluding `F`.
    SingletonGreedy,
    /// Colex-maximum available disjoint set, scanning `F` in colex order.
    Greedy,
    /// Greedy dead-ended; the table came from the matching construction.
    GreedyFallbackMatching,
    Matching,
    /// `{i} ↦ {i, i+1}`, `{n} ↦ {1, n}`.
    Cyclic,
    /// `F ↦ [n] \ Φ(F)`, the `n = 2d+1` case of Ψ.
    ComplementOfPhi,
    /// Split on whether `n ∈ F`, recursing into `Ψ(n-1, d)` and `Ψ(n-1, d-1)`.
    Recursive,
    /// Read from a file or assembled by hand.
    External,
}

impl Construction {
    pub fn as_str(self) -> &'static str {
        match self {
            Construction::Complement => "complement",
            Construction::SingletonGreedy => "singleton-greedy",
            Construction::Greedy => "greedy",
            Construction::GreedyFallbackMatching => "greedy-fallback-matching",
            Construction::Matching => "matching",
            Construction::Cyclic => "cyclic",
            Construction::ComplementOfPhi => "complement-of-phi",
            Construction::Recursive => "recursive",
            Construction::External => "external",
        }
    }
}

/// A tabulated map between families of subsets of `[n]`. Holds either a Φ or
/// a Ψ; `kind` says which invariants apply. Pairs are kept sorted by source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetMap {
    pub kind: MapKind,
    pub n: u32,
    pub d: u32,
    pub construction: Construction,
    pairs: Vec<(SubsetMask, SubsetMask)>,
}

pub type PhiMap = SetMap;
pub type PsiMap = SetMap;

impl SetMap {
    /// Wraps arbitrary pairs without checking them; use the verifiers.
    pub fn from_pairs(kind: MapKind, n: u32, d: u32, mut pairs: Vec<(SubsetMask, SubsetMask)>) -> Self {
        pairs.sort_by(|a, b| graded_colex(a.0, b.0).then(graded_colex(a.1, b.1)));
        Self { kind, n, d, construction: Construction::External, pairs }
    }

    fn from_table(kind: MapKind, n: u32, d: u32, construction: Construction, sources: Vec<SubsetMask>, table: Vec<SubsetMask>) -> Self {
        let pairs = sources.into_iter().zip(table).collect();
        Self { kind, n, d, construction, pairs }
    }

    pub fn pairs(&self) -> &[(SubsetMask, SubsetMask)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn image(&self, from: SubsetMask) -> Option<SubsetMask> {
        self.pairs
            .binary_search_by(|(f, _)| graded_colex(*f, from))
            .ok()
            .map(|i| self.pairs[i].1)
    }

    pub fn images(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.pairs.iter().map(|p| p.1)
    }
}

/// One defect found by [`verify_phi`] or [`verify_psi`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum MapViolation {
    /// A `d`-set with no image.
    Missing { from: SubsetMask },
    /// A source listed more than once.
    DuplicateSource { from: SubsetMask },
    /// A source that is not a `d`-subset of `[n]`.
    BadSource { from: SubsetMask },
    /// Image has the wrong cardinality or lies outside `[n]`.
    BadImage { from: SubsetMask, to: SubsetMask },
    /// Several sources share one image.
    Injectivity { to: SubsetMask, from: Vec<SubsetMask> },
    /// Φ only: `Φ(F) ∩ F ≠ ∅`.
    Disjointness { from: SubsetMask, to: SubsetMask },
    /// Ψ only: `F ⊄ Ψ(F)`.
    Containment { from: SubsetMask, to: SubsetMask },
    /// The map is declared as the other kind.
    WrongKind { expected: MapKind, found: MapKind },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MapReport {
    pub violations: Vec<MapViolation>,
}

impl MapReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_phi(map: &SetMap) -> MapReport {
    verify(map, MapKind::Phi)
}

pub fn verify_psi(map: &SetMap) -> MapReport {
    verify(map, MapKind::Psi)
}

fn verify(map: &SetMap, expected: MapKind) -> MapReport {
    let mut violations = Vec::new();
    if map.kind != expected {
        violations.push(MapViolation::WrongKind { expected, found: map.kind });
    }
    let (n, d) = (map.n, map.d);
    let image_len = match expected {
        MapKind::Phi => d,
        MapKind::Psi => d + 1,
    };
    let Ok(level) = enumerate_level(n, d) else {
        // No well-formed source family; every pair is malformed.
        violations.extend(map.pairs.iter().map(|&(from, _)| MapViolation::BadSource { from }));
        return MapReport { violations };
    };

    let mut seen: HashMap<SubsetMask, usize> = HashMap::new();
    let mut preimages: HashMap<SubsetMask, Vec<SubsetMask>> = HashMap::new();
    for &(from, to) in &map.pairs {
        if from.n() != n || from.len() != d {
            violations.push(MapViolation::BadSource { from });
            continue;
        }
        let count = seen.entry(from).or_default();
        *count += 1;
        if *count == 2 {
            violations.push(MapViolation::DuplicateSource { from });
        }
        if to.n() != n || to.len() != image_len {
            violations.push(MapViolation::BadImage { from, to });
        }
        match expected {
            MapKind::Phi if !from.is_disjoint(to) => violations.push(MapViolation::Disjointness { from, to }),
            MapKind::Psi if !(from.is_subset(to) && from != to) => {
                violations.push(MapViolation::Containment { from, to })
            }
            _ => {}
        }
        preimages.entry(to).or_default().push(from);
    }
    for &from in &level.members {
        if !seen.contains_key(&from) {
            violations.push(MapViolation::Missing { from });
        }
    }
    let mut clashes: Vec<_> = preimages.into_iter().filter(|(_, v)| v.len() > 1).collect();
    clashes.sort_by(|a, b| graded_colex(a.0, b.0));
    for (to, from) in clashes {
        violations.push(MapViolation::Injectivity { to, from });
    }
    MapReport { violations }
}

fn check_level_size(n: u32, d: u32) -> Result<()> {
    if crate::subsets::binomial(n as u64, d as u64)? > MAX_LEVEL_SIZE {
        return Err(Error::TooLarge { what: "level family", n });
    }
    Ok(())
}

/// Builds `Φ(n, d)`: a bijection on the `d`-subsets of `[n]` with
/// `Φ(F) ∩ F = ∅`. Requires `1 <= d <= n/2`.
///
/// Greedy and auto dispatch `n = 2d` to the complement map, then `d = 1` to
/// the singleton greedy, then the general colex greedy. Auto falls back to the
/// matching construction if the greedy ever runs out of candidates.
pub fn build_phi(n: u32, d: u32, method: PhiMethod) -> Result<PhiMap> {
    check_ground(n)?;
    if d == 0 || 2 * d > n {
        return Err(Error::Hypothesis { n, d, requirement: "1 <= d <= n/2" });
    }
    check_level_size(n, d)?;
    let sources = enumerate_level(n, d)?.members;

    if method == PhiMethod::Matching {
        let table = phi_by_matching(n, d, &sources)?;
        return Ok(SetMap::from_table(MapKind::Phi, n, d, Construction::Matching, sources, table));
    }

    let greedy = if 2 * d == n {
        let table = sources.iter().map(|f| f.complement()).collect();
        Ok((Construction::Complement, table))
    } else if d == 1 {
        singleton_greedy(n, &sources).map(|t| (Construction::SingletonGreedy, t))
    } else {
        colex_greedy(&sources).map(|t| (Construction::Greedy, t))
    };

    let (construction, table) = match (greedy, method) {
        (Ok(found), _) => found,
        (Err(err), PhiMethod::Greedy) => return Err(err),
        (Err(_), _) => (Construction::GreedyFallbackMatching, phi_by_matching(n, d, &sources)?),
    };
    Ok(SetMap::from_table(MapKind::Phi, n, d, construction, sources, table))
}

// {i} gets the largest element not yet used as an image and not equal to i.
fn singleton_greedy(n: u32, sources: &[SubsetMask]) -> Result<Vec<SubsetMask>> {
    let mut used = 0u32;
    let mut table = Vec::with_capacity(sources.len());
    for &f in sources {
        let pool = crate::subsets::full_bits(n) & !used & !f.bits();
        if pool == 0 {
            return Err(Error::GreedyDeadEnd { set: f });
        }
        let j = 31 - pool.leading_zeros();
        used |= 1 << j;
        table.push(SubsetMask::raw(n, 1 << j));
    }
    Ok(table)
}

// Scans sources in colex order; each takes the colex-maximum member of its
// availability pool {G : |G| = d, G ∩ F = ∅, G not yet taken}.
fn colex_greedy(sources: &[SubsetMask]) -> Result<Vec<SubsetMask>> {
    let mut available = vec![true; sources.len()];
    let mut table = Vec::with_capacity(sources.len());
    for &f in sources {
        let pick = (0..sources.len())
            .rev()
            .find(|&g| available[g] && sources[g].is_disjoint(f))
            .ok_or(Error::GreedyDeadEnd { set: f })?;
        available[pick] = false;
        table.push(sources[pick]);
    }
    Ok(table)
}

/// Size of each availability pool along the greedy scan, or the set at which
/// the scan dead-ends. Exposed for measuring where the greedy succeeds.
pub fn greedy_pool_sizes(n: u32, d: u32) -> Result<Vec<usize>> {
    check_ground(n)?;
    if d == 0 || 2 * d > n {
        return Err(Error::Hypothesis { n, d, requirement: "1 <= d <= n/2" });
    }
    check_level_size(n, d)?;
    let sources = enumerate_level(n, d)?.members;
    let mut available = vec![true; sources.len()];
    let mut sizes = Vec::with_capacity(sources.len());
    for &f in &sources {
        let pool: Vec<usize> = (0..sources.len()).filter(|&g| available[g] && sources[g].is_disjoint(f)).collect();
        let Some(&pick) = pool.last() else {
            return Err(Error::GreedyDeadEnd { set: f });
        };
        sizes.push(pool.len());
        available[pick] = false;
    }
    Ok(sizes)
}

// Perfect matching in the Kneser-type disjointness graph on A(n, d).
fn phi_by_matching(n: u32, d: u32, sources: &[SubsetMask]) -> Result<Vec<SubsetMask>> {
    let adj: Vec<Vec<usize>> = sources
        .iter()
        .map(|f| (0..sources.len()).rev().filter(|&g| sources[g].is_disjoint(*f)).collect())
        .collect();
    bipartite::max_matching(sources.len(), &adj)
        .into_iter()
        .map(|m| m.map(|g| sources[g]).ok_or(Error::MatchingFailed { n, d }))
        .collect()
}

/// Builds `Ψ(n, d)`: an injection from `d`-sets into `(d+1)`-sets with
/// `F ⊂ Ψ(F)`. Requires `1 <= d < n/2`.
///
/// `d = 1` uses the cyclic rule, `n = 2d+1` complements Φ, and larger `n`
/// recurses: sets inside `[n-1]` go through `Ψ(n-1, d)`, sets containing `n`
/// through `Ψ(n-1, d-1)` with `n` added back.
pub fn build_psi(n: u32, d: u32) -> Result<PsiMap> {
    check_psi_args(n, d)?;
    check_level_size(n, d)?;
    let mut memo = HashMap::new();
    let table = psi_table(n, d, &mut memo)?;
    let construction = if d == 1 {
        Construction::Cyclic
    } else if n == 2 * d + 1 {
        Construction::ComplementOfPhi
    } else {
        Construction::Recursive
    };
    let sources = enumerate_level(n, d)?.members;
    Ok(SetMap::from_table(MapKind::Psi, n, d, construction, sources, table))
}

fn check_psi_args(n: u32, d: u32) -> Result<()> {
    check_ground(n)?;
    if d == 0 || 2 * d >= n {
        return Err(Error::Hypothesis { n, d, requirement: "1 <= d < n/2" });
    }
    Ok(())
}

// Image table indexed by colex rank. Colex ranks do not depend on n, and the
// d-sets inside [n-1] are exactly the first C(n-1, d) of A(n, d); the rest are
// A(n-1, d-1) in colex order with n appended.
fn psi_table(n: u32, d: u32, memo: &mut HashMap<(u32, u32), Vec<SubsetMask>>) -> Result<Vec<SubsetMask>> {
    if let Some(t) = memo.get(&(n, d)) {
        return Ok(t.clone());
    }
    let table = if d == 1 {
        (1..=n)
            .map(|i| {
                let partner = if i == n { 1 } else { i + 1 };
                SubsetMask::from_elements(n, &[i, partner])
            })
            .collect::<Result<Vec<_>>>()?
    } else if n == 2 * d + 1 {
        let phi = build_phi(n, d, PhiMethod::Auto)?;
        phi.images().map(|g| g.complement()).collect()
    } else {
        let mut table: Vec<SubsetMask> = psi_table(n - 1, d, memo)?
            .into_iter()
            .map(|g| g.with_ground(n))
            .collect::<Result<_>>()?;
        for g in psi_table(n - 1, d - 1, memo)? {
            table.push(g.with_ground(n)?.with(n)?);
        }
        table
    };
    memo.insert((n, d), table.clone());
    Ok(table)
}

/// Ψ found as a left-saturating matching of the containment graph between
/// adjacent levels. Independent of [`build_psi`]; used to cross-check it.
pub fn psi_matching_oracle(n: u32, d: u32) -> Result<PsiMap> {
    check_psi_args(n, d)?;
    check_level_size(n, d + 1)?;
    let sources = enumerate_level(n, d)?.members;
    let targets = enumerate_level(n, d + 1)?.members;
    let adj: Vec<Vec<usize>> = sources
        .iter()
        .map(|f| {
            let free = f.complement();
            free.iter()
                .map(|x| rank_colex(f.with(x).expect("x in [n]")) as usize)
                .collect()
        })
        .collect();
    let table = bipartite::max_matching(targets.len(), &adj)
        .into_iter()
        .map(|m| m.map(|g| targets[g]).ok_or(Error::MatchingFailed { n, d }))
        .collect::<Result<Vec<_>>>()?;
    Ok(SetMap::from_table(MapKind::Psi, n, d, Construction::Matching, sources, table))
}
