//! JSON forms of maps, partition certificates, generator lists and reports.
//!
//! Sets are written as strictly ascending arrays of 1-based elements.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matchings::{Construction, MapKind, SetMap};
use crate::partitions::{Interval, IntervalPartition, PosetKind};
use crate::solver::SdepthReport;
use crate::subsets::SubsetMask;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    n: u32,
    d: u32,
    kind: String,
    method: String,
    pairs: Vec<PairRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairRepr {
    from: Vec<u32>,
    to: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetRepr {
    kind: String,
    n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<Vec<u32>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionFile {
    poset: PosetRepr,
    intervals: Vec<IntervalRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalRepr {
    lower: Vec<u32>,
    upper: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    n: u32,
    generators: Vec<Vec<u32>>,
}

fn parse_set(n: u32, elements: &[u32]) -> Result<SubsetMask> {
    if elements.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!("set {elements:?} is not strictly ascending")));
    }
    SubsetMask::from_elements(n, elements)
}

fn json_err(e: serde_json::Error) -> Error {
    Error::InvalidInput(format!("malformed JSON: {e}"))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn map_to_json(map: &SetMap) -> String {
    let file = MapFile {
        n: map.n,
        d: map.d,
        kind: map.kind.to_string(),
        method: map.construction.as_str().to_string(),
        pairs: map.pairs().iter().map(|(f, g)| PairRepr { from: f.elements(), to: g.elements() }).collect(),
    };
    pretty(&file)
}

pub fn map_from_json(text: &str) -> Result<SetMap> {
    let file: MapFile = serde_json::from_str(text).map_err(json_err)?;
    let kind = match file.kind.as_str() {
        "phi" => MapKind::Phi,
        "psi" => MapKind::Psi,
        other => return Err(Error::InvalidInput(format!("unknown map kind {other:?}"))),
    };
    let pairs = file
        .pairs
        .iter()
        .map(|p| Ok((parse_set(file.n, &p.from)?, parse_set(file.n, &p.to)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut map = SetMap::from_pairs(kind, file.n, file.d, pairs);
    map.construction = construction_from_str(&file.method);
    Ok(map)
}

fn construction_from_str(s: &str) -> Construction {
    [
        Construction::Complement,
        Construction::SingletonGreedy,
        Construction::Greedy,
        Construction::GreedyFallbackMatching,
        Construction::Matching,
        Construction::Cyclic,
        Construction::ComplementOfPhi,
        Construction::Recursive,
    ]
    .into_iter()
    .find(|c| c.as_str() == s)
    .unwrap_or(Construction::External)
}

fn poset_repr(n: u32, kind: &PosetKind) -> PosetRepr {
    match kind {
        PosetKind::Veronese { d } => PosetRepr { kind: "veronese".into(), n, d: Some(*d), generators: None },
        PosetKind::Quotient { d } => PosetRepr { kind: "quotient".into(), n, d: Some(*d), generators: None },
        PosetKind::Generated { generators } => PosetRepr {
            kind: "upset".into(),
            n,
            d: None,
            generators: Some(generators.iter().map(|g| g.elements()).collect()),
        },
    }
}

fn poset_kind(repr: &PosetRepr) -> Result<PosetKind> {
    let need_d = || repr.d.ok_or_else(|| Error::InvalidInput(format!("poset kind {:?} needs \"d\"", repr.kind)));
    match repr.kind.as_str() {
        "veronese" => Ok(PosetKind::Veronese { d: need_d()? }),
        "quotient" => Ok(PosetKind::Quotient { d: need_d()? }),
        "upset" => {
            let gens = repr
                .generators
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("upset poset needs \"generators\"".into()))?;
            let generators = gens.iter().map(|g| parse_set(repr.n, g)).collect::<Result<_>>()?;
            Ok(PosetKind::Generated { generators })
        }
        other => Err(Error::InvalidInput(format!("unknown poset kind {other:?}"))),
    }
}

fn partition_file(partition: &IntervalPartition) -> PartitionFile {
    let mut partition = partition.clone();
    partition.canonicalize();
    PartitionFile {
        poset: poset_repr(partition.n, &partition.kind),
        intervals: partition
            .intervals
            .iter()
            .map(|i| IntervalRepr { lower: i.lower.elements(), upper: i.upper.elements() })
            .collect(),
    }
}

/// Canonical certificate: intervals sorted by (|lower|, colex of lower).
pub fn partition_to_json(partition: &IntervalPartition) -> String {
    pretty(&partition_file(partition))
}

/// Reads a certificate. Intervals are kept as given (even malformed ones, so
/// the verifier can report them) apart from canonical reordering.
pub fn partition_from_json(text: &str) -> Result<IntervalPartition> {
    let file: PartitionFile = serde_json::from_str(text).map_err(json_err)?;
    let n = file.poset.n;
    crate::subsets::check_ground(n)?;
    let kind = poset_kind(&file.poset)?;
    let intervals = file
        .intervals
        .iter()
        .map(|i| Ok(Interval { lower: parse_set(n, &i.lower)?, upper: parse_set(n, &i.upper)? }))
        .collect::<Result<Vec<_>>>()?;
    let mut p = IntervalPartition { n, kind, intervals };
    p.canonicalize();
    Ok(p)
}

/// `{"n": N, "generators": [[...], ...]}`.
pub fn generators_from_json(text: &str) -> Result<(u32, Vec<SubsetMask>)> {
    let file: GeneratorFile = serde_json::from_str(text).map_err(json_err)?;
    crate::subsets::check_ground(file.n)?;
    let gens = file.generators.iter().map(|g| parse_set(file.n, g)).collect::<Result<_>>()?;
    Ok((file.n, gens))
}

pub fn generators_to_json(n: u32, generators: &[SubsetMask]) -> String {
    pretty(&GeneratorFile { n, generators: generators.iter().map(|g| g.elements()).collect() })
}

pub fn report_to_value(report: &SdepthReport) -> Value {
    json!({
        "n": report.n,
        "d": report.d,
        "poset": report.poset,
        "lower": report.lower,
        "upper": report.upper,
        "exact": report.exact,
        "conjecture": report.conjecture,
        "conjecture_integral": report.conjecture_integral,
        "agrees": report.agrees,
        "status": report.status,
        "nodes": report.nodes,
        "certificate": report.certificate.as_ref().map(|c| serde_json::to_value(partition_file(c)).expect("serializable")),
    })
}

pub fn report_to_json(report: &SdepthReport) -> String {
    pretty(&report_to_value(report))
}

/// Pulls the embedded certificate back out of a report.
pub fn partition_from_report(text: &str) -> Result<Option<IntervalPartition>> {
    let value: Value = serde_json::from_str(text).map_err(json_err)?;
    match value.get("certificate") {
        None | Some(Value::Null) => Ok(None),
        Some(c) => partition_from_json(&c.to_string()).map(Some),
    }
}
