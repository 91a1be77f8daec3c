//! The `sdepth` command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 verification failure, 3 timeout.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::certificate::{
    generators_from_json, map_to_json, partition_from_json, partition_from_report, partition_to_json, report_to_json,
};
use crate::error::Error;
use crate::matchings::{build_phi, build_psi, psi_matching_oracle, verify_phi, verify_psi, MapReport, PhiMethod, SetMap};
use crate::partitions::{
    generated_upset, psi_partition, quotient_partition, quotient_poset, verify_partition, veronese_poset,
    PartitionReport, SubsetPoset,
};
use crate::solver::{
    conjecture_check, sdepth_exact, BranchOrder, ElementChoice, SolverConfig, DEFAULT_NODE_BUDGET, ENVELOPE_N,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_VERIFY: u8 = 2;
pub const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(name = "sdepth", version, about = "Interval partitions and Stanley depth of squarefree Veronese ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the disjoint bijection on d-subsets of [n].
    Phi {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value_t = PhiMethodArg::Auto)]
        method: PhiMethodArg,
        #[command(flatten)]
        output: Output,
    },
    /// Build the superset injection from d-sets into (d+1)-sets.
    Psi {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value_t = PsiMethodArg::Construction)]
        method: PsiMethodArg,
        #[command(flatten)]
        output: Output,
    },
    /// Build an explicit interval partition certificate.
    Partition {
        #[arg(value_enum)]
        kind: PartitionKind,
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        output: Output,
    },
    /// Check a partition certificate.
    Verify {
        /// Poset to check against (veronese:N:D, quotient:N:D, upset-of:FILE);
        /// defaults to the poset named in the certificate.
        #[arg(long)]
        poset: Option<String>,
        /// Certificate file, or an sdepth report with an embedded certificate.
        certificate: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compute the exact Stanley depth of a poset.
    Sdepth {
        /// veronese:N:D, quotient:N:D or upset-of:FILE
        spec: String,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate exact values against the conjectured formula.
    Sweep {
        #[arg(long)]
        n_max: u32,
        /// Restrict d to an inclusive range LO:HI.
        #[arg(long)]
        d: Option<String>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; rows come out in the same order regardless.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Fill the wall_ms column (makes the output run-dependent).
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Args)]
struct Params {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: u32,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a JSON summary instead of the human-readable line.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    #[arg(long, default_value_t = 600)]
    timeout_sec: u64,
    /// Lift the n <= 7 solver envelope.
    #[arg(long)]
    allow_large: bool,
    /// Branch on the lowest uncovered element instead of the most constrained one.
    #[arg(long)]
    lowest_first: bool,
    /// Try the smallest admissible intervals first.
    #[arg(long)]
    smallest_first: bool,
    /// Disable level-counting pruning.
    #[arg(long)]
    no_level_pruning: bool,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            node_budget: self.node_budget,
            time_limit: Some(Duration::from_secs(self.timeout_sec)),
            element_choice: if self.lowest_first { ElementChoice::Lowest } else { ElementChoice::FewestFits },
            branch_order: if self.smallest_first { BranchOrder::SmallestFirst } else { BranchOrder::LargestFirst },
            level_pruning: !self.no_level_pruning,
            allow_large: self.allow_large,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PhiMethodArg {
    Greedy,
    Matching,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum PsiMethodArg {
    Construction,
    Matching,
}

#[derive(Clone, Copy, ValueEnum)]
enum PartitionKind {
    Veronese,
    Quotient,
}

/// A failed command: exit code plus message for stderr.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(EXIT_INVALID, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INVALID, msg.into())
}

/// Runs the CLI with explicit arguments (the first is the program name).
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Phi { params, method, output } => cmd_phi(&params, method, &output),
        Command::Psi { params, method, output } => cmd_psi(&params, method, &output),
        Command::Partition { kind, params, output } => cmd_partition(kind, &params, &output),
        Command::Verify { poset, certificate, json } => cmd_verify(poset.as_deref(), &certificate, json),
        Command::Sdepth { spec, solver, out } => cmd_sdepth(&spec, &solver, out.as_deref()),
        Command::Sweep { n_max, d, solver, out, jobs, timing } => {
            cmd_sweep(n_max, d.as_deref(), &solver, out.as_deref(), jobs, timing)
        }
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| invalid(format!("cannot write to stdout: {e}"))),
    }
}

/// Where an artifact that failed verification is parked.
pub fn rejected_path(out: Option<&Path>, fallback: &str) -> PathBuf {
    match out {
        Some(p) => {
            let mut s = p.as_os_str().to_owned();
            s.push(".rejected");
            PathBuf::from(s)
        }
        None => PathBuf::from(format!("{fallback}.rejected")),
    }
}

// Writes a verified artifact, or parks a rejected one and fails with exit 2.
fn emit_checked(out: Option<&Path>, fallback: &str, text: &str, problems: Option<String>) -> Result<(), Failure> {
    match problems {
        None => write_output(out, text),
        Some(problems) => {
            let parked = rejected_path(out, fallback);
            fs::write(&parked, text).map_err(|e| invalid(format!("cannot write {}: {e}", parked.display())))?;
            Err(Failure(EXIT_VERIFY, format!("verification failed ({problems}); wrote {}", parked.display())))
        }
    }
}

fn summarize(output: &Output, human: String, summary: serde_json::Value) {
    // keep stdout clean when it carries the artifact
    if output.json {
        if output.out.is_some() {
            println!("{summary}");
        } else {
            eprintln!("{summary}");
        }
    } else if output.out.is_some() {
        println!("{human}");
    } else {
        eprintln!("{human}");
    }
}

fn map_problems(report: &MapReport) -> Option<String> {
    (!report.passed()).then(|| format!("{} violations, first: {:?}", report.violations.len(), report.violations[0]))
}

fn emit_map(map: &SetMap, report: &MapReport, output: &Output) -> Result<u8, Failure> {
    let fallback = format!("{}-n{}-d{}.json", map.kind, map.n, map.d);
    emit_checked(output.out.as_deref(), &fallback, &map_to_json(map), map_problems(report))?;
    summarize(
        output,
        format!("{} n={} d={} method={}: {} pairs verified", map.kind, map.n, map.d, map.construction.as_str(), map.len()),
        json!({"kind": map.kind, "n": map.n, "d": map.d, "method": map.construction, "pairs": map.len(), "verified": true}),
    );
    Ok(EXIT_OK)
}

fn cmd_phi(params: &Params, method: PhiMethodArg, output: &Output) -> Result<u8, Failure> {
    let method = match method {
        PhiMethodArg::Greedy => PhiMethod::Greedy,
        PhiMethodArg::Matching => PhiMethod::Matching,
        PhiMethodArg::Auto => PhiMethod::Auto,
    };
    let map = build_phi(params.n, params.d, method)?;
    emit_map(&map, &verify_phi(&map), output)
}

fn cmd_psi(params: &Params, method: PsiMethodArg, output: &Output) -> Result<u8, Failure> {
    let map = match method {
        PsiMethodArg::Construction => build_psi(params.n, params.d)?,
        PsiMethodArg::Matching => psi_matching_oracle(params.n, params.d)?,
    };
    emit_map(&map, &verify_psi(&map), output)
}

fn partition_problems(report: &PartitionReport) -> Option<String> {
    (!report.is_valid()).then(|| {
        format!(
            "{} containment, {} overlaps, {} uncovered",
            report.containment.len(),
            report.overlaps.len(),
            report.uncovered.len()
        )
    })
}

fn cmd_partition(kind: PartitionKind, params: &Params, output: &Output) -> Result<u8, Failure> {
    let (n, d) = (params.n, params.d);
    let (poset, partition, label) = match kind {
        PartitionKind::Veronese => {
            if d == 0 || n < 2 * d + 1 {
                return Err(invalid(format!("veronese partition needs n >= 2d + 1, got n={n}, d={d}")));
            }
            let psi = build_psi(n, d)?;
            (veronese_poset(n, d)?, psi_partition(n, d, &psi)?, "veronese")
        }
        PartitionKind::Quotient => (quotient_poset(n, d)?, quotient_partition(n, d)?, "quotient"),
    };
    let report = verify_partition(&poset, &partition);
    let fallback = format!("partition-{label}-n{n}-d{d}.json");
    emit_checked(output.out.as_deref(), &fallback, &partition_to_json(&partition), partition_problems(&report))?;
    let sdepth = report.sdepth.expect("valid partition has an sdepth");
    summarize(
        output,
        format!("sdepth={sdepth}"),
        json!({"poset": format!("{label}:{n}:{d}"), "intervals": partition.intervals.len(), "sdepth": sdepth}),
    );
    Ok(EXIT_OK)
}

/// Parses `veronese:N:D`, `quotient:N:D` or `upset-of:FILE`.
pub fn parse_poset_spec(spec: &str) -> Result<SubsetPoset, Error> {
    let bad = || Error::InvalidInput(format!("bad poset spec {spec:?}; expected veronese:N:D, quotient:N:D or upset-of:FILE"));
    if let Some(path) = spec.strip_prefix("upset-of:") {
        let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
        let (n, gens) = generators_from_json(&text)?;
        return generated_upset(n, &gens);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let [kind, n, d] = parts.as_slice() else { return Err(bad()) };
    let n: u32 = n.parse().map_err(|_| bad())?;
    let d: u32 = d.parse().map_err(|_| bad())?;
    match *kind {
        "veronese" => veronese_poset(n, d),
        "quotient" => quotient_poset(n, d),
        _ => Err(bad()),
    }
}

fn cmd_verify(poset_spec: Option<&str>, path: &Path, json_out: bool) -> Result<u8, Failure> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let partition = match partition_from_json(&text) {
        Ok(p) => p,
        // sdepth reports carry their certificate inside
        Err(first) => match partition_from_report(&text) {
            Ok(Some(p)) => p,
            _ => return Err(first.into()),
        },
    };
    let poset = match poset_spec {
        Some(spec) => parse_poset_spec(spec)?,
        None => partition.poset()?,
    };
    let report = verify_partition(&poset, &partition);
    if json_out {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    }
    if report.is_valid() {
        if !json_out {
            match report.sdepth {
                Some(s) => println!("sdepth={s}"),
                None => println!("valid (empty poset)"),
            }
        }
        return Ok(EXIT_OK);
    }
    if !json_out {
        for i in &report.containment {
            println!("containment: {i} is malformed or leaves the poset");
        }
        for o in &report.overlaps {
            let by: Vec<String> = o.intervals.iter().map(|i| i.to_string()).collect();
            println!("overlap: {} covered by {}", o.element, by.join(" and "));
        }
        for u in &report.uncovered {
            println!("uncovered: {u}");
        }
    }
    Err(Failure(EXIT_VERIFY, partition_problems(&report).unwrap_or_default()))
}

fn cmd_sdepth(spec: &str, solver: &SolverArgs, out: Option<&Path>) -> Result<u8, Failure> {
    let poset = parse_poset_spec(spec)?;
    let report = sdepth_exact(&poset, &solver.config())?;
    write_output(out, &report_to_json(&report))?;
    match report.exact {
        Some(s) => {
            eprintln!("{}: sdepth={s} (bounds {}..={}, {} nodes)", report.poset, report.lower, report.upper, report.nodes);
            Ok(EXIT_OK)
        }
        None => Err(Failure(
            EXIT_TIMEOUT,
            format!("{}: timed out after {} nodes; sdepth in {}..={}", report.poset, report.nodes, report.lower, report.upper),
        )),
    }
}

fn parse_range(text: &str) -> Result<(u32, u32), Failure> {
    let bad = || invalid(format!("bad range {text:?}; expected LO:HI"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: u32 = lo.parse().map_err(|_| bad())?;
    let hi: u32 = hi.parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// One line of the sweep table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub n: u32,
    pub d: u32,
    pub lower: u32,
    pub upper: u32,
    pub exact: Option<u32>,
    pub conjecture: u32,
    pub agrees: Option<bool>,
    pub wall_ms: Option<u128>,
    pub nodes: u64,
}

/// Grid of `(n, d)` with `1 <= d <= n/2`, `n <= n_max`, `d` inside `range`.
pub fn sweep_cells(n_max: u32, range: Option<(u32, u32)>) -> Vec<(u32, u32)> {
    let (lo, hi) = range.unwrap_or((1, u32::MAX));
    (1..=n_max)
        .flat_map(|n| (1..=n / 2).map(move |d| (n, d)))
        .filter(|&(_, d)| lo <= d && d <= hi)
        .collect()
}

pub fn sweep_rows(cells: &[(u32, u32)], config: &SolverConfig, jobs: usize, timing: bool) -> Result<Vec<SweepRow>, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start workers: {e}")))?;
    pool.install(|| {
        cells
            .par_iter()
            .map(|&(n, d)| {
                let started = Instant::now();
                let r = conjecture_check(n, d, config)?;
                Ok(SweepRow {
                    n,
                    d,
                    lower: r.lower,
                    upper: r.upper,
                    exact: r.exact,
                    conjecture: r.conjecture.expect("veronese report has a conjecture value"),
                    agrees: r.agrees,
                    wall_ms: timing.then(|| started.elapsed().as_millis()),
                    nodes: r.nodes,
                })
            })
            .collect()
    })
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "d", "lower", "upper", "exact", "conjecture", "agrees", "wall_ms", "nodes"])
        .expect("in-memory write");
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.d.to_string(),
            r.lower.to_string(),
            r.upper.to_string(),
            opt(r.exact.map(|v| v.to_string())),
            r.conjecture.to_string(),
            opt(r.agrees.map(|v| v.to_string())),
            opt(r.wall_ms.map(|v| v.to_string())),
            r.nodes.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii csv")
}

fn cmd_sweep(
    n_max: u32,
    d_range: Option<&str>,
    solver: &SolverArgs,
    out: Option<&Path>,
    jobs: usize,
    timing: bool,
) -> Result<u8, Failure> {
    if n_max > ENVELOPE_N && !solver.allow_large {
        return Err(Error::OutsideEnvelope { n: n_max, max: ENVELOPE_N }.into());
    }
    let range = d_range.map(parse_range).transpose()?;
    let cells = sweep_cells(n_max, range);
    let rows = sweep_rows(&cells, &solver.config(), jobs, timing)?;
    write_output(out, &sweep_csv(&rows))?;
    let timed_out = rows.iter().filter(|r| r.exact.is_none()).count();
    let disagree = rows.iter().filter(|r| r.agrees == Some(false)).count();
    eprintln!("{} cells, {} disagreements, {} timeouts", rows.len(), disagree, timed_out);
    if timed_out > 0 {
        return Err(Failure(EXIT_TIMEOUT, format!("{timed_out} cells timed out")));
    }
    Ok(EXIT_OK)
}
