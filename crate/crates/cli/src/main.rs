mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bcay_core::bci::{self, BciOptions};
use bcay_core::group::{is_homogeneous, HOMOGENEITY_GUARD};
use bcay_core::iso::{bcay_equivalent, graphs_isomorphic};
use bcay_core::spectra::{self, EigenCluster, SpectrumSummary};
use bcay_core::{BiCayleyGraph, ConnectionSet, DefaultReal, Error, GqParams};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use report::{OneOrMany, ReportDocument, Timing};

#[derive(Parser, Debug)]
#[command(name = "bcay", version, about = "Bi-Cayley graphs over generalized quaternion groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for the parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Omit wall-clock timing so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic polynomial and spectrum of BCay(Q_4n, S).
    Spectrum {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value_t = Route::Exact)]
        route: Route,
        /// Write the spectrum as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Verify a group property for one n or a range `lo..hi`.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Edge list or biadjacency bitmap of BCay(Q_4n, S).
    Graph {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
        format: GraphFormat,
    },
    /// Decide BCay(Q_4n, S) ≅ BCay(Q_4n, T) and search for T = g·S^α.
    Iso {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        set: String,
        #[arg(long)]
        other: String,
    },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Every pair of isomorphic subgroups is fused by an automorphism
    Fif(RangeArgs),
    /// Exhaustive m-BCI sweep over normalized connection sets
    Bci {
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
    /// 2-BCI and 3-BCI against the prediction "n = 2 or n odd"
    Theorem1(RangeArgs),
    /// Order-doubling pairs {1, a^i, b} vs {1, a^j, b} are non-isomorphic (odd n)
    Lemma33(RangeArgs),
    /// Isomorphisms between subgroups extend to automorphisms
    Homogeneous(RangeArgs),
}

#[derive(Args, Debug)]
struct RangeArgs {
    /// `N` or an inclusive range `lo..hi`.
    #[arg(long)]
    n: String,
    /// Largest n accepted by the exhaustive sweeps.
    #[arg(long)]
    guard: Option<u32>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Route {
    Reps,
    Exact,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum GraphFormat {
    Edges,
    Bitmap,
}

/// A failure mapped onto the exit-code contract.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Contradiction(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Contradiction(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Contradiction(m) | Failure::Resource(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource() {
            Failure::Resource(e.to_string())
        } else if matches!(e, Error::Consistency(_)) {
            Failure::Contradiction(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn parse_range(s: &str) -> Result<(Vec<u32>, bool), Failure> {
    let bad = || Failure::Usage(format!("invalid n or range `{s}`; expected N or lo..hi"));
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok(((lo..=hi).collect(), false))
    } else {
        Ok((vec![s.parse().map_err(|_| bad())?], true))
    }
}

fn params(n: u32) -> Result<GqParams, Failure> {
    GqParams::new(n).map_err(Failure::from)
}

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn round12(v: f64) -> f64 {
    let r = (v * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Serialize)]
struct SpectrumPayload {
    n: u32,
    set: ConnectionSet,
    charpoly: Vec<String>,
    eigenvalues: Vec<EigenCluster>,
    routes: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    routes_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_residue: Option<f64>,
}

struct Outcome {
    json: String,
    matched: bool,
    csv: Option<String>,
    /// Set when part of a sweep hit a guard.
    resource: Option<String>,
}

fn finish<R: Serialize>(
    cli: &Cli,
    parameters: Map<String, Value>,
    matched: Option<bool>,
    result: R,
    started: Instant,
) -> String {
    let mut doc = ReportDocument::new(command_echo(), parameters, result);
    doc.matched = matched;
    if !cli.no_timing {
        doc.timing = Some(Timing {
            seconds: started.elapsed().as_secs_f64(),
        });
    }
    doc.to_json()
}

fn run_spectrum(cli: &Cli, n: u32, expr: &str, route: Route, started: Instant) -> Result<Outcome, Failure> {
    let p = params(n)?;
    let set = ConnectionSet::parse(p, expr)?;
    let reps = match route {
        Route::Reps | Route::Both => Some(spectra::spectrum_via_reps::<DefaultReal>(&set)?),
        Route::Exact => None,
    };
    let exact = match route {
        Route::Exact | Route::Both => Some(spectra::charpoly_exact(&BiCayleyGraph::build(&set)?)?),
        Route::Reps => None,
    };
    let agree = match (&reps, &exact) {
        (Some(r), Some(e)) => {
            if r.charpoly != e.charpoly {
                return Err(Failure::Contradiction(route_diff(r, e)));
            }
            Some(true)
        }
        _ => None,
    };
    // the exact route is authoritative when it ran
    let summary = exact.as_ref().or(reps.as_ref()).unwrap();
    let eigenvalues = summary
        .eigenvalues
        .iter()
        .map(|c| EigenCluster {
            value: round12(c.value),
            multiplicity: c.multiplicity,
        })
        .collect();
    let payload = SpectrumPayload {
        n,
        set: set.clone(),
        charpoly: spectra::charpoly_strings(&summary.charpoly),
        eigenvalues,
        routes: [reps.as_ref().map(|_| "reps"), exact.as_ref().map(|_| "exact-oracle")]
            .into_iter()
            .flatten()
            .collect(),
        routes_agree: agree,
        max_residue: reps.as_ref().map(|r| r.max_residue),
    };
    let mut parameters = Map::new();
    parameters.insert("n".into(), json!(n));
    parameters.insert("set".into(), json!(set));
    parameters.insert("route".into(), json!(route));
    Ok(Outcome {
        json: finish(cli, parameters, None, payload, started),
        matched: true,
        csv: Some(summary.to_csv()),
        resource: None,
    })
}

fn route_diff(r: &SpectrumSummary, e: &SpectrumSummary) -> String {
    let mut msg = String::from("representation and exact routes disagree:\n");
    let len = r.charpoly.coeffs().len().max(e.charpoly.coeffs().len());
    for i in 0..len {
        let (a, b) = (r.charpoly.coeff(i), e.charpoly.coeff(i));
        if a != b {
            msg.push_str(&format!("  λ^{i}: reps {a}, exact {b}\n"));
        }
    }
    msg
}

fn bci_options(guard: Option<u32>) -> BciOptions {
    BciOptions {
        n_guard: guard.unwrap_or(bci::DEFAULT_N_GUARD),
        ..Default::default()
    }
}

fn range_parameters(args: &RangeArgs, ns: &[u32]) -> Map<String, Value> {
    let mut m = Map::new();
    if args.n.contains("..") {
        m.insert("n".into(), json!(ns));
    } else {
        m.insert("n".into(), json!(ns[0]));
    }
    if let Some(g) = args.guard {
        m.insert("guard".into(), json!(g));
    }
    m
}

fn run_verify(cli: &Cli, what: &Verify, started: Instant) -> Result<Outcome, Failure> {
    match what {
        Verify::Fif(args) => {
            let (ns, single) = parse_range(&args.n)?;
            let mut reports = Vec::new();
            for &n in &ns {
                reports.push(bci::is_fif(params(n)?));
            }
            let matched = reports.iter().all(|r| r.verdict.holds() == bci::predicted_bci(r.n));
            let params = range_parameters(args, &ns);
            Ok(plain(finish(cli, params, Some(matched), OneOrMany::from_vec(reports, single), started), matched))
        }
        Verify::Bci { range, m } => {
            let (ns, single) = parse_range(&range.n)?;
            let opts = bci_options(range.guard);
            let mut reports = Vec::new();
            for &n in &ns {
                let mut r = bci::is_m_bci_with(params(n)?, *m, &opts)?;
                if cli.no_timing {
                    r = r.without_timing();
                }
                reports.push(r);
            }
            let expect = |n: u32| *m == 1 || bci::predicted_bci(n);
            let matched = reports.iter().all(|r| r.verdict.holds() == expect(r.n));
            let mut params = range_parameters(range, &ns);
            params.insert("m".into(), json!(m));
            Ok(plain(finish(cli, params, Some(matched), OneOrMany::from_vec(reports, single), started), matched))
        }
        Verify::Theorem1(args) => {
            let (ns, _) = parse_range(&args.n)?;
            for &n in &ns {
                params(n)?;
            }
            let mut summary = bci::verify_theorem_1(&ns, &bci_options(args.guard))?;
            if cli.no_timing {
                summary = summary.without_timing();
            }
            let resource = summary
                .rows
                .iter()
                .find_map(|r| r.error.clone().map(|e| format!("n = {}: {e}", r.n)));
            let matched = summary.all_agree;
            let json = finish(cli, range_parameters(args, &ns), Some(matched), summary, started);
            Ok(Outcome {
                json,
                matched,
                csv: None,
                resource,
            })
        }
        Verify::Lemma33(args) => {
            let (ns, single) = parse_range(&args.n)?;
            if single && ns[0] % 2 == 0 {
                return Err(Failure::Usage(format!(
                    "the order-doubling check needs odd n, got {}",
                    ns[0]
                )));
            }
            let mut reports = Vec::new();
            for &n in ns.iter().filter(|&&n| n % 2 == 1 && n >= 3) {
                reports.push(bci::verify_lemma_3_3(params(n)?)?);
            }
            let matched = reports.iter().all(|r| r.verdict.holds());
            Ok(plain(
                finish(cli, range_parameters(args, &ns), Some(matched), OneOrMany::from_vec(reports, single), started),
                matched,
            ))
        }
        Verify::Homogeneous(args) => {
            let (ns, single) = parse_range(&args.n)?;
            let guard = args.guard.unwrap_or(HOMOGENEITY_GUARD);
            let mut reports = Vec::new();
            for &n in &ns {
                reports.push(is_homogeneous(params(n)?, guard)?);
            }
            // only odd n carries an expectation
            let matched = reports.iter().all(|r| r.n % 2 == 0 || r.homogeneous);
            Ok(plain(
                finish(cli, range_parameters(args, &ns), Some(matched), OneOrMany::from_vec(reports, single), started),
                matched,
            ))
        }
    }
}

fn plain(json: String, matched: bool) -> Outcome {
    Outcome {
        json,
        matched,
        csv: None,
        resource: None,
    }
}

fn run_graph(cli: &Cli, n: u32, expr: &str, format: GraphFormat, started: Instant) -> Result<Outcome, Failure> {
    let p = params(n)?;
    let set = ConnectionSet::parse(p, expr)?;
    let g = BiCayleyGraph::build(&set)?;
    let lines: Vec<String> = match format {
        GraphFormat::Edges => g.edge_list().lines().map(str::to_owned).collect(),
        GraphFormat::Bitmap => g.bitmap().lines().map(str::to_owned).collect(),
    };
    let result = json!({
        "n": n,
        "set": set,
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "valency": g.valency(),
        "components": g.components().len(),
        "format": format,
        "lines": lines,
    });
    let mut parameters = Map::new();
    parameters.insert("n".into(), json!(n));
    parameters.insert("set".into(), json!(set));
    parameters.insert("format".into(), json!(format));
    Ok(plain(finish(cli, parameters, None, result, started), true))
}

fn run_iso(cli: &Cli, n: u32, a: &str, b: &str, started: Instant) -> Result<Outcome, Failure> {
    let p = params(n)?;
    let s = ConnectionSet::parse(p, a)?;
    let t = ConnectionSet::parse(p, b)?;
    let iso = graphs_isomorphic(&BiCayleyGraph::build(&s)?, &BiCayleyGraph::build(&t)?)?;
    let witness = bcay_equivalent(&s, &t);
    let bci_graph_pair = !iso.is_isomorphic() || witness.is_some();
    let result = json!({
        "S": s,
        "T": t,
        "iso": iso,
        "equivalence": witness,
        "consistent_with_bci": bci_graph_pair,
    });
    let mut parameters = Map::new();
    parameters.insert("n".into(), json!(n));
    parameters.insert("set".into(), json!(s));
    parameters.insert("other".into(), json!(t));
    Ok(plain(finish(cli, parameters, None, result, started), true))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let started = Instant::now();
    match &cli.command {
        Command::Spectrum { n, set, route, .. } => run_spectrum(cli, *n, set, *route, started),
        Command::Verify { what } => run_verify(cli, what, started),
        Command::Graph { n, set, format } => run_graph(cli, *n, set, *format, started),
        Command::Iso { n, set, other } => run_iso(cli, *n, set, other, started),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("bcay: cannot configure {jobs} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("bcay: {}", f.message().trim_end());
            return ExitCode::from(f.code());
        }
    };
    print!("{}", outcome.json);
    if let Some(path) = &cli.out {
        if let Err(e) = fs::write(path, &outcome.json) {
            eprintln!("bcay: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if let (Command::Spectrum { csv: Some(path), .. }, Some(csv)) = (&cli.command, &outcome.csv) {
        if let Err(e) = fs::write(path, csv) {
            eprintln!("bcay: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if let Some(msg) = outcome.resource {
        eprintln!("bcay: {msg}");
        return ExitCode::from(3);
    }
    if !outcome.matched {
        eprintln!("bcay: the expected verdict was not reproduced");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

