//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use stubmatch::analysis::{
    components, cube_diagnostic, edge_length_stats, percolation_sweep, transport_balance, SweepConfig, SweepLaw,
    TransportRule,
};
use stubmatch::io::{read_matching, read_points, write_matching, write_points, write_sweep_csv, write_types, Meta};
use stubmatch::matching::{stable_multi_match, stable_multi_match_rounds, verify_stability};
use stubmatch::process::sample_marked;
use stubmatch::schemes::{connectivity_scheme, finite_component_scheme, infinite_path_scheme, mass_bound_check};
use stubmatch::{BoxSpec, DegreeDistribution, Error, ForbiddenPairs, MarkedPointSet64, MatchResult64, Matching64};

use crate::render::{render_svg, Style};

/// Environment variable holding the sweep worker count.
pub const THREADS_ENV: &str = "STUBMATCH_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "stubmatch", version, about = "Stable multi-matchings of marked Poisson point processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a marked Poisson instance and write it as CSV.
    Sample(SampleArgs),
    /// Compute the stable multi-matching of an instance.
    Match(MatchArgs),
    /// Run one of the constructive matching schemes.
    Scheme(SchemeArgs),
    /// Check a matching for stability, stub budgets and agreement with the oracle.
    Verify(VerifyArgs),
    /// Component and edge-length statistics of a matching.
    Stats(StatsArgs),
    /// Largest-component statistics over a grid of laws, window sides and seeds.
    Sweep(SweepArgs),
    /// Draw a planar instance and its matching as SVG.
    Render(RenderArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 30.0)]
    pub side: f64,
    /// Periodic boundary (the default).
    #[arg(long, overrides_with = "no_periodic")]
    pub periodic: bool,
    #[arg(long = "no-periodic", overrides_with = "periodic")]
    pub no_periodic: bool,
    /// Degree law: `k`, or `value:prob` pairs joined by commas.
    #[arg(long, default_value = "2")]
    pub mu: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub intensity: f64,
    /// Read the instance from a points CSV instead of sampling.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MatchArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Matching CSV destination (standard output if absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write the JSON summary to this file.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Stable,
    Finite,
    Path,
    Connect,
}

#[derive(Args, Debug)]
pub struct SchemeArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = SchemeKind::Stable)]
    pub scheme: SchemeKind,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write the instance actually used (its box may have been switched).
    #[arg(long)]
    pub points_output: Option<PathBuf>,
    /// Write `index,degree,type` rows (finite scheme).
    #[arg(long)]
    pub types: Option<PathBuf>,
    /// Pieces smaller than this count as finite in the mass check.
    #[arg(long)]
    pub threshold: Option<usize>,
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Points CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Matching CSV.
    #[arg(long)]
    pub matching: PathBuf,
    /// Largest instance compared against the round-by-round oracle.
    #[arg(long, default_value_t = 2000)]
    pub oracle_max: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub matching: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
    pub orders: Vec<u32>,
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    /// Side of the renormalization cubes; enables the cube diagnostic.
    #[arg(long)]
    pub cube_side: Option<f64>,
    /// Largest occupancy of an acceptable cube.
    #[arg(long, default_value_t = 10)]
    pub cube_max: u32,
    /// Supercube radius in cube units (default twice the reach multiplier).
    #[arg(long)]
    pub cube_radius: Option<usize>,
    /// Transport rule for the mass ledger (`unit-mass-per-edge-endpoint` or `path-endpoint`).
    #[arg(long)]
    pub transport: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub cell_side: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Degree law; repeat for a law sweep.
    #[arg(long, required = true)]
    pub mu: Vec<String>,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub sides: Vec<f64>,
    /// Replicas per grid cell.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    /// Seed the replica seeds are derived from.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub intensity: f64,
    #[arg(long, overrides_with = "no_periodic")]
    pub periodic: bool,
    #[arg(long = "no-periodic", overrides_with = "periodic")]
    pub no_periodic: bool,
    /// Worker threads (overrides the environment variable).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub matching: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A failed run and its exit status.
#[derive(Debug)]
pub enum Failure {
    Verification(String),
    Usage(String),
    Io(String),
    Infeasible(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Self::Verification(_) => EXIT_VERIFY,
            Self::Usage(_) => EXIT_USAGE,
            Self::Io(_) => EXIT_IO,
            Self::Infeasible(_) => EXIT_INFEASIBLE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Verification(m) | Self::Usage(m) | Self::Io(m) | Self::Infeasible(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let text = e.to_string();
        match e {
            Error::Io(_) | Error::Format { .. } => Self::Io(text),
            Error::Infeasible(_) => Self::Infeasible(text),
            _ => Self::Usage(text),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `argv` (program name first), runs the command and returns the exit status.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Sample(a) => sample(a),
        Command::Match(a) => run_match(a),
        Command::Scheme(a) => scheme(a),
        Command::Verify(a) => verify(a),
        Command::Stats(a) => stats(a),
        Command::Sweep(a) => sweep(a),
        Command::Render(a) => render(a),
    }
}

fn open_input(path: &Path) -> std::result::Result<BufReader<File>, Failure> {
    File::open(path).map(BufReader::new).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn open_output(path: Option<&Path>) -> std::result::Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_points(path: &Path) -> std::result::Result<(MarkedPointSet64, Meta), Failure> {
    read_points(open_input(path)?).map_err(|e| annotate(e, path))
}

fn load_matching(path: &Path) -> std::result::Result<(Matching64, Meta), Failure> {
    read_matching(open_input(path)?).map_err(|e| annotate(e, path))
}

fn annotate(e: Error, path: &Path) -> Failure {
    match Failure::from(e) {
        Failure::Io(m) => Failure::Io(format!("{}: {m}", path.display())),
        other => other,
    }
}

impl InstanceArgs {
    fn periodic(&self) -> bool {
        !self.no_periodic
    }

    /// Reads or samples the instance, with metadata that reproduces it.
    fn load(&self, force_open: bool) -> std::result::Result<(MarkedPointSet64, Meta), Failure> {
        if let Some(path) = &self.input {
            let (m, meta) = load_points(path)?;
            if force_open && m.points().bbox().periodic {
                let open = BoxSpec::open(m.points().dim(), m.points().bbox().side)?;
                let m = MarkedPointSet64::new(m.points().with_box(open)?, m.degrees().to_vec())?;
                return Ok((m, meta));
            }
            return Ok((m, meta));
        }
        let mu: DegreeDistribution = self.mu.parse()?;
        let bx = BoxSpec::new(self.dim, self.side, self.periodic() && !force_open)?;
        let m = sample_marked(bx, self.intensity, &mu, self.seed)?;
        let mut meta = Meta::new();
        meta.set("seed", self.seed).set("mu", &mu).set("intensity", self.intensity);
        Ok((m, meta))
    }
}

fn with_box_meta(m: &MarkedPointSet64, meta: &Meta) -> Meta {
    let bx = m.points().bbox();
    let mut out = Meta::new();
    out.set("d", bx.dim).set("L", bx.side).set("periodic", bx.periodic);
    for (k, v) in meta.entries() {
        if !matches!(k.as_str(), "d" | "L" | "periodic" | "n") {
            out.set(k, v);
        }
    }
    out
}

fn emit_json<T: Serialize>(value: &T, to_stderr: bool, file: Option<&Path>) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    if let Some(path) = file {
        let mut w = open_output(Some(path))?;
        writeln!(w, "{text}")?;
        w.flush()?;
    }
    let written = if to_stderr {
        writeln!(io::stderr().lock(), "{text}")
    } else {
        writeln!(io::stdout().lock(), "{text}")
    };
    match written {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn sample(a: SampleArgs) -> Outcome {
    let (m, meta) = a.instance.load(false)?;
    let mut w = open_output(a.output.as_deref())?;
    write_points(&mut w, &m, &meta)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct MatchSummary {
    n_points: usize,
    edges: usize,
    steps: usize,
    total_stubs: u64,
    leftover_stubs: u64,
    leftover_fraction: f64,
}

impl MatchSummary {
    fn of(m: &MarkedPointSet64, r: &MatchResult64) -> Self {
        Self {
            n_points: m.len(),
            edges: r.matching.len(),
            steps: r.steps,
            total_stubs: m.total_stubs(),
            leftover_stubs: r.leftover_total(),
            leftover_fraction: r.leftover_fraction(),
        }
    }
}

fn run_match(a: MatchArgs) -> Outcome {
    let (m, meta) = a.instance.load(false)?;
    let r = stable_multi_match(&m, &ForbiddenPairs::new());
    let mut w = open_output(a.output.as_deref())?;
    write_matching(&mut w, &r.matching, &with_box_meta(&m, &meta))?;
    w.flush()?;
    emit_json(&MatchSummary::of(&m, &r), a.output.is_none(), a.summary.as_deref())
}

#[derive(Serialize)]
struct SchemeSummary {
    scheme: SchemeKind,
    periodic: bool,
    #[serde(flatten)]
    matching: MatchSummary,
    component_count: usize,
    largest_fraction: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    remainder: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trees: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plan_levels: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unattached: Option<usize>,
    mass_threshold: usize,
    mass_violations: usize,
    mass_balanced: bool,
}

fn scheme(a: SchemeArgs) -> Outcome {
    let needs_open = matches!(a.scheme, SchemeKind::Path | SchemeKind::Connect);
    if needs_open && a.instance.periodic() {
        let name = if a.scheme == SchemeKind::Path { "path" } else { "connect" };
        eprintln!("notice: the {name} scheme needs a non-periodic box; using an open box of the same side");
    }
    let (m, meta) = a.instance.load(needs_open)?;
    let mut types = None;
    let (mut remainder, mut trees, mut plan_levels, mut unattached) = (None, None, None, None);
    let result = match a.scheme {
        SchemeKind::Stable => stable_multi_match(&m, &ForbiddenPairs::new()),
        SchemeKind::Finite => {
            let out = finite_component_scheme(&m);
            remainder = Some(out.remainder.len());
            types = Some(out.type_of);
            out.result
        }
        SchemeKind::Path => {
            let out = infinite_path_scheme(&m)?;
            trees = Some(out.paths.len());
            out.result
        }
        SchemeKind::Connect => {
            let out = connectivity_scheme(&m)?;
            trees = Some(out.paths.len());
            plan_levels = out.plan.as_ref().map(|p| p.m);
            unattached = Some(out.unattached.len());
            out.result
        }
    };
    let meta = with_box_meta(&m, &meta);
    let mut w = open_output(a.output.as_deref())?;
    write_matching(&mut w, &result.matching, &meta)?;
    w.flush()?;
    if let Some(path) = &a.points_output {
        let mut w = open_output(Some(path))?;
        write_points(&mut w, &m, &meta)?;
        w.flush()?;
    }
    if let Some(path) = &a.types {
        let mut w = open_output(Some(path))?;
        let none = vec![None; m.len()];
        write_types(&mut w, m.degrees(), types.as_deref().unwrap_or(&none))?;
        w.flush()?;
    }
    let report = components(m.len(), &result.matching);
    let mass = mass_bound_check(&m, &result, a.threshold);
    let summary = SchemeSummary {
        scheme: a.scheme,
        periodic: m.points().bbox().periodic,
        matching: MatchSummary::of(&m, &result),
        component_count: report.component_count,
        largest_fraction: report.largest_fraction,
        remainder,
        trees,
        plan_levels,
        unattached,
        mass_threshold: mass.threshold,
        mass_violations: mass.violations.len(),
        mass_balanced: mass.balanced(),
    };
    emit_json(&summary, a.output.is_none(), a.summary.as_deref())
}

#[derive(Serialize)]
struct VerifyReport {
    n_points: usize,
    edges: usize,
    structural_problems: Vec<String>,
    unstable_pairs: usize,
    first_unstable: Vec<(usize, usize)>,
    oracle_checked: bool,
    oracle_agrees: Option<bool>,
    ok: bool,
}

fn verify(a: VerifyArgs) -> Outcome {
    let (m, _) = load_points(&a.input)?;
    let (g, _) = load_matching(&a.matching)?;
    let mut problems = Vec::new();
    if g.point_count() != m.len() {
        problems.push(format!("matching covers {} points, instance has {}", g.point_count(), m.len()));
        let report = VerifyReport {
            n_points: m.len(),
            edges: g.len(),
            structural_problems: problems,
            unstable_pairs: 0,
            first_unstable: Vec::new(),
            oracle_checked: false,
            oracle_agrees: None,
            ok: false,
        };
        emit_json(&report, false, None)?;
        return Err(Failure::Verification("matching does not fit the instance".into()));
    }
    problems.extend(g.check(m.points(), m.degrees(), &ForbiddenPairs::new()));
    let result = MatchResult64::from_matching(g, m.degrees());
    let unstable = if problems.is_empty() { verify_stability(&m, &result, |_, _| true) } else { Vec::new() };
    let oracle_checked = m.len() <= a.oracle_max;
    let oracle_agrees = oracle_checked.then(|| {
        let oracle = stable_multi_match_rounds(&m, &ForbiddenPairs::new());
        oracle.matching.edge_set() == result.matching.edge_set()
    });
    let ok = problems.is_empty() && unstable.is_empty() && oracle_agrees != Some(false);
    let report = VerifyReport {
        n_points: m.len(),
        edges: result.matching.len(),
        structural_problems: problems,
        unstable_pairs: unstable.len(),
        first_unstable: unstable.iter().take(10).copied().collect(),
        oracle_checked,
        oracle_agrees,
        ok,
    };
    emit_json(&report, false, None)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification("the matching is not the stable multi-matching of the instance".into()))
    }
}

#[derive(Serialize)]
struct ComponentSummary {
    n_points: usize,
    component_count: usize,
    largest: usize,
    largest_fraction: f64,
    mean_comp_size: f64,
    size_histogram: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct EdgeSummary {
    count: usize,
    mean: Option<f64>,
    max: Option<f64>,
    moments: Vec<(u32, Option<f64>)>,
    histogram_bounds: Vec<f64>,
    histogram_counts: Vec<u64>,
}

#[derive(Serialize)]
struct CubeSummary {
    cube_side: f64,
    per_axis: usize,
    n_bound: u32,
    m_reach: usize,
    radius: usize,
    acceptable: usize,
    good: usize,
    good_fraction: f64,
    good_clusters: usize,
    largest_good_cluster_fraction: f64,
}

#[derive(Serialize)]
struct TransportSummary {
    rule: String,
    cell_side: f64,
    total_sent: u64,
    total_received: u64,
    max_abs_discrepancy: i64,
}

#[derive(Serialize)]
struct StatsReport {
    components: ComponentSummary,
    edges: EdgeSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    cubes: Option<CubeSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transport: Option<TransportSummary>,
}

fn stats(a: StatsArgs) -> Outcome {
    let (m, _) = load_points(&a.input)?;
    let (g, _) = load_matching(&a.matching)?;
    if g.point_count() != m.len() {
        return Err(Failure::Usage(format!("matching covers {} points, instance has {}", g.point_count(), m.len())));
    }
    let report = components(m.len(), &g);
    let mut sizes = std::collections::BTreeMap::new();
    for &s in &report.sizes {
        *sizes.entry(s).or_insert(0usize) += 1;
    }
    let e = edge_length_stats(&g, &a.orders, a.bins);
    let cubes = match a.cube_side {
        Some(side) => {
            let d = cube_diagnostic(m.points(), side, a.cube_max, a.cube_radius)?;
            Some(CubeSummary {
                cube_side: d.grid.cube_side,
                per_axis: d.grid.per_axis,
                n_bound: d.grid.n_bound,
                m_reach: d.grid.m_reach,
                radius: d.grid.radius,
                acceptable: d.acceptable_count,
                good: d.good_count,
                good_fraction: d.good_fraction,
                good_clusters: d.good_cluster_count,
                largest_good_cluster_fraction: d.largest_good_cluster_fraction,
            })
        }
        None => None,
    };
    let transport = match &a.transport {
        Some(name) => {
            let rule: TransportRule = name.parse()?;
            let l = transport_balance(m.points(), &g, a.cell_side, rule)?;
            Some(TransportSummary {
                rule: rule.to_string(),
                cell_side: l.cell_side,
                total_sent: l.total_sent(),
                total_received: l.total_received(),
                max_abs_discrepancy: l.discrepancy().iter().map(|d| d.abs()).max().unwrap_or(0),
            })
        }
        None => None,
    };
    let out = StatsReport {
        components: ComponentSummary {
            n_points: m.len(),
            component_count: report.component_count,
            largest: report.largest(),
            largest_fraction: report.largest_fraction,
            mean_comp_size: report.mean_point_component_size(),
            size_histogram: sizes.into_iter().collect(),
        },
        edges: EdgeSummary {
            count: e.count,
            mean: e.mean,
            max: e.max,
            moments: e.moments,
            histogram_bounds: e.histogram.bounds,
            histogram_counts: e.histogram.counts,
        },
        cubes,
        transport,
    };
    let mut w = open_output(a.output.as_deref())?;
    match a.format {
        Format::Json => {
            let text = serde_json::to_string_pretty(&out).map_err(|e| Failure::Io(e.to_string()))?;
            writeln!(w, "{text}")?;
        }
        Format::Csv => {
            let value = serde_json::to_value(&out).map_err(|e| Failure::Io(e.to_string()))?;
            writeln!(w, "key,value")?;
            flatten_csv(&mut w, "", &value)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `key,value` rows for every scalar leaf of a JSON value, keys joined by dots.
fn flatten_csv(w: &mut dyn Write, prefix: &str, value: &serde_json::Value) -> io::Result<()> {
    use serde_json::Value;
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten_csv(w, &key(k), v)?;
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten_csv(w, &key(&i.to_string()), v)?;
            }
        }
        Value::Null => writeln!(w, "{prefix},")?,
        Value::String(s) => writeln!(w, "{prefix},{s}")?,
        other => writeln!(w, "{prefix},{other}")?,
    }
    Ok(())
}

fn sweep(a: SweepArgs) -> Outcome {
    let mut laws = Vec::with_capacity(a.mu.len());
    for spec in &a.mu {
        laws.push(SweepLaw { param: spec.clone(), mu: spec.parse()? });
    }
    let threads = match a.threads {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| Failure::Usage(format!("{THREADS_ENV}={v} is not a count")))?),
            Err(_) => None,
        },
    };
    if threads == Some(0) {
        return Err(Failure::Usage("thread count must be positive".into()));
    }
    let config = SweepConfig {
        laws,
        dim: a.dim,
        sides: a.sides,
        replicas: a.seeds,
        seed: a.seed,
        intensity: a.intensity,
        periodic: !a.no_periodic,
        threads,
    };
    let rows = percolation_sweep(&config)?;
    let mut w = open_output(a.output.as_deref())?;
    match a.format {
        Format::Csv => write_sweep_csv(&mut w, &rows)?,
        Format::Json => {
            for r in &rows {
                writeln!(w, "{}", serde_json::to_string(r).map_err(|e| Failure::Io(e.to_string()))?)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn render(a: RenderArgs) -> Outcome {
    let (m, _) = load_points(&a.input)?;
    let g = match &a.matching {
        Some(p) => Some(load_matching(p)?.0),
        None => None,
    };
    if let Some(g) = &g {
        if g.point_count() != m.len() {
            return Err(Failure::Usage(format!("matching covers {} points, instance has {}", g.point_count(), m.len())));
        }
    }
    let svg = render_svg(&m, g.as_ref(), &Style::default())?;
    let mut w = open_output(a.output.as_deref())?;
    w.write_all(svg.as_bytes())?;
    w.flush()?;
    Ok(())
}
