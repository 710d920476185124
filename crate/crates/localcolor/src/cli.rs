//! Command-line surface.
//!
//! Exit codes are a stable contract: 0 success, 2 a certificate was
//! emitted, 3 a precondition does not hold, 4 a work budget ran out. Any
//! other failure (bad usage, unreadable input, failed verification) exits
//! with 1.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use localcolor_core::clique::{self, is_clique};
use localcolor_core::coloring::{first_conflict, Color};
use localcolor_core::constants::{Breach, ConstantsProfile};
use localcolor_core::decomposition::{self, DecompositionError, DenseDecomposition};
use localcolor_core::dense::DenseError;
use localcolor_core::exact;
use localcolor_core::generators;
use localcolor_core::listcolor::ListColorError;
use localcolor_core::lowerbound::{self, LowerBoundError};
use localcolor_core::pipeline::{self, PipelineError, Theorem1Outcome};
use localcolor_core::reducers::{self, CertifyError};
use localcolor_core::sim::{SimError, TraceRecord};
use localcolor_core::sparse::SparseError;
use localcolor_core::{Frac, Graph, RoundStats};

use crate::io::{self, CertificateJson, LayerSidecar};
use crate::report::{RunReport, Verdict, RUN_REPORT_SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CERTIFICATE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Largest graph the oracle verification level accepts without `--force`.
pub const ORACLE_MAX_VERTICES: usize = 120;

#[derive(Debug, Parser)]
#[command(name = "localcolor", version, about = "LOCAL-model graph coloring: generate, decompose, color, certify, verify")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every command. Each can also be set through the
/// environment variable named next to it.
#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, global = true, env = "LOCALCOLOR_SEED", default_value_t = 0)]
    pub seed: u64,
    /// `paper`, `desk`, a JSON file, or inline JSON starting with `{`.
    #[arg(long, global = true, env = "LOCALCOLOR_PROFILE", default_value = "desk")]
    pub profile: String,
    /// Overrides the round limits of the profile.
    #[arg(long, global = true, env = "LOCALCOLOR_MAX_ROUNDS")]
    pub max_rounds: Option<usize>,
    #[arg(long, global = true, env = "LOCALCOLOR_VERIFY", value_enum, default_value_t = VerifyLevel::Fast)]
    pub verify: VerifyLevel,
    /// JSON-lines trace of the node programs run on the whole input graph.
    #[arg(long, global = true, env = "LOCALCOLOR_TRACE")]
    pub trace: Option<PathBuf>,
    /// Overrides the exact-solver and clique-search budgets.
    #[arg(long, global = true, env = "LOCALCOLOR_BUDGET")]
    pub budget: Option<u64>,
    /// Where to write the JSON run report.
    #[arg(long, global = true, env = "LOCALCOLOR_REPORT")]
    pub report: Option<PathBuf>,
    /// Record wall time in the report (which makes it non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Let the oracle level run on large graphs and the decomposition run
    /// beyond its proven density range.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyLevel {
    None,
    Fast,
    Oracle,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph.
    Gen(GenArgs),
    /// Build and check a dense decomposition.
    Decompose(DecomposeArgs),
    /// Find a large clique or color with `Δ − ⌊εk⌋` colors.
    Color(ColorArgs),
    /// Look for a closed neighborhood that is not c-colorable.
    Certify(CertifyArgs),
    /// Check a coloring, decomposition or certificate against a graph.
    Verify(VerifyArgs),
    /// Run the coloring pipeline over a seeded family of graphs.
    Bench(BenchArgs),
    /// Print the JSON Schema of run reports.
    Schema,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Chain,
    Hard,
    #[value(alias = "random")]
    RandomRegularish,
    CliqueUnion,
    Clustered,
    TriangleFree,
    ReducerHost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Edges,
    Json,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub kind: GenKind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub delta: Option<usize>,
    #[arg(long)]
    pub c: Option<usize>,
    /// Number of layers of a chain or hard instance.
    #[arg(long)]
    pub i: Option<usize>,
    /// Cliques in a clique union, reducers in a reducer host.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub size: Option<usize>,
    /// Edge drop rate of the clustered family, per thousand.
    #[arg(long, default_value_t = 20)]
    pub drop_permille: u32,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
    pub format: GraphFormat,
    /// JSON annotation: layers of a chain or hard instance, reducers of a
    /// reducer host.
    #[arg(long, alias = "layers")]
    pub sidecar: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    pub input: PathBuf,
    /// Density `d`, as an integer or `num/den`. Defaults to `Δ/100`.
    #[arg(long, conflicts_with = "k")]
    pub d: Option<Frac>,
    /// Take `d` from the profile's density times `k`.
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ColorArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub k: u64,
    /// Where the coloring goes (stdout by default).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Where a clique certificate goes (stdout by default).
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    /// Also write the decomposition the run used.
    #[arg(long)]
    pub decomposition: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub c: usize,
    /// Where the certificate goes (stdout by default).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    /// Largest color the coloring may use.
    #[arg(long)]
    pub palette: Option<Color>,
    #[arg(long)]
    pub decomposition: Option<PathBuf>,
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchFamily {
    TriangleFree,
    RandomRegularish,
    Clustered,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = BenchFamily::TriangleFree)]
    pub family: BenchFamily,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 50)]
    pub delta: usize,
    #[arg(long, default_value_t = 10)]
    pub k: u64,
    #[arg(long, default_value_t = 10)]
    pub runs: u64,
    /// One JSON line per run (stdout by default).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    fn new(code: i32, error: impl Into<anyhow::Error>) -> Failure {
        Failure { code, error: error.into() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Failure {
        Failure { code: EXIT_FAILURE, error }
    }
}

type CmdResult = Result<RunReport, Failure>;

fn list_code(e: &ListColorError) -> i32 {
    match e {
        ListColorError::RoundLimit { .. } => EXIT_BUDGET,
        ListColorError::SlackViolation { .. } | ListColorError::ImproperInput(..) => EXIT_PRECONDITION,
    }
}

fn sim_code(e: &SimError) -> i32 {
    match e {
        SimError::RoundLimit { .. } => EXIT_BUDGET,
        SimError::NonNeighbor { .. } => EXIT_FAILURE,
    }
}

pub fn pipeline_code(e: &PipelineError) -> i32 {
    match e {
        PipelineError::InvalidK { .. } => EXIT_PRECONDITION,
        PipelineError::Clique(_) => EXIT_BUDGET,
        PipelineError::Decomposition(DecompositionError::DensityTooLarge { .. }) => EXIT_PRECONDITION,
        PipelineError::Decomposition(DecompositionError::Sim(s)) => sim_code(s),
        PipelineError::Sparse(SparseError::TooFewPairs { .. }) => EXIT_PRECONDITION,
        PipelineError::Sparse(SparseError::PhaseLimit { .. }) => EXIT_BUDGET,
        PipelineError::SparseExtension(l) => list_code(l),
        PipelineError::Dense(DenseError::Stage { source, .. }) => list_code(source),
        PipelineError::Dense(_) => EXIT_PRECONDITION,
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code; diagnostics go to stderr.
pub fn main_with_args(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let echo: Vec<String> = args.iter().skip(1).cloned().collect();
    let started = Instant::now();
    let (code, report) = match run(&cli, &echo) {
        Ok(report) => (report.exit_code, Some(report)),
        Err(f) => {
            eprintln!("error: {}", describe(&f.error));
            (f.code, None)
        }
    };
    if let (Some(mut report), Some(path)) = (report, &cli.common.report) {
        if cli.common.timing {
            report.wall_time_ms = Some(started.elapsed().as_millis() as u64);
        }
        if let Err(e) = fs::write(path, io::to_json(&report)) {
            eprintln!("error: writing report {}: {e}", path.display());
            return EXIT_FAILURE;
        }
    }
    code
}

/// The error and its causes, skipping causes whose text the previous
/// message already includes (library errors often embed their source).
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !out.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}

pub fn run(cli: &Cli, echo: &[String]) -> CmdResult {
    let common = &cli.common;
    match &cli.command {
        Command::Gen(a) => cmd_gen(common, a, echo),
        Command::Decompose(a) => cmd_decompose(common, a, echo),
        Command::Color(a) => cmd_color(common, a, echo),
        Command::Certify(a) => cmd_certify(common, a, echo),
        Command::Verify(a) => cmd_verify(common, a, echo),
        Command::Bench(a) => cmd_bench(common, a, echo),
        Command::Schema => {
            print!("{RUN_REPORT_SCHEMA}");
            std::process::exit(EXIT_OK);
        }
    }
}

/// Resolves `--profile` and applies the override flags.
pub fn load_profile(common: &Common) -> anyhow::Result<ConstantsProfile> {
    let spec = common.profile.trim();
    let mut profile = if let Some(p) = ConstantsProfile::by_name(spec) {
        p
    } else if spec.starts_with('{') {
        serde_json::from_str(spec).context("parsing inline profile JSON")?
    } else {
        let text = fs::read_to_string(spec).with_context(|| format!("reading profile file {spec}"))?;
        serde_json::from_str(&text).with_context(|| format!("parsing profile file {spec}"))?
    };
    if let Some(r) = common.max_rounds {
        profile.max_list_rounds = r;
        profile.max_sim_rounds = r;
    }
    if let Some(b) = common.budget {
        profile.exact_budget = b;
        profile.clique_budget = b;
    }
    Ok(profile)
}

pub fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    io::parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes to `path`, or to stdout when there is none.
fn emit(path: Option<&Path>, content: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Collects trace records and writes them as JSON lines.
struct TraceSink {
    path: Option<PathBuf>,
    lines: Vec<String>,
}

impl TraceSink {
    fn new(path: Option<&PathBuf>) -> TraceSink {
        TraceSink { path: path.cloned(), lines: Vec::new() }
    }

    fn enabled(&self) -> bool {
        self.path.is_some()
    }

    fn record(&mut self, program: &str, r: TraceRecord) {
        self.lines.push(
            json!({
                "program": program,
                "round": r.round,
                "vertex": r.vertex,
                "received": r.received,
                "sent": r.sent,
                "halted": r.halted,
            })
            .to_string(),
        );
    }

    fn finish(self) -> anyhow::Result<()> {
        let Some(path) = self.path else { return Ok(()) };
        let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        for line in &self.lines {
            writeln!(w, "{line}")?;
        }
        w.flush()?;
        Ok(())
    }
}

fn base_report(command: &str, common: &Common, echo: &[String], profile: Option<&ConstantsProfile>) -> RunReport {
    let mut r = RunReport::new(command, echo);
    r.seed = Some(common.seed);
    r.profile = profile.map(|p| p.name.clone());
    if common.verify != VerifyLevel::None {
        r.verification = Some(Vec::new());
    }
    r
}

fn push_verdict(report: &mut RunReport, v: Verdict) {
    if let Some(list) = report.verification.as_mut() {
        list.push(v);
    }
}

/// Refuses oracle verification on graphs that are too large for it.
fn oracle_allowed(common: &Common, g: &Graph) -> Result<bool, Failure> {
    if common.verify != VerifyLevel::Oracle {
        return Ok(false);
    }
    if g.n() > ORACLE_MAX_VERTICES && !common.force {
        return Err(Failure::new(
            EXIT_BUDGET,
            anyhow!("oracle verification is limited to {ORACLE_MAX_VERTICES} vertices (graph has {}); pass --force", g.n()),
        ));
    }
    Ok(true)
}

fn require<T: Copy>(value: Option<T>, flag: &str, kind: GenKind) -> anyhow::Result<T> {
    value.ok_or_else(|| anyhow!("gen {}: --{flag} is required", kind.to_possible_value().unwrap().get_name()))
}

fn cmd_gen(common: &Common, a: &GenArgs, echo: &[String]) -> CmdResult {
    let mut report = base_report("gen", common, echo, None);
    let lb_code = |e: LowerBoundError| match e {
        LowerBoundError::BadLayerCount(_) | LowerBoundError::NoLayers => Failure::new(EXIT_FAILURE, e),
        _ => Failure::new(EXIT_PRECONDITION, e),
    };
    let (g, sidecar) = match a.kind {
        GenKind::Chain => {
            let (delta, c, i) = (require(a.delta, "delta", a.kind)?, require(a.c, "c", a.kind)?, require(a.i, "i", a.kind)?);
            let lg = lowerbound::build_chain(delta, c, i).map_err(lb_code)?;
            let side = io::to_json(&LayerSidecar::chain(&lg));
            (lg.graph, Some(side))
        }
        GenKind::Hard => {
            let (delta, c, i) = (require(a.delta, "delta", a.kind)?, require(a.c, "c", a.kind)?, require(a.i, "i", a.kind)?);
            let h = lowerbound::build_hard_instance(delta, c, i).map_err(lb_code)?;
            let side = io::to_json(&LayerSidecar::hard(&h));
            (h.graph, Some(side))
        }
        GenKind::RandomRegularish => {
            let (n, delta) = (require(a.n, "n", a.kind)?, require(a.delta, "delta", a.kind)?);
            (generators::random_regularish(n, delta, common.seed), None)
        }
        GenKind::CliqueUnion => {
            let (count, size) = (require(a.count, "count", a.kind)?, require(a.size, "size", a.kind)?);
            (generators::clique_union(count, size), None)
        }
        GenKind::Clustered => {
            let (n, delta) = (require(a.n, "n", a.kind)?, require(a.delta, "delta", a.kind)?);
            (generators::clustered(n, delta, a.drop_permille, common.seed), None)
        }
        GenKind::TriangleFree => {
            let (n, delta) = (require(a.n, "n", a.kind)?, require(a.delta, "delta", a.kind)?);
            if n % 2 == 1 || n < 2 * delta {
                return Err(Failure::new(EXIT_FAILURE, anyhow!("gen triangle-free needs an even n ≥ 2Δ")));
            }
            (generators::triangle_free_hubs(n, delta, common.seed), None)
        }
        GenKind::ReducerHost => {
            let (n, delta, c, count) =
                (require(a.n, "n", a.kind)?, require(a.delta, "delta", a.kind)?, require(a.c, "c", a.kind)?, require(a.count, "count", a.kind)?);
            let kd = localcolor_core::k_delta(delta as u64) as usize;
            if c < 3 || c > delta || c + kd <= delta || n <= delta {
                return Err(Failure::new(EXIT_PRECONDITION, anyhow!("gen reducer-host needs 3 ≤ c ≤ Δ, c > Δ − k_Δ and n > Δ")));
            }
            let h = generators::reducer_host(n, delta, c, count, common.seed);
            let side = io::to_json(&json!({ "outer": h.outer, "c": c, "reducers": h.reducers }));
            (h.graph, Some(side))
        }
    };
    let text = match a.format {
        GraphFormat::Edges => io::write_edge_list(&g),
        GraphFormat::Json => io::write_graph_json(&g),
    };
    emit(a.output.as_deref(), &text)?;
    if let (Some(path), Some(side)) = (&a.sidecar, sidecar) {
        emit(Some(path), &side)?;
    }
    report.outcome = "generated".into();
    report.details = json!({ "kind": a.kind.to_possible_value().unwrap().get_name(), "n": g.n(), "m": g.m(), "delta": g.delta() });
    if common.verify != VerifyLevel::None {
        let max = a.delta.unwrap_or(g.delta());
        push_verdict(&mut report, Verdict::new("max-degree", g.delta() <= max, Some(format!("Δ = {}", g.delta()))));
    }
    TraceSink::new(common.trace.as_ref()).finish()?;
    Ok(report)
}

fn decomposition_verdicts(report: &mut RunReport, g: &Graph, dec: &DenseDecomposition) -> bool {
    let verdict = decomposition::verify_decomposition(g, dec);
    let mut all = true;
    for (name, check) in verdict.checks() {
        all &= check.pass;
        push_verdict(report, Verdict::new(name, check.pass, check.witness.as_ref().map(|w| format!("{w:?}"))));
    }
    all
}

/// Every id in the decomposition names a vertex of `g`.
fn check_ids(g: &Graph, dec: &DenseDecomposition) -> anyhow::Result<()> {
    for v in dec.sparse.iter().chain(dec.components.iter().flat_map(|c| c.iter())) {
        g.check(v).map_err(|e| anyhow!("decomposition: {e}"))?;
    }
    Ok(())
}

fn cmd_decompose(common: &Common, a: &DecomposeArgs, echo: &[String]) -> CmdResult {
    let profile = load_profile(common)?;
    let g = read_graph(&a.input)?;
    let mut report = base_report("decompose", common, echo, Some(&profile));
    let delta = g.delta() as u64;
    let d = match (a.d, a.k) {
        (Some(d), _) => d,
        (None, Some(k)) => profile.density.times(k),
        (None, None) => Frac::new(delta.max(1), 100),
    };
    if decomposition::exceeds_max_density(d, g.delta()) {
        let breach = Breach::new("decomposition", format!("d = {d} exceeds Δ/100"));
        if !common.force {
            return Err(Failure::new(EXIT_PRECONDITION, anyhow!("{}; pass --force to run anyway", breach.detail)));
        }
        report.breaches.push(breach);
    }
    let mut sink = TraceSink::new(common.trace.as_ref());
    let result = if sink.enabled() {
        decomposition::build_decomposition_traced(&g, d, &mut |r| sink.record("decomposition", r))
    } else {
        decomposition::build_decomposition_unchecked(&g, d)
    };
    let (dec, stats) = result.map_err(|e| {
        let code = match &e {
            DecompositionError::Sim(s) => sim_code(s),
            DecompositionError::DensityTooLarge { .. } => EXIT_PRECONDITION,
        };
        Failure::new(code, e)
    })?;
    sink.finish()?;
    emit(a.output.as_deref(), &io::to_json(&dec))?;
    report.stats = Some(stats);
    report.outcome = "decomposed".into();
    report.details = json!({
        "d": d,
        "delta": g.delta(),
        "sparse": dec.sparse.len(),
        "components": dec.components.iter().map(|c| c.len()).collect::<Vec<_>>(),
    });
    if common.verify != VerifyLevel::None {
        decomposition_verdicts(&mut report, &g, &dec);
    }
    Ok(report)
}

fn cmd_color(common: &Common, a: &ColorArgs, echo: &[String]) -> CmdResult {
    let profile = load_profile(common)?;
    let g = read_graph(&a.input)?;
    let oracle = oracle_allowed(common, &g)?;
    let mut report = base_report("color", common, echo, Some(&profile));
    let mut sink = TraceSink::new(common.trace.as_ref());
    let outcome = if sink.enabled() {
        pipeline::theorem1_run_traced(&g, a.k, &profile, common.seed, Some(&mut |r| sink.record("decomposition", r)))
    } else {
        pipeline::theorem1_run(&g, a.k, &profile, common.seed)
    };
    let outcome = outcome.map_err(|e| Failure::new(pipeline_code(&e), e))?;
    sink.finish()?;
    match outcome {
        Theorem1Outcome::Clique { vertex, clique, stats } => {
            let threshold = g.delta() - a.k as usize;
            let cert = CertificateJson::Clique { vertex, clique: clique.clone(), threshold };
            emit(a.certificate.as_deref(), &io::to_json(&cert))?;
            report.outcome = "clique-certificate".into();
            report.exit_code = EXIT_CERTIFICATE;
            report.stats = Some(stats);
            report.details = json!({ "vertex": vertex, "clique_size": clique.len(), "threshold": threshold });
            if common.verify != VerifyLevel::None {
                push_verdict(&mut report, Verdict::new("clique", is_clique(&g, &clique) && clique.len() > threshold, None));
            }
            if oracle {
                let best = clique::maximum_clique(&g);
                push_verdict(&mut report, Verdict::new("oracle-clique-number", best.len() >= clique.len(), Some(format!("ω = {}", best.len()))));
            }
        }
        Theorem1Outcome::Coloring { coloring, decomposition: dec, report: pr } => {
            emit(a.output.as_deref(), &io::write_coloring(&coloring))?;
            if let Some(path) = &a.decomposition {
                emit(Some(path), &io::to_json(&dec))?;
            }
            report.outcome = "coloring".into();
            report.stats = Some(pr.stats.clone());
            report.palette = Some(pr.palette as u64);
            report.colors_used = Some(pr.colors_used);
            report.breaches = pr.breaches.clone();
            if common.verify != VerifyLevel::None {
                let conflict = first_conflict(&g, &coloring);
                push_verdict(&mut report, Verdict::new("total", coloring.is_total(), None));
                push_verdict(&mut report, Verdict::new("proper", conflict.is_none(), conflict.map(|(u, v)| format!("edge ({u}, {v})"))));
                push_verdict(
                    &mut report,
                    Verdict::new("palette", pr.max_color <= pr.palette, Some(format!("max color {} ≤ {}", pr.max_color, pr.palette))),
                );
            }
            if oracle {
                let independent = g.edges().all(|(u, v)| coloring.get(u).is_some() && coloring.get(u) != coloring.get(v));
                push_verdict(&mut report, Verdict::new("oracle-proper", independent, None));
                let chi = exact::chromatic_number(&g, profile.exact_budget).map_err(|e| Failure::new(EXIT_BUDGET, e))?;
                push_verdict(
                    &mut report,
                    Verdict::new("oracle-chromatic-number", chi <= pr.colors_used, Some(format!("χ = {chi}, used {}", pr.colors_used))),
                );
            }
            report.details = serde_json::to_value(&pr).map_err(anyhow::Error::from)?;
        }
    }
    if !report.verified() {
        report.exit_code = EXIT_FAILURE;
    }
    Ok(report)
}

fn cmd_certify(common: &Common, a: &CertifyArgs, echo: &[String]) -> CmdResult {
    let profile = load_profile(common)?;
    let g = read_graph(&a.input)?;
    let oracle = oracle_allowed(common, &g)?;
    let mut report = base_report("certify", common, echo, Some(&profile));
    let result = reducers::certify_non_colorable(&g, a.c, profile.exact_budget).map_err(|e| match e {
        CertifyError::Budget { .. } => Failure::new(EXIT_BUDGET, e),
        CertifyError::Unconfirmed(_) => Failure::new(EXIT_FAILURE, e),
    })?;
    report.details = json!({
        "c": a.c,
        "delta": result.delta,
        "k_delta": result.k_delta,
        "c_above_threshold": result.c_above_threshold,
        "neighborhoods_checked": result.neighborhoods_checked,
        "certificate_vertex": result.certificate.as_ref().map(|c| c.vertex),
    });
    TraceSink::new(common.trace.as_ref()).finish()?;
    match &result.certificate {
        Some(cert) => {
            emit(a.output.as_deref(), &io::to_json(&CertificateJson::from_certificate(cert)))?;
            report.outcome = "certificate".into();
            report.exit_code = EXIT_CERTIFICATE;
            if common.verify != VerifyLevel::None {
                let ok = !exact::is_colorable(&cert.subgraph.graph, a.c, profile.exact_budget).map_err(|e| Failure::new(EXIT_BUDGET, e))?;
                push_verdict(&mut report, Verdict::new("neighborhood-not-colorable", ok, None));
            }
            if oracle {
                let ok = !exact::brute_force_colorable(&cert.subgraph.graph, a.c, profile.exact_budget)
                    .map_err(|e| Failure::new(EXIT_BUDGET, e))?;
                push_verdict(&mut report, Verdict::new("oracle-neighborhood-not-colorable", ok, None));
            }
        }
        None => {
            report.outcome = "no-certificate".into();
            if oracle {
                let ok = exact::is_colorable(&g, a.c, profile.exact_budget).map_err(|e| Failure::new(EXIT_BUDGET, e))?;
                let detail = if result.c_above_threshold { "c > Δ − k_Δ" } else { "c ≤ Δ − k_Δ: no guarantee expected" };
                push_verdict(&mut report, Verdict::new("oracle-colorable", ok || !result.c_above_threshold, Some(format!("{detail}; c-colorable: {ok}"))));
            }
        }
    }
    if !report.verified() {
        report.exit_code = EXIT_FAILURE;
    }
    Ok(report)
}

fn cmd_verify(common: &Common, a: &VerifyArgs, echo: &[String]) -> CmdResult {
    let profile = load_profile(common)?;
    let g = read_graph(&a.input)?;
    let oracle = oracle_allowed(common, &g)?;
    let mut report = base_report("verify", common, echo, Some(&profile));
    // Verification is the point of this command, so verdicts are always kept.
    let mut verdicts = Vec::new();
    if a.coloring.is_none() && a.decomposition.is_none() && a.certificate.is_none() {
        return Err(anyhow!("nothing to verify: pass --coloring, --decomposition or --certificate").into());
    }
    let mut details = serde_json::Map::new();
    if let Some(path) = &a.coloring {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let coloring = io::parse_coloring(&text, g.n())?;
        let uncolored: Vec<_> = coloring.uncolored().collect();
        verdicts.push(Verdict::new("total", uncolored.is_empty(), uncolored.first().map(|v| format!("vertex {v} is uncolored"))));
        let conflict = first_conflict(&g, &coloring);
        verdicts.push(Verdict::new("proper", conflict.is_none(), conflict.map(|(u, v)| format!("edge ({u}, {v}) is monochromatic"))));
        if let Some((u, v)) = conflict {
            details.insert("failing_edge".into(), json!([u, v]));
        }
        if let Some(p) = a.palette {
            let max = coloring.max_color().unwrap_or(0);
            verdicts.push(Verdict::new("palette", max <= p, Some(format!("max color {max}, palette {p}"))));
        }
        details.insert("colors_used".into(), json!(coloring.distinct_colors()));
        report.colors_used = Some(coloring.distinct_colors());
    }
    if let Some(path) = &a.decomposition {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let dec = io::parse_decomposition(&text)?;
        check_ids(&g, &dec)?;
        let mut sub = RunReport::new("verify", &[]);
        sub.verification = Some(Vec::new());
        decomposition_verdicts(&mut sub, &g, &dec);
        verdicts.extend(sub.verification.unwrap_or_default());
    }
    if let Some(path) = &a.certificate {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cert: CertificateJson = serde_json::from_str(&text).context("parsing certificate JSON")?;
        let structural = cert.check_against(&g);
        verdicts.push(Verdict::new("certificate-matches-graph", structural.is_ok(), structural.err().map(|e| e.to_string())));
        if let (Some(sub), CertificateJson::Neighborhood { c, .. }) = (cert.subgraph(&g), &cert) {
            let colorable = exact::is_colorable(&sub, *c, profile.exact_budget).map_err(|e| Failure::new(EXIT_BUDGET, e))?;
            verdicts.push(Verdict::new("neighborhood-not-colorable", !colorable, None));
            if oracle {
                let brute = exact::brute_force_colorable(&sub, *c, profile.exact_budget).map_err(|e| Failure::new(EXIT_BUDGET, e))?;
                verdicts.push(Verdict::new("oracle-neighborhood-not-colorable", !brute, None));
            }
        }
    }
    for v in verdicts.iter().filter(|v| !v.pass) {
        eprintln!("verify: {} failed{}", v.check, v.detail.as_ref().map(|d| format!(": {d}")).unwrap_or_default());
    }
    report.verification = Some(verdicts);
    report.details = serde_json::Value::Object(details);
    let pass = report.verified();
    report.outcome = if pass { "pass" } else { "fail" }.into();
    report.exit_code = if pass { EXIT_OK } else { EXIT_FAILURE };
    Ok(report)
}

fn cmd_bench(common: &Common, a: &BenchArgs, echo: &[String]) -> CmdResult {
    let profile = load_profile(common)?;
    let mut report = base_report("bench", common, echo, Some(&profile));
    if a.family == BenchFamily::TriangleFree && (a.n % 2 == 1 || a.n < 2 * a.delta) {
        return Err(anyhow!("the triangle-free family needs an even n ≥ 2Δ").into());
    }
    let mut lines = String::new();
    let mut stats = RoundStats::default();
    let (mut colored, mut cliques, mut failed, mut proper) = (0u64, 0u64, 0u64, 0u64);
    let mut max_colors = 0usize;
    for run in 0..a.runs {
        let seed = localcolor_core::rng::child_seed(common.seed, run);
        let g = match a.family {
            BenchFamily::TriangleFree => generators::triangle_free_hubs(a.n, a.delta, seed),
            BenchFamily::RandomRegularish => generators::random_regularish(a.n, a.delta, seed),
            BenchFamily::Clustered => generators::clustered(a.n, a.delta, 20, seed),
        };
        let started = Instant::now();
        let outcome = pipeline::theorem1_run(&g, a.k, &profile, seed);
        let elapsed = started.elapsed().as_millis() as u64;
        let mut line = match &outcome {
            Ok(Theorem1Outcome::Coloring { coloring, report: pr, .. }) => {
                colored += 1;
                let ok = coloring.is_total() && first_conflict(&g, coloring).is_none() && pr.max_color <= pr.palette;
                proper += u64::from(ok);
                max_colors = max_colors.max(pr.colors_used);
                stats.merge(&pr.stats);
                json!({
                    "run": run, "seed": seed, "n": g.n(), "delta": g.delta(), "outcome": "coloring",
                    "proper": ok, "palette": pr.palette, "colors_used": pr.colors_used,
                    "rounds": pr.stats.total(), "lll_phases": pr.lll_phases, "breaches": pr.breaches.len(),
                })
            }
            Ok(Theorem1Outcome::Clique { clique, stats: s, .. }) => {
                cliques += 1;
                stats.merge(s);
                json!({ "run": run, "seed": seed, "n": g.n(), "delta": g.delta(), "outcome": "clique", "clique_size": clique.len() })
            }
            Err(e) => {
                failed += 1;
                json!({ "run": run, "seed": seed, "n": g.n(), "delta": g.delta(), "outcome": "error", "error": e.to_string() })
            }
        };
        if common.timing {
            line["wall_time_ms"] = json!(elapsed);
        }
        lines.push_str(&line.to_string());
        lines.push('\n');
    }
    emit(a.output.as_deref(), &lines)?;
    TraceSink::new(common.trace.as_ref()).finish()?;
    report.stats = Some(stats);
    report.colors_used = Some(max_colors);
    report.outcome = "benchmarked".into();
    report.details = json!({
        "family": a.family.to_possible_value().unwrap().get_name(),
        "runs": a.runs, "colorings": colored, "cliques": cliques, "errors": failed, "proper": proper,
    });
    if common.verify != VerifyLevel::None {
        push_verdict(&mut report, Verdict::new("all-colorings-proper", proper == colored, None));
    }
    if failed > 0 || !report.verified() {
        report.exit_code = EXIT_FAILURE;
    }
    Ok(report)
}
