//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cells::{build_chain_complex, CellRecord};
use crate::error::{Error, Result};
use crate::homology::{homology_of, HomologyGroup};
use crate::lie::{cartan_matrix, RootType, WeylGroup, DEFAULT_ORDER_CAP, ORDER_CAP_ENV};
use crate::morse::principal::format_polynomial;
use crate::morse::{
    betti_one_routes, conjectured_betti, critical_point, morse_complex, poincare_polynomial, principal_graph,
    toda_graph_dot, BettiOneRoutes, ConjecturedBetti, CriticalPoint, IncidenceConfig, SigmaReading, SignRule,
};
use crate::signs::SignVector;
use crate::toda::{integrate, summarize, IntegrationOptions, TodaState, DEFAULT_THRESHOLD};
use crate::SCHEMA_VERSION;

/// Largest Morse-complex rank allowed without `--allow-unverified`.
pub const MORSE_RANK_GATE: usize = 3;

#[derive(Debug, Parser)]
#[command(name = "toda", version, about = "Topology of compactified isospectral Toda manifolds")]
pub struct Cli {
    /// Upper bound on the Weyl group order.
    #[arg(long, global = true, env = ORDER_CAP_ENV, default_value_t = DEFAULT_ORDER_CAP)]
    pub max_weyl_order: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate cells, print counts and the Euler characteristic.
    Cells(CellsArgs),
    /// Integral homology of the cellular complex.
    Homology(TypeArgs),
    /// Morse complex, principal graph and closed-form counts.
    Morse(MorseArgs),
    /// Integrate the Toda flow for a sign sector.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TypeArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub root_type: RootType,
    #[arg(long)]
    pub rank: usize,
    /// Where to write the report (stdout summary is always printed).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CellsArgs {
    #[command(flatten)]
    pub target: TypeArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Directory for boundary matrices in sparse triplet form.
    #[arg(long)]
    pub boundary_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MorseArgs {
    #[command(flatten)]
    pub target: TypeArgs,
    /// Print the Poincaré polynomial of the principal graph.
    #[arg(long)]
    pub poincare: bool,
    /// Print the first Betti number.
    #[arg(long)]
    pub betti1: bool,
    /// Print the conjectured Betti number b_k (repeatable).
    #[arg(long = "betti")]
    pub betti: Vec<usize>,
    /// Include the principal graph.
    #[arg(long)]
    pub principal: bool,
    /// Build the Morse complex even when closed-form flags are present.
    #[arg(long)]
    pub complex: bool,
    #[arg(long, value_parser = parse_sigma, default_value = "negative-after")]
    pub sigma: SigmaReading,
    #[arg(long, value_parser = parse_sign_rule, default_value = "oriented")]
    pub sign_rule: SignRule,
    /// Allow Morse complexes outside A_1..A_3.
    #[arg(long)]
    pub allow_unverified: bool,
    /// Write the Morse-Smale graph in DOT format.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Write the Toda graph in DOT format.
    #[arg(long)]
    pub toda_dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long = "type", value_parser = parse_type, default_value = "A")]
    pub root_type: RootType,
    #[arg(long)]
    pub rank: usize,
    /// Sign sector, e.g. "+-".
    #[arg(long, allow_hyphen_values = true)]
    pub signs: String,
    /// Initial a_i, comma separated (default all zero).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Vec<f64>,
    /// Initial |b_i|, comma separated (default all one).
    #[arg(long, value_delimiter = ',')]
    pub b_abs: Vec<f64>,
    #[arg(long, default_value_t = 5.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Trajectory CSV path.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// JSON summary path.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

fn parse_type(s: &str) -> std::result::Result<RootType, String> {
    s.parse::<RootType>().map_err(|_| format!("unknown root type {s:?} (expected one of A, B, C, D, E, F, G)"))
}

fn parse_sigma(s: &str) -> std::result::Result<SigmaReading, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_sign_rule(s: &str) -> std::result::Result<SignRule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure classes, mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad configuration (exit 2).
    Config(Error),
    /// Computation failed or an invariant check did not pass (exit 1).
    Check(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Check(_) => 1,
        }
    }

    pub fn error(&self) -> &Error {
        match self {
            Failure::Config(e) | Failure::Check(e) => e,
        }
    }
}

fn config<T>(r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(Failure::Config)
}

fn check<T>(r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(Failure::Check)
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.error());
            f.exit_code()
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Cells(a) => cmd_cells(cli.max_weyl_order, a, out),
        Command::Homology(a) => cmd_homology(cli.max_weyl_order, a, out),
        Command::Morse(a) => cmd_morse(cli.max_weyl_order, a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
    }
}

fn group_for(t: &TypeArgs, cap: usize) -> std::result::Result<WeylGroup, Failure> {
    let c = config(cartan_matrix(t.root_type, t.rank))?;
    config(WeylGroup::with_cap(&c, cap))
}

fn write_file(path: &Path, bytes: &[u8]) -> CmdResult {
    check(fs::write(path, bytes).map_err(Error::from))
}

fn emit(out: &mut dyn Write, text: &str) -> CmdResult {
    check(out.write_all(text.as_bytes()).map_err(Error::from))
}

fn to_json<T: Serialize>(v: &T) -> std::result::Result<String, Failure> {
    let mut s = check(serde_json::to_string_pretty(v).map_err(Error::from))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct CellsReport<'a> {
    schema_version: u32,
    #[serde(rename = "type")]
    root_type: String,
    rank: usize,
    weyl_order: usize,
    counts: Vec<usize>,
    euler_characteristic: i64,
    cells: &'a [CellRecord],
}

pub fn cmd_cells(cap: usize, args: &CellsArgs, out: &mut dyn Write) -> CmdResult {
    let w = group_for(&args.target, cap)?;
    let cx = check(build_chain_complex(&w))?;
    check(cx.chain_complex().check())?;
    let counts = cx.counts();
    let chi = cx.euler_characteristic();
    let name = w.cartan().name();
    emit(out, &format!("{name}: |W| = {}\n", w.order()))?;
    for (k, n) in counts.iter().enumerate() {
        emit(out, &format!("degree {k}: {n} cells\n"))?;
    }
    emit(out, &format!("euler characteristic: {chi}\n"))?;
    if let Some(path) = &args.target.output {
        let bytes = match args.format {
            Format::Csv => {
                let mut buf = Vec::new();
                check(cx.write_csv(&w, &mut buf))?;
                buf
            }
            Format::Json => {
                let records = cx.records(&w);
                let report = CellsReport {
                    schema_version: SCHEMA_VERSION,
                    root_type: args.target.root_type.to_string(),
                    rank: w.rank(),
                    weyl_order: w.order(),
                    counts: counts.clone(),
                    euler_characteristic: chi,
                    cells: &records,
                };
                to_json(&report)?.into_bytes()
            }
        };
        write_file(path, &bytes)?;
    }
    if let Some(dir) = &args.boundary_dir {
        check(fs::create_dir_all(dir).map_err(Error::from))?;
        for k in 1..=w.rank() {
            let m = cx.chain_complex().boundary(k).expect("boundary in range");
            write_file(&dir.join(format!("boundary_{k}.txt")), m.to_triplet_text().as_bytes())?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct HomologyReport {
    schema_version: u32,
    #[serde(rename = "type")]
    root_type: String,
    rank: usize,
    counts: Vec<usize>,
    euler_characteristic: i64,
    homology: Vec<HomologyGroup>,
}

pub fn cmd_homology(cap: usize, args: &TypeArgs, out: &mut dyn Write) -> CmdResult {
    let w = group_for(args, cap)?;
    let cx = check(build_chain_complex(&w))?;
    let h = check(homology_of(cx.chain_complex()))?;
    let alt: i64 = h.iter().map(|g| if g.degree % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) }).sum();
    if alt != cx.euler_characteristic() {
        return Err(Failure::Check(Error::Unsupported("Euler characteristic mismatch".into())));
    }
    emit(out, &format!("{}:\n", w.cartan().name()))?;
    for g in &h {
        emit(out, &format!("H_{} = {g}\n", g.degree))?;
    }
    let report = HomologyReport {
        schema_version: SCHEMA_VERSION,
        root_type: args.root_type.to_string(),
        rank: args.rank,
        counts: cx.counts(),
        euler_characteristic: cx.euler_characteristic(),
        homology: h,
    };
    let json = to_json(&report)?;
    match &args.output {
        Some(p) => write_file(p, json.as_bytes()),
        None => emit(out, &json),
    }
}

#[derive(Serialize)]
struct EdgeRecord {
    source: Vec<u8>,
    target: Vec<u8>,
    source_label: String,
    target_label: String,
    incidence: i64,
}

#[derive(Serialize)]
struct MorseSection {
    config: IncidenceConfig,
    critical_points: Vec<CriticalPoint>,
    edges: Vec<EdgeRecord>,
    homology: Vec<HomologyGroup>,
}

#[derive(Serialize)]
struct PoincareSection {
    coefficients: Vec<i128>,
    polynomial: String,
}

#[derive(Serialize)]
struct PrincipalSection {
    components: Vec<PrincipalComponentRecord>,
    cell_counts: Vec<u128>,
}

#[derive(Serialize)]
struct PrincipalComponentRecord {
    seed: (usize, usize),
    dimension: usize,
    labels: Vec<String>,
}

#[derive(Serialize)]
struct MorseReport {
    schema_version: u32,
    #[serde(rename = "type")]
    root_type: String,
    rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    morse: Option<MorseSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    poincare: Option<PoincareSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    betti_one: Option<BettiOneRoutes>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    conjectured_betti: Vec<ConjecturedBetti>,
    #[serde(skip_serializing_if = "Option::is_none")]
    principal_graph: Option<PrincipalSection>,
}

pub fn cmd_morse(cap: usize, args: &MorseArgs, out: &mut dyn Write) -> CmdResult {
    let t = &args.target;
    let closed_form = args.poincare || args.betti1 || !args.betti.is_empty() || args.principal;
    let build_complex = args.complex || !closed_form || args.dot.is_some();
    if closed_form && t.root_type != RootType::A {
        return Err(Failure::Config(Error::Unsupported("closed-form counts are only available for type A".into())));
    }
    config(cartan_matrix(t.root_type, t.rank))?;
    let mut report = MorseReport {
        schema_version: SCHEMA_VERSION,
        root_type: t.root_type.to_string(),
        rank: t.rank,
        morse: None,
        poincare: None,
        betti_one: None,
        conjectured_betti: Vec::new(),
        principal_graph: None,
    };
    if build_complex {
        if !args.allow_unverified && (t.root_type != RootType::A || t.rank > MORSE_RANK_GATE) {
            return Err(Failure::Config(Error::Unsupported(format!(
                "Morse complex for {}{} is only validated for A_1..A_{MORSE_RANK_GATE}; pass --allow-unverified",
                t.root_type, t.rank
            ))));
        }
        let w = group_for(t, cap)?;
        let cfg = IncidenceConfig { sigma: args.sigma, sign_rule: args.sign_rule };
        let m = check(morse_complex(&w, cfg))?;
        let h = check(homology_of(m.chain_complex()))?;
        emit(out, &format!("{}: Morse complex ranks {:?}\n", w.cartan().name(), m.chain_complex().ranks()))?;
        for g in &h {
            emit(out, &format!("H_{} = {g}\n", g.degree))?;
        }
        if let Some(p) = &args.dot {
            write_file(p, m.to_dot(&w).as_bytes())?;
        }
        let edges = m
            .edges()
            .iter()
            .map(|e| EdgeRecord {
                source: w.word(e.source).to_vec(),
                target: w.word(e.target).to_vec(),
                source_label: crate::morse::label(&w, e.source),
                target_label: crate::morse::label(&w, e.target),
                incidence: e.incidence,
            })
            .collect();
        report.morse = Some(MorseSection {
            config: cfg,
            critical_points: w.ids().map(|a| critical_point(&w, a)).collect(),
            edges,
            homology: h,
        });
    }
    if let Some(p) = &args.toda_dot {
        let w = group_for(t, cap)?;
        write_file(p, toda_graph_dot(&w).as_bytes())?;
    }
    if args.poincare {
        let c = config(poincare_polynomial(t.rank))?;
        let s = format_polynomial(&c);
        emit(out, &format!("poincare polynomial: {s}\n"))?;
        report.poincare = Some(PoincareSection { coefficients: c, polynomial: s });
    }
    if args.betti1 {
        let r = config(betti_one_routes(t.rank).or_else(|_| {
            // the boundary-rank route needs the explicit graph; fall back to the closed forms
            let b = crate::morse::betti_one(t.rank)? as i128;
            Ok::<_, Error>(BettiOneRoutes {
                closed_form: b,
                poincare_at_minus_one: b,
                cycles_minus_boundaries: b,
                boundary_rank_closed_form: (1..t.rank).map(|n| (t.rank - n) as i128 * ((1i128 << n) - 1)).sum(),
            })
        }))?;
        if r.closed_form != r.poincare_at_minus_one || r.closed_form != r.cycles_minus_boundaries {
            return Err(Failure::Check(Error::Unsupported("b_1 routes disagree".into())));
        }
        emit(out, &format!("b1 = {}\n", r.closed_form))?;
        report.betti_one = Some(r);
    }
    for &k in &args.betti {
        let b = config(conjectured_betti(t.rank, k))?;
        emit(out, &format!("b{k} = {} (conjecture)\n", b.value))?;
        report.conjectured_betti.push(b);
    }
    if args.principal {
        let g = config(principal_graph(t.rank))?;
        emit(out, &format!("principal graph: {} components\n", g.components.len()))?;
        report.principal_graph = Some(PrincipalSection {
            cell_counts: g.cell_counts(),
            components: g
                .components
                .iter()
                .map(|c| PrincipalComponentRecord {
                    seed: c.seed,
                    dimension: c.dimension,
                    labels: c.faces.iter().map(|f| f.label()).collect(),
                })
                .collect(),
        });
    }
    if let Some(p) = &t.output {
        write_file(p, to_json(&report)?.as_bytes())?;
    }
    Ok(())
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> CmdResult {
    if args.root_type != RootType::A {
        return Err(Failure::Config(Error::Unsupported("simulation is implemented for type A only".into())));
    }
    config(cartan_matrix(args.root_type, args.rank))?;
    let eps: SignVector = config(args.signs.parse())?;
    if eps.rank() != args.rank {
        return Err(Failure::Config(Error::RankMismatch { expected: args.rank, actual: eps.rank() }));
    }
    let mut state = TodaState::from_signs(eps);
    if !args.a.is_empty() {
        if args.a.len() != args.rank {
            return Err(Failure::Config(Error::RankMismatch { expected: args.rank, actual: args.a.len() }));
        }
        state.a = args.a.clone();
    }
    if !args.b_abs.is_empty() {
        if args.b_abs.len() != args.rank || args.b_abs.iter().any(|&x| x.is_nan() || x <= 0.0) {
            return Err(Failure::Config(Error::Integration("--b-abs needs one positive value per root".into())));
        }
        for (b, m) in state.b.iter_mut().zip(&args.b_abs) {
            *b *= m;
        }
    }
    let opts = IntegrationOptions { t_max: args.tmax, dt: args.dt, threshold: args.threshold };
    let tr = config(integrate(&state, opts))?;
    let summary = summarize(&tr, opts);
    emit(out, &format!("A{} signs {}: {} steps to t = {:.6}\n", args.rank, eps, summary.steps, summary.final_time))?;
    match summary.blowup_time {
        Some(t) => emit(out, &format!("blow-up at t = {t:.6}\n"))?,
        None => emit(out, &format!("max invariant drift: {:.3e}\n", summary.max_invariant_drift))?,
    }
    if let Some(p) = &args.output {
        let mut buf = Vec::new();
        check(tr.write_csv(&mut buf))?;
        write_file(p, &buf)?;
    }
    let json = to_json(&summary)?;
    match &args.summary {
        Some(p) => write_file(p, json.as_bytes())?,
        None => emit(out, &json)?,
    }
    if !summary.signs_preserved {
        return Err(Failure::Check(Error::Integration("a coordinate b_i changed sign".into())));
    }
    Ok(())
}
