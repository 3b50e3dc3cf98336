//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 resource gate.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::construction::{build_partition, build_sequence_set, FHSequenceSet, LazySequenceSet};
use crate::correlation::{correlation_profile, CorrelationProfile, DEFAULT_BRUTE_FORCE_GATE};
use crate::cyclotomy::{
    build_params, build_tables, verify_structure_lemmas, CellId, CyclotomicTables, LemmaReport,
    Params, DENSE_TABLE_LIMIT,
};
use crate::error::Error;
use crate::export;
use crate::modmath;
use crate::reference::{self, ListingCheck};
use crate::theory::{
    optimality_report, verify_theorem1, verify_theorem2, LabelMapping, OptimalityReport,
    Theorem2Report, VerificationReport,
};

/// Parameter pairs exercised by `verify --sweep`: `e` in {2, 4, 6} with both
/// parities of `|f1 - f2|`.
pub const SWEEP: [(u64, u64); 6] = [(3, 5), (3, 7), (5, 17), (5, 13), (7, 13), (7, 19)];

#[derive(Debug, Parser)]
#[command(
    name = "fhseq",
    version,
    about = "Cyclotomic frequency-hopping sequence sets over Z_pq"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct the sequence set and write it out.
    Generate(CommonArgs),
    /// Compute every Hamming correlation table and the aggregate statistics.
    Analyze(AnalyzeArgs),
    /// Check the structural lemmas and the closed-form correlation values.
    Verify(VerifyArgs),
    /// Evaluate the Lempel-Greenberger, Peng-Fan and average correlation bounds.
    Bounds(AnalyzeArgs),
    /// Dump the cyclotomic classes and the cyclotomic number matrix.
    Cyclotomy(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Common primitive root to use instead of the smallest one.
    #[arg(long)]
    pub g: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Largest L analyzed by brute force.
    #[arg(long, env = "FHSEQ_GATE", default_value_t = DEFAULT_BRUTE_FORCE_GATE)]
    pub gate: u64,
    /// Ignore the brute-force gate.
    #[arg(long)]
    pub force: bool,
    /// Worker threads (defaults to the number of cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Read the sequence set from a JSON file written by `generate`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Verify every built-in sweep pair instead of a single (p, q).
    #[arg(long)]
    pub sweep: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Digits,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Generate,
    Analyze,
    Verify,
    Bounds,
    Cyclotomy,
}

/// Everything a command needs, resolved from the command line.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub g_override: Option<u64>,
    pub output_format: Option<OutputFormat>,
    pub output_path: Option<PathBuf>,
    pub brute_force_gate: u64,
    pub force: bool,
    pub parallelism: Option<usize>,
    pub input: Option<PathBuf>,
    pub sweep: bool,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> RunConfig {
        let (command, common, input, sweep) = match cli.command {
            Command::Generate(c) => (CommandKind::Generate, c, None, false),
            Command::Analyze(a) => (CommandKind::Analyze, a.common, a.input, false),
            Command::Verify(v) => (CommandKind::Verify, v.common, None, v.sweep),
            Command::Bounds(a) => (CommandKind::Bounds, a.common, a.input, false),
            Command::Cyclotomy(c) => (CommandKind::Cyclotomy, c, None, false),
        };
        RunConfig {
            command,
            p: common.p,
            q: common.q,
            g_override: common.g,
            output_format: common.format,
            output_path: common.output,
            brute_force_gate: common.gate,
            force: common.force,
            parallelism: common.jobs,
            input,
            sweep,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    VerificationFailed,
    InvalidInput,
    ResourceGate,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::VerificationFailed => 1,
            ExitStatus::InvalidInput => 2,
            ExitStatus::ResourceGate => 3,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub status: ExitStatus,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError {
            status: ExitStatus::InvalidInput,
            message: message.into(),
        }
    }

    fn gate(message: impl Into<String>) -> Self {
        CliError {
            status: ExitStatus::ResourceGate,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::TableTooLarge { .. } => ExitStatus::ResourceGate,
            _ => ExitStatus::InvalidInput,
        };
        CliError {
            status,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::invalid(format!("i/o error: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<ExitStatus> {
    run_config(&RunConfig::from_cli(cli), out)
}

pub fn run_config(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<ExitStatus> {
    if let Some(n) = cfg.parallelism {
        if n == 0 {
            return Err(CliError::invalid("--jobs must be at least 1"));
        }
        // Only the first configuration in a process takes effect.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match cfg.command {
        CommandKind::Generate => cmd_generate(cfg, out),
        CommandKind::Analyze => cmd_analyze(cfg, out),
        CommandKind::Verify => cmd_verify(cfg, out),
        CommandKind::Bounds => cmd_bounds(cfg, out),
        CommandKind::Cyclotomy => cmd_cyclotomy(cfg, out),
    }
}

fn emit(cfg: &RunConfig, out: &mut dyn Write, text: &str) -> CliResult<()> {
    match &cfg.output_path {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn require_pq(cfg: &RunConfig) -> CliResult<(u64, u64)> {
    let (p, q) = cfg
        .p
        .zip(cfg.q)
        .ok_or_else(|| CliError::invalid("both --p and --q are required"))?;
    modmath::check_odd_prime_pair(p, q)
        .map_err(|e| CliError::invalid(format!("invalid (p, q): {e}")))?;
    Ok((p, q))
}

fn check_gate(cfg: &RunConfig, l: u128) -> CliResult<()> {
    if !cfg.force && l > cfg.brute_force_gate as u128 {
        return Err(CliError::gate(format!(
            "L = {l} exceeds the brute-force gate {} (raise --gate or FHSEQ_GATE, or pass --force)",
            cfg.brute_force_gate
        )));
    }
    Ok(())
}

fn params_for(cfg: &RunConfig, p: u64, q: u64) -> CliResult<Params> {
    Ok(build_params(p, q, cfg.g_override)?)
}

fn dense_set(params: Params) -> CliResult<(CyclotomicTables, FHSequenceSet)> {
    let tables = build_tables(params)?;
    let set = build_sequence_set(&build_partition(&tables)?);
    Ok((tables, set))
}

/// The sequence set from `--input` or from `--p/--q`, after the gate check.
fn gated_set(cfg: &RunConfig) -> CliResult<FHSequenceSet> {
    if let Some(path) = &cfg.input {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
        let set = export::sequences_from_json(&text)?;
        check_gate(cfg, set.len() as u128)?;
        return Ok(set);
    }
    let (p, q) = require_pq(cfg)?;
    check_gate(cfg, p as u128 * q as u128)?;
    let params = params_for(cfg, p, q)?;
    Ok(dense_set(params)?.1)
}

pub fn cmd_generate(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<ExitStatus> {
    let (p, q) = require_pq(cfg)?;
    let params = params_for(cfg, p, q)?;
    let format = match cfg.output_format {
        None if params.e <= 10 => OutputFormat::Digits,
        None => OutputFormat::Csv,
        Some(OutputFormat::Text) => {
            return Err(CliError::invalid("generate writes json, csv or digits"));
        }
        Some(f) => f,
    };
    if format == OutputFormat::Digits && params.e > 10 {
        return Err(CliError::invalid(format!(
            "digits format needs e <= 10, got e = {}",
            params.e
        )));
    }
    if params.l > DENSE_TABLE_LIMIT {
        return generate_lazy(cfg, out, params, format);
    }
    let (_, set) = dense_set(params)?;
    let text = match format {
        OutputFormat::Digits => export::sequences_to_digits(&set)?,
        OutputFormat::Csv => export::sequences_to_csv(&set),
        _ => export::sequences_to_json(&set),
    };
    emit(cfg, out, &text)?;
    Ok(ExitStatus::Success)
}

/// Streams sequences symbol by symbol for lengths beyond the dense tables.
fn generate_lazy(
    cfg: &RunConfig,
    out: &mut dyn Write,
    params: Params,
    format: OutputFormat,
) -> CliResult<ExitStatus> {
    let lazy = LazySequenceSet::new(params);
    let mut file;
    let sink: &mut dyn Write = match &cfg.output_path {
        Some(path) => {
            file = BufWriter::new(fs::File::create(path)?);
            &mut file
        }
        None => out,
    };
    let mut w = BufWriter::new(sink);
    let e = params.e_usize();
    if format == OutputFormat::Json {
        let header = serde_json::to_string(&params).expect("serializable");
        write!(w, "{},\"sequences\":[", header.trim_end_matches('}'))?;
    }
    for i in 0..e {
        if format == OutputFormat::Json {
            write!(w, "{}[", if i > 0 { "," } else { "" })?;
        }
        for t in 0..params.l {
            let s = lazy.symbol(i, t)?;
            match format {
                OutputFormat::Digits => write!(w, "{s}")?,
                OutputFormat::Csv => write!(w, "{}{s}", if t > 0 { "," } else { "" })?,
                _ => write!(w, "{}{s}", if t > 0 { "," } else { "" })?,
            }
        }
        match format {
            OutputFormat::Json => write!(w, "]")?,
            _ => writeln!(w)?,
        }
    }
    if format == OutputFormat::Json {
        writeln!(w, "]}}")?;
    }
    w.flush()?;
    Ok(ExitStatus::Success)
}

fn profile_text(prof: &CorrelationProfile) -> String {
    let mut s = String::new();
    let pr = &prof.params;
    let _ = writeln!(s, "p = {}, q = {}, g = {}, x = {}", pr.p, pr.q, pr.g, pr.x);
    let _ = writeln!(s, "L = {}, M = {}, v = {}", pr.l, prof.m, prof.v);
    let _ = writeln!(s, "H_a = {}, H_c = {}", prof.h_a, prof.h_c);
    let _ = writeln!(s, "S_a = {}, S_c = {}", prof.s_a, prof.s_c);
    let _ = writeln!(s, "A_a = {}, A_c = {}", prof.a_a, prof.a_c);
    let _ = writeln!(
        s,
        "A_a ~ {:.6}, A_c ~ {:.6}",
        prof.a_a.to_f64(),
        prof.a_c.to_f64()
    );
    s
}

pub fn cmd_analyze(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<ExitStatus> {
    let set = gated_set(cfg)?;
    let prof = correlation_profile(&set)?;
    let text = match cfg.output_format.unwrap_or(OutputFormat::Text) {
        OutputFormat::Text => profile_text(&prof),
        OutputFormat::Json => export::profile_to_json(&prof),
        OutputFormat::Csv => export::profile_to_csv(&prof),
        OutputFormat::Digits => return Err(CliError::invalid("analyze writes text, json or csv")),
    };
    emit(cfg, out, &text)?;
    Ok(ExitStatus::Success)
}

#[derive(Debug, Serialize)]
struct BoundsOutput {
    params: Params,
    optimality: OptimalityReport,
}

fn bounds_text(o: &OptimalityReport) -> String {
    let mut s = String::new();
    let b = &o.bounds;
    let _ = writeln!(s, "b = L mod v = {}, I = floor(LM/v) = {}", b.b, b.i_floor);
    for e in &b.lempel_greenberger {
        let _ = writeln!(
            s,
            "LG bound {} achieved {} for sequence {} ({})",
            e.bound,
            e.achieved,
            e.sequence,
            if e.optimal { "optimal" } else { "not optimal" }
        );
    }
    let pf = &b.peng_fan;
    let _ = writeln!(
        s,
        "Peng-Fan lhs {} rhs {} satisfied = {} Pareto-minimal pairs = {:?}",
        pf.lhs, pf.rhs, pf.satisfied, pf.pareto_minimal
    );
    let ab = &b.average_bound;
    let _ = writeln!(
        s,
        "average bound lhs {} rhs {} equality = {}",
        ab.lhs, ab.rhs, ab.met_with_equality
    );
    s.push_str(&o.summary());
    s.push('\n');
    s
}

pub fn cmd_bounds(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<ExitStatus> {
    let set = gated_set(cfg)?;
    let prof = correlation_profile(&set)?;
    let optimality = optimality_report(&prof);
    let text = match cfg.output_format.unwrap_or(OutputFormat::Text) {
        OutputFormat::Text => bounds_text(&optimality),
        OutputFormat::Json => to_json(&BoundsOutput {
            params: *set.params(),
            optimality,
        }),
        _ => return Err(CliError::invalid("bounds writes text or json")),
    };
    emit(cfg, out, &text)?;
    Ok(ExitStatus::Success)
}

fn cyclotomy_text(x: &export::CyclotomyExport) -> String {
    let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    let pr = &x.params;
    let _ = writeln!(
        s,
        "p = {}, q = {}, e = {}, d = {}, f1 = {}, f2 = {}, L = {}, g = {}, x = {}",
        pr.p, pr.q, pr.e, pr.d, pr.f1, pr.f2, pr.l, pr.g, pr.x
    );
    for (i, c) in x.classes.iter().enumerate() {
        let _ = writeln!(s, "D_{i}: {}", join(c));
    }
    let _ = writeln!(s, "P: {}", join(&x.p_set));
    let _ = writeln!(s, "Q: {}", join(&x.q_set));
    let _ = writeln!(s, "R: {}", join(&x.r_set));
    let _ = writeln!(s, "cyclotomic numbers (i, j), row i:");
    for row in &x.cyclotomic_matrix {
        let _ = writeln!(
            s,
            "  {}",
            row.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
        );
    }
    let sums = x
        .column_sums
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(s, "column sums: {sums}");
    let where_ = match x.minus_one {
        CellId::ClassD(i) => format!("D_{i}"),
        other => format!("{other:?}"),
    };
    let _ = writeln!(s, "-1 = {} lies in {where_}", pr.l - 1);
    s
}

pub fn cmd_cyclotomy(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<ExitStatus> {
    let (p, q) = require_pq(cfg)?;
    let tables = build_tables(params_for(cfg, p, q)?)?;
    let x = export::cyclotomy_export(&tables);
    let text = match cfg.output_format.unwrap_or(OutputFormat::Text) {
        OutputFormat::Text => cyclotomy_text(&x),
        OutputFormat::Json => to_json(&x),
        _ => return Err(CliError::invalid("cyclotomy writes text or json")),
    };
    emit(cfg, out, &text)?;
    Ok(ExitStatus::Success)
}

/// Lemma, theorem and (where applicable) published-listing checks for one parameter set.
#[derive(Debug, Clone, Serialize)]
pub struct FullVerification {
    pub params: Params,
    pub lemmas: Vec<LemmaReport>,
    pub theorem1: VerificationReport,
    pub theorem2: Theorem2Report,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub published_listings: Option<Vec<ListingCheck>>,
    pub passed: bool,
}

pub fn verify_params(params: Params) -> CliResult<FullVerification> {
    let (tables, set) = dense_set(params)?;
    let lemmas = verify_structure_lemmas(&tables);
    let theorem1 = verify_theorem1(&set, &tables, LabelMapping::Identity)?;
    let prof = correlation_profile(&set)?;
    let theorem2 = verify_theorem2(&prof, &params);
    let published = (params.p, params.q, params.g) == (reference::P, reference::Q, reference::G);
    let published_listings = published
        .then(|| reference::check_published_listings(&prof.auto[0], |k, l| prof.cross_table(k, l)));
    let listings_ok = published_listings.as_ref().is_none_or(|checks| {
        checks
            .iter()
            .flat_map(|c| &c.comparison.substitutions)
            .all(|s| s.annotation.is_some())
    });
    let passed =
        lemmas.iter().all(|r| r.passed) && theorem1.passed && theorem2.passed && listings_ok;
    Ok(FullVerification {
        params,
        lemmas,
        theorem1,
        theorem2,
        published_listings,
        passed,
    })
}

fn verification_text(v: &FullVerification) -> String {
    let mut s = String::new();
    let pr = &v.params;
    let _ = writeln!(
        s,
        "(p, q) = ({}, {}), e = {}, g = {}",
        pr.p, pr.q, pr.e, pr.g
    );
    let failed: Vec<&str> = v
        .lemmas
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.lemma.as_str())
        .collect();
    let _ = writeln!(
        s,
        "  lemmas: {} checked, {}",
        v.lemmas.len(),
        if failed.is_empty() {
            "all passed".to_string()
        } else {
            format!("failed: {}", failed.join(", "))
        }
    );
    let t1 = &v.theorem1;
    let _ = writeln!(
        s,
        "  closed-form correlations: {} checks, {} mismatches",
        t1.total_checks,
        t1.mismatches.len()
    );
    for (tag, n) in &t1.case_histogram {
        let _ = writeln!(s, "    {tag}: {n}");
    }
    let t2 = &v.theorem2;
    let _ = writeln!(
        s,
        "  averages: A_a = {}, A_c = {}, bound {} = {} ({})",
        t2.observed_a_a,
        t2.observed_a_c,
        t2.bound.lhs,
        t2.bound.rhs,
        if t2.passed { "equality" } else { "FAILED" }
    );
    if let Some(checks) = &v.published_listings {
        for c in checks {
            let name = match c.pair {
                Some((k, l)) => format!("H(X{k},X{l})"),
                None => "H(X)".to_string(),
            };
            for sub in &c.comparison.substitutions {
                let _ = writeln!(
                    s,
                    "  published {name} shift {}: printed {}, computed {}{}",
                    sub.shift,
                    sub.printed,
                    sub.actual,
                    sub.annotation
                        .as_deref()
                        .map(|a| format!(" ({a})"))
                        .unwrap_or_default()
                );
            }
            if c.comparison.length_defects() > 0 {
                let _ = writeln!(
                    s,
                    "  published {name}: {} printed entries for {} shifts ({} extra, {} missing)",
                    c.comparison.printed_len,
                    c.comparison.actual_len,
                    c.comparison.extra.len(),
                    c.comparison.missing.len()
                );
            }
        }
    }
    let _ = writeln!(s, "  result: {}", if v.passed { "PASS" } else { "FAIL" });
    s
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<ExitStatus> {
    let runs = if cfg.sweep {
        SWEEP
            .iter()
            .map(|&(p, q)| verify_params(build_params(p, q, None)?))
            .collect::<CliResult<Vec<_>>>()?
    } else {
        let (p, q) = require_pq(cfg)?;
        check_gate(cfg, p as u128 * q as u128)?;
        vec![verify_params(params_for(cfg, p, q)?)?]
    };
    let text = match cfg.output_format.unwrap_or(OutputFormat::Text) {
        OutputFormat::Text => runs.iter().map(verification_text).collect(),
        OutputFormat::Json if cfg.sweep => to_json(&runs),
        OutputFormat::Json => to_json(&runs[0]),
        _ => return Err(CliError::invalid("verify writes text or json")),
    };
    emit(cfg, out, &text)?;
    if runs.iter().all(|r| r.passed) {
        Ok(ExitStatus::Success)
    } else {
        let report = cfg
            .output_path
            .as_ref()
            .map(|p| format!("; report written to {}", p.display()))
            .unwrap_or_default();
        Err(CliError {
            status: ExitStatus::VerificationFailed,
            message: format!("verification failed{report}"),
        })
    }
}
