//! Command-line front end: `verify`, `sweep`, `trace`, `funceq`, `suite`.

mod config;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value as Json};

pub use config::{ConfigOverrides, OutputFormat, RunConfig};
pub use grid::{expand_axis, grid_points, Axis};
pub use output::{CsvTable, Envelope, REPORT_COLUMNS, SCHEMA_VERSION};

use crate::anomalies::{agnew_walker_condition, dobinski_evaluate, weierstrass_trajectory};
use crate::catalog::{self, bind_params, opt, req, ParamKind, ParamSpec, Params};
use crate::error::{Error, Result};
use crate::funceq::{funceq_report, problems};
use crate::mpcore::PrecisionContext;
use crate::products::telescoping_trace;
use crate::report::{TraceTable, VerificationReport, Verdict};
use crate::suite::run_suite;
use output::{emit, join_map, report_fields};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Io = 1,
    Fail = 2,
    Inconclusive = 3,
    UnknownIdentity = 4,
    BadParameters = 5,
}

impl Status {
    pub fn of_verdict(v: Verdict) -> Status {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Fail,
            Verdict::Inconclusive => Status::Inconclusive,
        }
    }

    pub fn of_error(e: &Error) -> Status {
        match e {
            Error::UnknownIdentity(_) => Status::UnknownIdentity,
            Error::NoConvergence { .. } => Status::Inconclusive,
            Error::Io(_) => Status::Io,
            _ => Status::BadParameters,
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }
}

const TRACE_HELP: &str = "\
CSV columns (after schema_version):
  dobinski      j, tan, branch, factor, partial, target, deviation, agnew_walker,
                recorded_phase, closure, closure_deviation
  weierstrass   k, lhs, rhs, deviation, br114a, br114a_target, br114a_deviation
  telescoping   j, factor, direct_factor, cumulative, direct_cumulative,
                closed_form, deviation, limit_factor_ratio
  agnew-walker  j, sin, s, modulus, deviation, near_one
Complex values are written as (re, im). JSON carries the same columns and rows
plus a per-kind summary.";

const EXIT_HELP: &str = "\
Exit status: 0 pass, 2 fail, 3 inconclusive (truncation did not converge),
4 unknown identity, 5 bad parameters or domain error, 1 I/O error.
Every flag can also be set through TRIGPROD_<NAME> (e.g. TRIGPROD_DIGITS) or a
key = value file given with --config; flags win over the environment, which
wins over the file.";

#[derive(Debug, Parser)]
#[command(
    name = "trigprod",
    version,
    about = "Verify trigonometric infinite-product and series identities at high precision",
    after_help = EXIT_HELP
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Significant decimal digits.
    #[arg(long, global = true, env = "TRIGPROD_DIGITS")]
    pub digits: Option<u32>,
    /// Tail tolerance of truncated products and series.
    #[arg(long, global = true, env = "TRIGPROD_TOL")]
    pub tol: Option<f64>,
    /// Relative tolerance of verdicts.
    #[arg(long = "rel-tol", global = true, env = "TRIGPROD_REL_TOL")]
    pub rel_tol: Option<f64>,
    /// Maximum number of factors or terms.
    #[arg(long = "max-terms", global = true, env = "TRIGPROD_MAX_TERMS")]
    pub max_terms: Option<usize>,
    /// Extra digits for argument reduction.
    #[arg(long = "guard-digits", global = true, env = "TRIGPROD_GUARD_DIGITS")]
    pub guard_digits: Option<u32>,
    #[arg(long, value_enum, global = true, env = "TRIGPROD_FORMAT")]
    pub format: Option<OutputFormat>,
    /// Seed of the pseudo-random suite inputs.
    #[arg(long, global = true, env = "TRIGPROD_SEED")]
    pub seed: Option<u64>,
    /// Omit timestamps and wall times.
    #[arg(long, global = true, env = "TRIGPROD_REPRODUCIBLE")]
    pub reproducible: bool,
    /// Write to a file instead of stdout.
    #[arg(long, global = true, env = "TRIGPROD_OUTPUT")]
    pub output: Option<PathBuf>,
    /// key = value configuration file.
    #[arg(long, global = true, env = "TRIGPROD_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one identity: `verify vsum2 a=1`, `verify peo2 m=1 n=2`.
    Verify {
        /// Catalog id; `--list` shows all.
        #[arg(required_unless_present = "list")]
        id: Option<String>,
        /// key=value parameters.
        params: Vec<String>,
        #[arg(long)]
        list: bool,
    },
    /// Evaluate over a grid: `sweep vsum2 a=0.1:3.0:30`, `sweep cpodd n=1,2,3`.
    Sweep {
        id: String,
        /// key=lo:hi:n, key=v1,v2,... or key=value.
        params: Vec<String>,
    },
    /// Emit a per-step trace table.
    #[command(after_help = TRACE_HELP)]
    Trace {
        #[arg(value_enum)]
        kind: TraceKind,
        /// key=value parameters.
        params: Vec<String>,
        /// Allow working precision beyond 4x digits for long trajectories.
        #[arg(long)]
        allow_growth: bool,
    },
    /// Solve f(a) = g(a) + x f(a/p) for a built-in problem: `funceq linear a=3`.
    Funceq {
        #[arg(required_unless_present = "list")]
        problem: Option<String>,
        /// a=REAL and optionally N=DEPTH for the finite unrolling.
        params: Vec<String>,
        #[arg(long)]
        list: bool,
    },
    /// Run every acceptance check.
    Suite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceKind {
    Dobinski,
    Weierstrass,
    Telescoping,
    AgnewWalker,
}

impl TraceKind {
    pub fn name(self) -> &'static str {
        match self {
            TraceKind::Dobinski => "dobinski",
            TraceKind::Weierstrass => "weierstrass",
            TraceKind::Telescoping => "telescoping",
            TraceKind::AgnewWalker => "agnew_walker",
        }
    }

    pub fn params(self) -> &'static [ParamSpec] {
        const DOB: &[ParamSpec] = &[req("a", ParamKind::Argument), opt("J", ParamKind::Integer, "20")];
        const WEI: &[ParamSpec] = &[req("a", ParamKind::Argument), opt("kmax", ParamKind::Integer, "200")];
        const TEL: &[ParamSpec] = &[
            req("N", ParamKind::Integer),
            req("a", ParamKind::Argument),
            opt("J", ParamKind::Integer, "10"),
        ];
        const AGW: &[ParamSpec] = &[
            req("a", ParamKind::Argument),
            opt("J", ParamKind::Integer, "20"),
            opt("tol", ParamKind::Real, "1e-3"),
        ];
        match self {
            TraceKind::Dobinski => DOB,
            TraceKind::Weierstrass => WEI,
            TraceKind::Telescoping => TEL,
            TraceKind::AgnewWalker => AGW,
        }
    }
}

impl std::str::FromStr for TraceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "dobinski" => Ok(TraceKind::Dobinski),
            "weierstrass" => Ok(TraceKind::Weierstrass),
            "telescoping" => Ok(TraceKind::Telescoping),
            "agnew_walker" => Ok(TraceKind::AgnewWalker),
            _ => Err(Error::Parse(format!("unknown trace kind '{s}'"))),
        }
    }
}

/// A rendered trace: fixed columns, one row of decimal strings per step and a
/// per-kind summary.
#[derive(Debug, Clone, Serialize)]
pub struct Trace {
    pub kind: &'static str,
    pub parameters: std::collections::BTreeMap<String, String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub summary: Json,
}

/// Evaluate a trace of `kind` from `key=value` parameters.
pub fn build_trace(kind: TraceKind, params: &Params, allow_growth: bool, ctx: &PrecisionContext) -> Result<Trace> {
    let p = bind_params(kind.name(), kind.params(), params, ctx)?;
    let (table, summary): (Box<dyn TraceTable>, Json) = match kind {
        TraceKind::Dobinski => {
            let t = dobinski_evaluate(&p.argument("a")?, p.int32("J")?, ctx)?;
            let summary = json!({ "target": t.target, "class": t.class });
            (Box::new(t), summary)
        }
        TraceKind::Weierstrass => {
            let t = weierstrass_trajectory(&p.argument("a")?, p.int32("kmax")?, allow_growth, ctx)?;
            let summary = json!({
                "working_digits": t.working_digits,
                "br114a_monotone": t.br114a_monotone,
                "cauchy_violations": t.cauchy_violations,
                "windows": t.windows,
            });
            (Box::new(t), summary)
        }
        TraceKind::Telescoping => {
            let t = telescoping_trace(p.int32("N")?, &p.argument("a")?, p.int32("J")?, ctx)?;
            let summary = json!({ "base": t.q });
            (Box::new(t), summary)
        }
        TraceKind::AgnewWalker => {
            let t = agnew_walker_condition(&p.argument("a")?, p.int32("J")?, p.real_f64("tol")?, ctx)?;
            let summary = json!({ "trailing_from": t.trailing_from });
            (Box::new(t), summary)
        }
    };
    Ok(Trace {
        kind: kind.name(),
        parameters: p.as_map().clone(),
        columns: table.columns(),
        rows: table.rows(),
        summary,
    })
}

const FUNCEQ_PARAMS: &[ParamSpec] = &[req("a", ParamKind::Real), opt("N", ParamKind::Integer, "0")];

impl GlobalArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            digits: self.digits,
            tail_tolerance: self.tol,
            rel_tolerance: self.rel_tol,
            max_terms: self.max_terms,
            guard_digits: self.guard_digits,
            format: self.format,
            seed: self.seed,
            reproducible: self.reproducible.then_some(true),
        }
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => ConfigOverrides::from_file(path)?,
            None => ConfigOverrides::default(),
        };
        RunConfig::resolve(&self.overrides().or(file))
    }
}

/// Rendered output and the exit status it implies.
struct Outcome {
    text: String,
    status: Status,
}

#[derive(Serialize)]
struct SweepRow {
    grid_index: usize,
    parameters: std::collections::BTreeMap<String, String>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn render_report(cfg: &RunConfig, command: &str, report: &VerificationReport) -> String {
    match cfg.format {
        OutputFormat::Json => Envelope::new(command, cfg, report).to_json(),
        OutputFormat::Csv => {
            let mut t = CsvTable::new(&REPORT_COLUMNS);
            t.row(&report_fields(report));
            t.finish()
        }
    }
}

fn verify(cfg: &RunConfig, id: &str, pairs: &[String]) -> Result<Outcome> {
    let report = catalog::verify(id, &Params::from_pairs(pairs)?, &cfg.context())?;
    Ok(Outcome { text: render_report(cfg, "verify", &report), status: Status::of_verdict(report.verdict) })
}

fn list_catalog() -> String {
    let mut s = String::new();
    for e in catalog::entries() {
        s.push_str(&format!("{:<16} {:<40} {}\n", e.id, e.signature(), e.summary));
    }
    s
}

fn sweep(cfg: &RunConfig, id: &str, pairs: &[String]) -> Result<Outcome> {
    let entry = catalog::lookup(id)?;
    let ctx = cfg.context();
    let axes = grid::axes(entry.params, pairs)?;
    let points = grid_points(&axes);
    for p in &points {
        entry.bind(p, &ctx)?;
    }
    let results: Vec<Result<VerificationReport>> = points.par_iter().map(|p| entry.run(p, &ctx)).collect();
    let mut verdict = Verdict::Pass;
    let rows: Vec<SweepRow> = points
        .iter()
        .zip(results)
        .enumerate()
        .map(|(grid_index, (p, res))| {
            let parameters = p.as_map().clone();
            match res {
                Ok(r) => {
                    verdict = verdict.combine(r.verdict);
                    SweepRow { grid_index, parameters, verdict: r.verdict.as_str(), report: Some(r), error: None }
                }
                Err(e) => {
                    let (v, label) = match e {
                        Error::NoConvergence { .. } => (Verdict::Inconclusive, "inconclusive"),
                        _ => (Verdict::Fail, "error"),
                    };
                    verdict = verdict.combine(v);
                    SweepRow { grid_index, parameters, verdict: label, report: None, error: Some(e.to_string()) }
                }
            }
        })
        .collect();
    let text = match cfg.format {
        OutputFormat::Json => {
            let result = json!({ "identity_id": id, "axes": axes, "verdict": verdict, "rows": rows });
            Envelope::new("sweep", cfg, result).to_json()
        }
        OutputFormat::Csv => {
            let mut columns = vec!["grid_index"];
            columns.extend(REPORT_COLUMNS);
            columns.push("error");
            let mut t = CsvTable::new(&columns);
            for row in &rows {
                let mut fields = vec![row.grid_index.to_string()];
                match &row.report {
                    Some(r) => fields.extend(report_fields(r)),
                    None => {
                        let mut blank = vec![String::new(); REPORT_COLUMNS.len()];
                        blank[0] = id.to_string();
                        blank[1] = join_map(&row.parameters);
                        blank[9] = row.verdict.to_string();
                        fields.extend(blank);
                    }
                }
                fields.push(row.error.clone().unwrap_or_default());
                t.row(&fields);
            }
            t.finish()
        }
    };
    Ok(Outcome { text, status: Status::of_verdict(verdict) })
}

fn render_trace(cfg: &RunConfig, trace: &Trace) -> String {
    match cfg.format {
        OutputFormat::Json => Envelope::new("trace", cfg, trace).to_json(),
        OutputFormat::Csv => {
            let mut t = CsvTable::new(&trace.columns);
            for r in &trace.rows {
                t.row(r);
            }
            t.finish()
        }
    }
}

fn trace(cfg: &RunConfig, kind: TraceKind, pairs: &[String], allow_growth: bool) -> Result<Outcome> {
    let trace = build_trace(kind, &Params::from_pairs(pairs)?, allow_growth, &cfg.context())?;
    Ok(Outcome { text: render_trace(cfg, &trace), status: Status::Pass })
}

fn funceq(cfg: &RunConfig, label: &str, pairs: &[String]) -> Result<Outcome> {
    let prob = problems::builtin(label).ok_or_else(|| Error::UnknownIdentity(label.to_string()))?;
    let ctx = cfg.context();
    let p = bind_params(label, FUNCEQ_PARAMS, &Params::from_pairs(pairs)?, &ctx)?;
    let depth = match p.int("N")? {
        0 => None,
        n => Some(n as usize),
    };
    let report = funceq_report(&prob, &p.real("a", &ctx)?, depth, &ctx)?;
    Ok(Outcome { text: render_report(cfg, "funceq", &report), status: Status::of_verdict(report.verdict) })
}

fn suite(cfg: &RunConfig) -> Result<Outcome> {
    let ctx: PrecisionContext = cfg.context();
    let report = run_suite(&ctx, cfg.seed, !cfg.reproducible)?;
    for c in &report.checks {
        eprintln!("{c}");
    }
    let (pass, fail, inconclusive) = report.counts();
    match report.elapsed_ms {
        Some(ms) => eprintln!("suite: {pass} pass, {fail} fail, {inconclusive} inconclusive in {:.1} s", ms / 1e3),
        None => eprintln!("suite: {pass} pass, {fail} fail, {inconclusive} inconclusive"),
    }
    let text = match cfg.format {
        OutputFormat::Json => Envelope::new("suite", cfg, &report).to_json(),
        OutputFormat::Csv => {
            let mut t = CsvTable::new(&[
                "criterion",
                "name",
                "verdict",
                "cases",
                "worst_error",
                "tolerance",
                "elapsed_ms",
                "notes",
            ]);
            for c in &report.checks {
                t.row(&[
                    c.criterion.to_string(),
                    c.name.to_string(),
                    c.verdict.to_string(),
                    c.cases.to_string(),
                    format!("{:e}", c.worst_error),
                    format!("{:e}", c.tolerance),
                    c.elapsed_ms.map(|ms| format!("{ms:.1}")).unwrap_or_default(),
                    c.notes.join("; "),
                ]);
            }
            t.finish()
        }
    };
    Ok(Outcome { text, status: Status::of_verdict(report.verdict) })
}

/// Run a parsed command line and return its exit status.
pub fn run(cli: &Cli) -> Status {
    let cfg = match cli.global.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::of_error(&e);
        }
    };
    let outcome = match &cli.command {
        Command::Verify { list: true, .. } => Ok(Outcome { text: list_catalog(), status: Status::Pass }),
        Command::Verify { id, params, .. } => verify(&cfg, id.as_deref().unwrap_or_default(), params),
        Command::Sweep { id, params } => sweep(&cfg, id, params),
        Command::Trace { kind, params, allow_growth } => trace(&cfg, *kind, params, *allow_growth),
        Command::Funceq { list: true, .. } => {
            Ok(Outcome { text: problems::BUILTIN_LABELS.join("\n") + "\n", status: Status::Pass })
        }
        Command::Funceq { problem, params, .. } => funceq(&cfg, problem.as_deref().unwrap_or_default(), params),
        Command::Suite => suite(&cfg),
    };
    match outcome {
        Ok(o) => match emit(&cli.global.output, &o.text) {
            Ok(()) => o.status,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                Status::Io
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            Status::of_error(&e)
        }
    }
}

/// Entry point of the `trigprod` binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let status = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Status::Pass,
                _ => Status::BadParameters,
            };
            return ExitCode::from(status.code());
        }
    };
    ExitCode::from(run(&cli).code())
}
