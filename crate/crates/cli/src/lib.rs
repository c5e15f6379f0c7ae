//! Command dispatch and report formatting for the `abduce` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use abduce_core::abduction::{
    display_a_clause, explain_with, sort_canonical, AbductionError, Consistency, ExplainConfig, ExplainInput,
    ImplicateReport, MinimizeMode, ReportStatus,
};
use abduce_core::abstraction::abstract_clause;
use abduce_core::oracle::{entails, enumerate_a_implicates, prime_subset, OracleError};
use abduce_core::ordering::OrderingContext;
use abduce_core::problem::{parse, parse_clause, ParseError, ProblemFile};
use abduce_core::saturation::{saturate_with, Calculus, Limit, SaturationConfig, SaturationStatus};
use abduce_core::{Abducibles, Clause};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSATISFIABLE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "abduce", version, about = "Ground abductive explanations over abducible constants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[arg(long, global = true)]
    pub max_clauses: Option<usize>,

    #[arg(long, global = true)]
    pub max_iterations: Option<usize>,

    #[arg(long, value_enum, default_value_t = Minimize::Auto, global = true)]
    pub minimize: Minimize,

    /// Check each hypothesis for consistency with the axioms.
    #[arg(long, global = true)]
    pub consistency_filter: bool,

    /// Accepted for scripted runs; every command is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Print A-clauses as saturation finds them.
    #[arg(long, global = true)]
    pub stream: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute prime implicates and the explanations they induce.
    Explain { file: PathBuf },
    /// Saturate and report the A-clauses found.
    Saturate {
        file: PathBuf,
        /// Run plain superposition on the unabstracted clauses.
        #[arg(long)]
        plain: bool,
    },
    /// Decide whether a ground clause follows from a ground problem.
    Check {
        file: PathBuf,
        #[arg(long)]
        implicate: String,
    },
    /// Enumerate implicates over the abducibles by brute force.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        /// Keep implicates entailed by others.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Minimize {
    Subsumption,
    Entailment,
    Auto,
}

impl From<Minimize> for MinimizeMode {
    fn from(m: Minimize) -> Self {
        match m {
            Minimize::Subsumption => MinimizeMode::Subsumption,
            Minimize::Entailment => MinimizeMode::Entailment,
            Minimize::Auto => MinimizeMode::Auto,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: file not found", .0.display())]
    FileNotFound(PathBuf),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("--implicate: {0}")]
    Implicate(ParseError),
    #[error(transparent)]
    Abduction(#[from] AbductionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::FileNotFound(_) => "FileNotFound",
            CliError::Io { .. } | CliError::Output(_) => "IoError",
            CliError::Parse { source, .. } | CliError::Implicate(source) => match source {
                ParseError::Syntax { .. } => "SyntaxError",
                ParseError::ArityMismatch { .. } => "ArityMismatch",
                ParseError::UnknownDirective { .. } => "UnknownDirective",
                ParseError::InvalidOrder { .. } => "InvalidOrder",
            },
            CliError::Abduction(AbductionError::EmptyAbducibleSet) => "EmptyAbducibleSet",
            CliError::Abduction(AbductionError::EntailmentModeUnavailable) => "EntailmentModeUnavailable",
            CliError::Abduction(_) => "AbductionError",
            CliError::Oracle(OracleError::NonGround(_)) => "NonGround",
            CliError::Oracle(OracleError::InputUnsatisfiable) => "InputUnsatisfiable",
        }
    }
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            EXIT_ERROR
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Explain { file } => cmd_explain(cli, &load(file)?, out),
        Command::Saturate { file, plain } => cmd_saturate(cli, &load(file)?, *plain, out),
        Command::Check { file, implicate } => cmd_check(cli, &load(file)?, implicate, out),
        Command::Oracle { file, max_len, all } => cmd_oracle(cli, &load(file)?, *max_len, *all, out),
    }
}

pub fn load(path: &Path) -> Result<ProblemFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::FileNotFound(path.to_path_buf()),
        _ => CliError::Io { path: path.to_path_buf(), source: e },
    })?;
    parse(&text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

fn saturation_config(cli: &Cli) -> SaturationConfig {
    let mut config = SaturationConfig { record_log: false, ..SaturationConfig::default() };
    if let Some(n) = cli.max_clauses {
        config.max_clauses = n;
    }
    if let Some(n) = cli.max_iterations {
        config.max_iterations = n;
    }
    config
}

fn clause_text(c: &Clause, abducibles: &Abducibles) -> String {
    if c.is_ground() {
        display_a_clause(c, abducibles)
    } else {
        c.to_string()
    }
}

fn stream_line(cli: &Cli, out: &mut dyn Write, text: &str) -> std::io::Result<()> {
    match cli.format {
        Format::Text => writeln!(out, "a-clause: {text}"),
        Format::Json => writeln!(out, "{}", serde_json::json!({ "a_clause": text })),
    }
}

#[derive(Serialize)]
struct JsonImplicate {
    clause: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    consistent: Option<Option<bool>>,
}

#[derive(Serialize)]
struct JsonStats {
    generated: usize,
    kept: usize,
    elapsed_ms: u128,
}

#[derive(Serialize)]
struct JsonExplain {
    status: &'static str,
    implicates: Vec<JsonImplicate>,
    explanations: Vec<String>,
    explanation: String,
    warnings: Vec<&'static str>,
    stats: JsonStats,
}

fn status_name(s: ReportStatus) -> &'static str {
    match s {
        ReportStatus::Explained => "explained",
        ReportStatus::InputUnsatisfiable => "input_unsatisfiable",
    }
}

fn cmd_explain(cli: &Cli, problem: &ProblemFile, out: &mut dyn Write) -> Result<i32, CliError> {
    let config = ExplainConfig {
        saturation: saturation_config(cli),
        minimize: cli.minimize.into(),
        consistency_filter: cli.consistency_filter,
        ..ExplainConfig::default()
    };
    let abducibles = problem.abducibles();
    let mut io_error = None;
    let report = explain_with(&ExplainInput::from_problem(problem), &config, &mut |c| {
        if cli.stream && io_error.is_none() {
            if let Err(e) = stream_line(cli, out, &clause_text(c, &abducibles)) {
                io_error = Some(e);
            }
        }
    })?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    match cli.format {
        Format::Text => write_explain_text(&report, out)?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&explain_json(&report)).expect("serializable"))?,
    }
    Ok(match report.status {
        ReportStatus::Explained => EXIT_OK,
        ReportStatus::InputUnsatisfiable => EXIT_UNSATISFIABLE,
    })
}

fn explain_json(report: &ImplicateReport) -> JsonExplain {
    let explanations = report.explanations();
    JsonExplain {
        status: status_name(report.status),
        implicates: report
            .implicates
            .iter()
            .map(|i| JsonImplicate {
                clause: display_a_clause(&i.clause, &report.abducibles),
                consistent: i.consistency.map(|c| match c {
                    Consistency::Consistent => Some(true),
                    Consistency::Inconsistent => Some(false),
                    Consistency::Unknown => None,
                }),
            })
            .collect(),
        explanations: explanations.iter().map(|h| report.display_explanation(h)).collect(),
        explanation: report.display_disjunction(),
        warnings: report.warnings.iter().map(|w| w.code()).collect(),
        stats: JsonStats {
            generated: report.stats.generated,
            kept: report.stats.kept,
            elapsed_ms: report.stats.elapsed.as_millis(),
        },
    }
}

fn write_explain_text(report: &ImplicateReport, out: &mut dyn Write) -> std::io::Result<()> {
    if report.status == ReportStatus::InputUnsatisfiable {
        writeln!(out, "input is unsatisfiable; nothing to explain")?;
    } else {
        writeln!(out, "implicates:")?;
        for i in &report.implicates {
            let note = match i.consistency {
                Some(Consistency::Consistent) => "  [consistent]",
                Some(Consistency::Inconsistent) => "  [inconsistent with axioms]",
                Some(Consistency::Unknown) => "  [consistency unknown]",
                None => "",
            };
            writeln!(out, "  {}{note}", display_a_clause(&i.clause, &report.abducibles))?;
        }
        if report.implicates.is_empty() {
            writeln!(out, "  none\nexplanation: none")?;
        } else {
            writeln!(out, "explanation: {}", report.display_disjunction())?;
        }
    }
    for w in &report.warnings {
        writeln!(out, "warning: {}", w.message())?;
    }
    writeln!(
        out,
        "stats: {} generated, {} kept, {} ms",
        report.stats.generated,
        report.stats.kept,
        report.stats.elapsed.as_millis()
    )
}

#[derive(Serialize)]
struct JsonSaturate {
    status: &'static str,
    a_clauses: Vec<String>,
    warnings: Vec<&'static str>,
    stats: JsonStats,
}

fn cmd_saturate(cli: &Cli, problem: &ProblemFile, plain: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let input = ExplainInput::from_problem(problem).prepared()?;
    let abducibles = input.abducibles.clone();
    let config = SaturationConfig {
        calculus: if plain { Calculus::Plain } else { Calculus::Abstracted },
        ..saturation_config(cli)
    };
    let clauses: Vec<Clause> = if plain {
        input.clauses()
    } else {
        input.clauses().iter().map(|c| abstract_clause(c, &abducibles)).collect()
    };
    let ordering = OrderingContext::new(abducibles.clone());
    let mut io_error = None;
    let outcome = saturate_with(&clauses, &ordering, &config, &mut |c| {
        if cli.stream && io_error.is_none() {
            if let Err(e) = stream_line(cli, out, &clause_text(c, &abducibles)) {
                io_error = Some(e);
            }
        }
    });
    if let Some(e) = io_error {
        return Err(e.into());
    }
    let mut a_clauses = outcome.t_infinity.clone();
    sort_canonical(&mut a_clauses, &abducibles);
    let status = match outcome.status {
        SaturationStatus::Saturated => "saturated",
        SaturationStatus::Unsatisfiable => "unsatisfiable",
        SaturationStatus::LimitReached => "limit_reached",
    };
    let mut warnings = Vec::new();
    if outcome.variable_eligible_seen {
        warnings.push("variable_eligible");
    }
    if let Some(l) = outcome.limit {
        warnings.push(match l {
            Limit::Clauses => "clause_limit",
            Limit::Iterations => "iteration_limit",
            Limit::Weight => "weight_limit",
        });
    }
    let lines: Vec<String> = a_clauses.iter().map(|c| clause_text(c, &abducibles)).collect();
    match cli.format {
        Format::Text => {
            writeln!(out, "status: {status}")?;
            writeln!(out, "a-clauses:")?;
            for l in &lines {
                writeln!(out, "  {l}")?;
            }
            for w in &warnings {
                writeln!(out, "warning: {w}")?;
            }
            writeln!(
                out,
                "stats: {} iterations, {} generated, {} kept, {} ms",
                outcome.stats.iterations,
                outcome.stats.generated,
                outcome.stats.kept,
                outcome.stats.elapsed.as_millis()
            )?;
        }
        Format::Json => {
            let report = JsonSaturate {
                status,
                a_clauses: lines,
                warnings,
                stats: JsonStats {
                    generated: outcome.stats.generated,
                    kept: outcome.stats.kept,
                    elapsed_ms: outcome.stats.elapsed.as_millis(),
                },
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"))?;
        }
    }
    Ok(if outcome.status == SaturationStatus::Unsatisfiable { EXIT_UNSATISFIABLE } else { EXIT_OK })
}

fn cmd_check(cli: &Cli, problem: &ProblemFile, implicate: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let clause = parse_clause(implicate).map_err(CliError::Implicate)?;
    let s = ExplainInput::from_problem(problem).clauses();
    let entailed = entails(&s, &clause)?;
    match cli.format {
        Format::Text => writeln!(out, "entailed: {entailed}")?,
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({ "clause": clause.to_string(), "entailed": entailed }))
                .expect("serializable")
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_oracle(cli: &Cli, problem: &ProblemFile, max_len: usize, all: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let abducibles = problem.abducibles();
    if abducibles.is_empty() {
        return Err(AbductionError::EmptyAbducibleSet.into());
    }
    let s = ExplainInput::from_problem(problem).clauses();
    let found = match enumerate_a_implicates(&s, &abducibles, max_len) {
        Err(OracleError::InputUnsatisfiable) => {
            match cli.format {
                Format::Text => writeln!(out, "input is unsatisfiable")?,
                Format::Json => writeln!(out, "{}", serde_json::json!({ "status": "input_unsatisfiable", "implicates": [] }))?,
            }
            return Ok(EXIT_UNSATISFIABLE);
        }
        r => r?,
    };
    let mut implicates = if all { found } else { prime_subset(&found)? };
    sort_canonical(&mut implicates, &abducibles);
    let lines: Vec<String> = implicates.iter().map(|c| display_a_clause(c, &abducibles)).collect();
    match cli.format {
        Format::Text => {
            for l in &lines {
                writeln!(out, "{l}")?;
            }
        }
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({ "status": "ok", "implicates": lines })).expect("serializable")
        )?,
    }
    Ok(EXIT_OK)
}
