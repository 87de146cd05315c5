//! Command-line front end: check and print problem files, find models,
//! check entailments and run corpus suites.
//!
//! Exit codes are the interface: see [`exit`].

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use deon::corpus::{Corpus, CorpusError, SuiteBudget, SuiteReport};
use deon::syntax::{model_to_json_value, model_to_text};
use deon::tableau::{prove_sdl_with_limit, DEFAULT_STEP_LIMIT};
use deon::{
    check_entailment, find_model, parse_problem, print_problem, verify, DiagnosticKind, FinderError, Problem,
    QueryKind, SearchBudget, TableauError, TableauVerdict, TheoryId, Verdict,
};
use serde_json::{json, Value};

/// Process exit codes.
pub mod exit {
    /// Success: well formed, model found, valid or proved, suite passed.
    pub const OK: i32 = 0;
    /// `check` found ill-formed formulas, or a suite failed.
    pub const FAIL: i32 = 1;
    /// No model up to the bound, or a countermodel or refutation.
    pub const NEGATIVE: i32 = 2;
    /// The node or step budget ran out before a verdict.
    pub const INCONCLUSIVE: i32 = 3;
    pub const USAGE: i32 = 64;
    /// The input does not parse or is not well formed.
    pub const DATA: i32 = 65;
    /// The input file or corpus name does not exist.
    pub const NO_INPUT: i32 = 66;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Prover {
    /// Bounded countermodel search.
    Finder,
    /// Labelled tableau; sdl only.
    Tableau,
}

#[derive(Debug, Parser)]
#[command(name = "deon", version, about = "Deontic logic workbench")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Cap on search nodes (finder) or rule applications (tableau).
    #[arg(long, global = true)]
    pub node_limit: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a problem and check that every formula is well formed.
    Check { file: String },
    /// Search for a model of all assumptions.
    Solve {
        file: String,
        /// Largest world count; defaults to 3 for sdl and tds, 2 otherwise.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        bound: Option<u64>,
    },
    /// Check the goal of an entailment query.
    Entail {
        file: String,
        #[arg(long)]
        query: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        bound: Option<u64>,
        #[arg(long, value_enum, default_value_t = Prover::Finder)]
        prover: Prover,
    },
    /// Run a corpus suite and compare verdicts with expectations.
    Suite {
        name: String,
        /// Replaces the bound of every row.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        bound: Option<u64>,
        /// Report wall time per row.
        #[arg(long)]
        timings: bool,
    },
    /// Pretty-print a problem.
    Print { file: String },
    /// List corpus problems and suites.
    List,
}

/// Failure of a command, carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        let code = match e {
            CorpusError::UnknownProblem(_) => exit::NO_INPUT,
            CorpusError::UnknownSuite(_) => exit::USAGE,
            CorpusError::Io { .. } => exit::NO_INPUT,
            CorpusError::Parse { .. } | CorpusError::Manifest { .. } => exit::DATA,
        };
        Failure::new(code, e.to_string())
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                exit::USAGE
            } else {
                let _ = write!(out, "{text}");
                exit::OK
            };
        }
    };
    let corpus = Corpus::from_env();
    let result = match &cli.command {
        Command::Check { file } => check(&cli, &corpus, file, out),
        Command::Solve { file, bound } => solve(&cli, &corpus, file, *bound, out),
        Command::Entail { file, query, bound, prover } => {
            entail(&cli, &corpus, file, query, *bound, *prover, out)
        }
        Command::Suite { name, bound, timings } => suite(&cli, &corpus, name, *bound, *timings, out),
        Command::Print { file } => print(&cli, &corpus, file, out),
        Command::List => list(&cli, &corpus, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message.trim_end());
            f.code
        }
    }
}

/// Reads a problem file, falling back to the corpus fixture named by the
/// file stem when the path does not exist.
fn read_source(corpus: &Corpus, file: &str) -> Result<String, Failure> {
    let path = Path::new(file);
    if path.is_file() {
        return std::fs::read_to_string(path)
            .map_err(|e| Failure::new(exit::NO_INPUT, format!("{file}: {e}")));
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(file);
    corpus.problem_text(stem).map_err(|e| match e {
        CorpusError::UnknownProblem(_) => {
            Failure::new(exit::NO_INPUT, format!("{file}: no such file or corpus problem"))
        }
        other => other.into(),
    })
}

fn parse(corpus: &Corpus, file: &str) -> Result<Problem, Failure> {
    let text = read_source(corpus, file)?;
    parse_problem(&text).map_err(|diags| {
        let lines: Vec<String> = diags.iter().map(|d| format!("{file}:{d}")).collect();
        Failure::new(exit::DATA, lines.join("\n"))
    })
}

/// A parsed problem whose formulas are all well formed.
fn load(corpus: &Corpus, file: &str) -> Result<Problem, Failure> {
    let p = parse(corpus, file)?;
    p.validate().map_err(|errors| {
        let lines: Vec<String> = errors.iter().map(|e| format!("{file}: {e}")).collect();
        Failure::new(exit::DATA, lines.join("\n"))
    })?;
    Ok(p)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::new(exit::FAIL, format!("cannot write output: {e}")))
}

fn emit_json(out: &mut dyn Write, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    emit(out, &format!("{text}\n"))
}

fn budget(p: &Problem, bound: Option<u64>, node_limit: Option<u64>) -> SearchBudget {
    let base = SearchBudget::for_theory(p.theory());
    let max_worlds = bound.map_or(base.max_worlds, |b| usize::try_from(b).unwrap_or(usize::MAX));
    SearchBudget::new(max_worlds).with_node_limit(node_limit)
}

fn finder_failure(e: FinderError) -> Failure {
    match e {
        FinderError::BudgetExhausted { .. } => Failure::new(exit::INCONCLUSIVE, format!("inconclusive: {e}")),
        FinderError::TooManyWorlds { .. } => Failure::new(exit::USAGE, e.to_string()),
        other => Failure::new(exit::DATA, other.to_string()),
    }
}

fn check(cli: &Cli, corpus: &Corpus, file: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = read_source(corpus, file)?;
    let (p, errors) = match parse_problem(&text) {
        Ok(p) => {
            let errors =
                p.validate().err().unwrap_or_default().iter().map(|e| format!("{file}: {e}")).collect();
            (Some(p), errors)
        }
        Err(diags) if diags.iter().all(|d| d.kind == DiagnosticKind::IllFormed) => {
            (None, diags.iter().map(|d| format!("{file}:{d}")).collect::<Vec<_>>())
        }
        Err(diags) => {
            let lines: Vec<String> = diags.iter().map(|d| format!("{file}:{d}")).collect();
            return Err(Failure::new(exit::DATA, lines.join("\n")));
        }
    };
    let summary = p.as_ref().filter(|_| errors.is_empty());
    match (cli.format, summary) {
        (Format::Json, _) => emit_json(
            out,
            &json!({
                "ok": summary.is_some(),
                "theory": summary.map(|p| p.theory().to_string()),
                "atoms": summary.map(|p| p.signature.atoms().len()),
                "globals": summary.map(|p| p.globals.len()),
                "locals": summary.map(|p| p.locals.len()),
                "queries": summary.map(|p| p.queries.len()),
                "errors": errors,
            }),
        )?,
        (Format::Text, Some(p)) => emit(
            out,
            &format!(
                "ok: theory {}, {} atoms, {} globals, {} locals, {} queries\n",
                p.theory(),
                p.signature.atoms().len(),
                p.globals.len(),
                p.locals.len(),
                p.queries.len()
            ),
        )?,
        (Format::Text, None) => emit(out, &errors.iter().map(|e| format!("{e}\n")).collect::<String>())?,
    }
    Ok(if summary.is_some() { exit::OK } else { exit::FAIL })
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::ModelFound { model, worlds } => {
            json!({ "verdict": "ModelFound", "worlds": worlds, "model": model_to_json_value(model) })
        }
        Verdict::NoModelUpTo { max_worlds, exhaustive } => {
            json!({ "verdict": "NoModel", "max_worlds": max_worlds, "exhaustive": exhaustive })
        }
        Verdict::Countermodel { model, .. } => json!({
            "verdict": "Countermodel",
            "worlds": model.worlds,
            "model": model_to_json_value(model),
        }),
        Verdict::BoundedValid { max_worlds } => {
            json!({ "verdict": "BoundedValid", "max_worlds": max_worlds })
        }
    }
}

fn report_verdict(cli: &Cli, v: &Verdict, p: &Problem, out: &mut dyn Write) -> Result<(), Failure> {
    if !verify(v, p) {
        return Err(Failure::new(exit::FAIL, "internal error: the returned model fails verification"));
    }
    match cli.format {
        Format::Json => emit_json(out, &verdict_json(v)),
        Format::Text => {
            let model = v.model().map(model_to_text).unwrap_or_default();
            emit(out, &format!("{v}\n{model}"))
        }
    }
}

fn solve(
    cli: &Cli,
    corpus: &Corpus,
    file: &str,
    bound: Option<u64>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let p = load(corpus, file)?;
    let v = find_model(&p, &budget(&p, bound, cli.node_limit)).map_err(finder_failure)?;
    report_verdict(cli, &v, &p, out)?;
    Ok(match v {
        Verdict::ModelFound { .. } => exit::OK,
        Verdict::NoModelUpTo { exhaustive: true, .. } => exit::NEGATIVE,
        _ => exit::INCONCLUSIVE,
    })
}

fn entail(
    cli: &Cli,
    corpus: &Corpus,
    file: &str,
    label: &str,
    bound: Option<u64>,
    prover: Prover,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let p = load(corpus, file)?;
    let q = p.query(label).ok_or_else(|| Failure::new(exit::USAGE, format!("{file}: no query `{label}`")))?;
    let QueryKind::Entails(goal) = &q.kind else {
        return Err(Failure::new(exit::USAGE, format!("`{label}` is a consistency query; use `solve`")));
    };
    let goal = goal.clone();
    let sub = p.for_query(q);
    match prover {
        Prover::Finder => {
            let v = check_entailment(&sub, &goal, &budget(&sub, bound, cli.node_limit))
                .map_err(finder_failure)?;
            report_verdict(cli, &v, &sub, out)?;
            Ok(if matches!(v, Verdict::BoundedValid { .. }) { exit::OK } else { exit::NEGATIVE })
        }
        Prover::Tableau => {
            if sub.theory() != TheoryId::Sdl {
                return Err(Failure::new(
                    exit::USAGE,
                    format!("the tableau prover handles sdl only, not {}", sub.theory()),
                ));
            }
            let limit = cli.node_limit.unwrap_or(DEFAULT_STEP_LIMIT);
            match prove_sdl_with_limit(&sub, &goal, limit) {
                Ok(TableauVerdict::Proof(proof)) => {
                    match cli.format {
                        Format::Json => emit_json(out, &json!({ "verdict": "Proof", "proof": proof }))?,
                        Format::Text => emit(out, &format!("proof: {} rule applications\n", proof.steps))?,
                    }
                    Ok(exit::OK)
                }
                Ok(TableauVerdict::Refuted(model)) => {
                    match cli.format {
                        Format::Json => emit_json(
                            out,
                            &json!({ "verdict": "Refuted", "worlds": model.worlds, "model": model_to_json_value(&model) }),
                        )?,
                        Format::Text => emit(
                            out,
                            &format!("refuted: {} worlds\n{}", model.worlds, model_to_text(&model)),
                        )?,
                    }
                    Ok(exit::NEGATIVE)
                }
                Err(e @ TableauError::ResourceLimit { .. }) => {
                    Err(Failure::new(exit::INCONCLUSIVE, format!("inconclusive: {e}")))
                }
                Err(e) => Err(Failure::new(exit::DATA, e.to_string())),
            }
        }
    }
}

fn suite_json(report: &SuiteReport, timings: bool) -> Value {
    let mut value = serde_json::to_value(report).expect("suite reports always serialize");
    if timings {
        if let Some(rows) = value.get_mut("rows").and_then(Value::as_array_mut) {
            for (row, r) in rows.iter_mut().zip(&report.rows) {
                row["elapsed_ms"] = json!(r.elapsed.as_secs_f64() * 1000.0);
            }
        }
    }
    value
}

fn suite(
    cli: &Cli,
    corpus: &Corpus,
    name: &str,
    bound: Option<u64>,
    timings: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let budget = SuiteBudget {
        bound: bound.map(|b| usize::try_from(b).unwrap_or(usize::MAX)),
        node_limit: cli.node_limit,
    };
    let report = corpus.run_suite(name, &budget)?;
    match cli.format {
        Format::Json => emit_json(out, &suite_json(&report, timings))?,
        Format::Text => {
            let mut text = String::new();
            for r in &report.rows {
                let mark = if r.passed() { "PASS" } else { "FAIL" };
                text.push_str(&format!(
                    "{mark} {} {} expected {} got {} (bound {})",
                    r.problem, r.query, r.expected, r.actual, r.bound
                ));
                if !r.detail.is_empty() {
                    text.push_str(&format!(": {}", r.detail));
                }
                if timings {
                    text.push_str(&format!(" [{:.1} ms]", r.elapsed.as_secs_f64() * 1000.0));
                }
                text.push('\n');
            }
            let passed = report.rows.iter().filter(|r| r.passed()).count();
            text.push_str(&format!(
                "suite {}: {} ({passed}/{} rows)\n",
                report.suite,
                if report.passed { "pass" } else { "fail" },
                report.rows.len()
            ));
            emit(out, &text)?
        }
    }
    Ok(if report.passed { exit::OK } else { exit::FAIL })
}

fn print(cli: &Cli, corpus: &Corpus, file: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = parse(corpus, file)?;
    match cli.format {
        Format::Json => emit_json(out, &serde_json::to_value(&p).expect("problems always serialize"))?,
        Format::Text => emit(out, &print_problem(&p))?,
    }
    Ok(exit::OK)
}

fn list(cli: &Cli, corpus: &Corpus, out: &mut dyn Write) -> Result<i32, Failure> {
    let problems = corpus.list_problems()?;
    let suites = corpus.list_suites()?;
    match cli.format {
        Format::Json => emit_json(out, &json!({ "problems": problems, "suites": suites }))?,
        Format::Text => {
            let mut text = String::new();
            for p in &problems {
                text.push_str(&format!("problem {p}\n"));
            }
            for s in &suites {
                text.push_str(&format!("suite {s}\n"));
            }
            emit(out, &text)?
        }
    }
    Ok(exit::OK)
}
