//! The AI Act fixtures and their expected-verdict suites.
//!
//! Problems and suite manifests are compiled into the library; setting
//! `DEON_CORPUS_DIR` reads them from a directory instead. A manifest line is
//! `problem query Kind bound`, where bound `N` searches up to `N` worlds and
//! `=N` exactly `N`. `Proof` and `Refuted` rows run the SDL tableau.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::finder::{
    check_entailment, find_model, search_cardinality, verify, FinderError, SearchBudget, Verdict, VerdictKind,
};
use crate::logic::{Problem, QueryKind};
use crate::semantics::{eval, verify_problem};
use crate::syntax::{parse_problem, Diagnostic};
use crate::tableau::{prove_sdl_with_limit, TableauVerdict, DEFAULT_STEP_LIMIT};

/// Overrides the embedded fixtures with the `.deon` files of a directory.
pub const CORPUS_DIR_VAR: &str = "DEON_CORPUS_DIR";

const PROBLEMS: &[(&str, &str)] = &[
    ("art5_ddl", include_str!("../../../corpus/art5_ddl.deon")),
    ("art5_sdl", include_str!("../../../corpus/art5_sdl.deon")),
    ("ctd_art16_20", include_str!("../../../corpus/ctd_art16_20.deon")),
    ("ctd_art16_24", include_str!("../../../corpus/ctd_art16_24.deon")),
    ("ctd_art31_36", include_str!("../../../corpus/ctd_art31_36.deon")),
    ("ddl_lemmas", include_str!("../../../corpus/ddl_lemmas.deon")),
    ("tds_base", include_str!("../../../corpus/tds_base.deon")),
    ("xddl1_agentive", include_str!("../../../corpus/xddl1_agentive.deon")),
    ("xddl1_base", include_str!("../../../corpus/xddl1_base.deon")),
    ("xddl2_base", include_str!("../../../corpus/xddl2_base.deon")),
];

const SUITES: &[(&str, &str)] = &[
    ("ctd", include_str!("../../../corpus/suites/ctd.suite")),
    ("ddl", include_str!("../../../corpus/suites/ddl.suite")),
    ("frontiers", include_str!("../../../corpus/suites/frontiers.suite")),
    ("sdl", include_str!("../../../corpus/suites/sdl.suite")),
];

const PROVENANCE: &str = include_str!("../../../corpus/provenance.tsv");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("problem `{name}` does not parse: {}", first(.diagnostics))]
    Parse { name: String, diagnostics: Vec<Diagnostic> },
    #[error("{file}:{line}: {message}")]
    Manifest { file: String, line: usize, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn first(ds: &[Diagnostic]) -> String {
    ds.first().map(|d| d.to_string()).unwrap_or_default()
}

/// World bound of a suite row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(try_from = "String")]
pub enum Bound {
    UpTo(usize),
    Exactly(usize),
}

impl Bound {
    pub fn worlds(self) -> usize {
        match self {
            Bound::UpTo(n) | Bound::Exactly(n) => n,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::UpTo(n) => write!(f, "{n}"),
            Bound::Exactly(n) => write!(f, "={n}"),
        }
    }
}

impl FromStr for Bound {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (exact, digits) = match s.strip_prefix('=') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        match digits.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(if exact { Bound::Exactly(n) } else { Bound::UpTo(n) }),
            _ => Err(format!("bad bound `{s}`")),
        }
    }
}

impl TryFrom<String> for Bound {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub problem: String,
    pub query: String,
    pub expected: VerdictKind,
    pub bound: Bound,
}

/// A fixture with its suite rows and the Act citation of every assumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub problem: Problem,
    pub rows: Vec<SuiteRow>,
    pub provenance: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub problem: String,
    pub query: String,
    pub expected: VerdictKind,
    pub actual: VerdictKind,
    pub bound: Bound,
    /// World count of the carried model, if any.
    pub worlds: Option<usize>,
    /// Whether the carried model passed the independent re-check.
    pub verified: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.actual == self.expected && self.verified
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub rows: Vec<RowReport>,
    pub passed: bool,
}

/// Limits applied to every row of a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SuiteBudget {
    /// Replaces the bound of every row, keeping `=N` rows exact.
    pub bound: Option<usize>,
    pub node_limit: Option<u64>,
}

/// Where fixtures come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Corpus {
    Embedded,
    Dir(PathBuf),
}

impl Corpus {
    /// The directory named by `DEON_CORPUS_DIR`, or the embedded fixtures.
    pub fn from_env() -> Self {
        match std::env::var_os(CORPUS_DIR_VAR) {
            Some(dir) if !dir.is_empty() => Corpus::Dir(PathBuf::from(dir)),
            _ => Corpus::Embedded,
        }
    }

    fn read(&self, path: &Path) -> Result<String, CorpusError> {
        std::fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
    }

    fn names_in(dir: &Path, sub: &str, ext: &str) -> Result<Vec<String>, CorpusError> {
        let dir = dir.join(sub);
        let entries =
            std::fs::read_dir(&dir).map_err(|source| CorpusError::Io { path: dir.clone(), source })?;
        let mut names: Vec<String> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == ext))
            .filter_map(|p| p.file_stem().and_then(|s| s.to_str()).map(str::to_string))
            .collect();
        names.sort();
        Ok(names)
    }

    pub fn list_problems(&self) -> Result<Vec<String>, CorpusError> {
        match self {
            Corpus::Embedded => Ok(PROBLEMS.iter().map(|(n, _)| n.to_string()).collect()),
            Corpus::Dir(dir) => Self::names_in(dir, "", "deon"),
        }
    }

    pub fn list_suites(&self) -> Result<Vec<String>, CorpusError> {
        match self {
            Corpus::Embedded => Ok(SUITES.iter().map(|(n, _)| n.to_string()).collect()),
            Corpus::Dir(dir) => Self::names_in(dir, "suites", "suite"),
        }
    }

    pub fn problem_text(&self, name: &str) -> Result<String, CorpusError> {
        match self {
            Corpus::Embedded => PROBLEMS
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| CorpusError::UnknownProblem(name.to_string())),
            Corpus::Dir(dir) => {
                if !self.list_problems()?.iter().any(|n| n == name) {
                    return Err(CorpusError::UnknownProblem(name.to_string()));
                }
                self.read(&dir.join(format!("{name}.deon")))
            }
        }
    }

    pub fn load_problem(&self, name: &str) -> Result<Problem, CorpusError> {
        let text = self.problem_text(name)?;
        parse_problem(&text).map_err(|diagnostics| CorpusError::Parse { name: name.to_string(), diagnostics })
    }

    pub fn suite_rows(&self, suite: &str) -> Result<Vec<SuiteRow>, CorpusError> {
        let text = match self {
            Corpus::Embedded => SUITES
                .iter()
                .find(|(n, _)| *n == suite)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| CorpusError::UnknownSuite(suite.to_string()))?,
            Corpus::Dir(dir) => {
                if !self.list_suites()?.iter().any(|n| n == suite) {
                    return Err(CorpusError::UnknownSuite(suite.to_string()));
                }
                self.read(&dir.join("suites").join(format!("{suite}.suite")))?
            }
        };
        parse_manifest(&format!("{suite}.suite"), &text)
    }

    /// `(problem, label, citation)` triples.
    pub fn provenance(&self) -> Result<Vec<(String, String, String)>, CorpusError> {
        let text = match self {
            Corpus::Embedded => PROVENANCE.to_string(),
            Corpus::Dir(dir) => self.read(&dir.join("provenance.tsv"))?,
        };
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let [problem, label, citation] = cols.as_slice() else {
                return Err(CorpusError::Manifest {
                    file: "provenance.tsv".into(),
                    line: i + 1,
                    message: "expected three tab-separated columns".into(),
                });
            };
            out.push((problem.to_string(), label.to_string(), citation.to_string()));
        }
        Ok(out)
    }

    pub fn entry(&self, name: &str) -> Result<CorpusEntry, CorpusError> {
        let problem = self.load_problem(name)?;
        let mut rows = Vec::new();
        for suite in self.list_suites()? {
            rows.extend(self.suite_rows(&suite)?.into_iter().filter(|r| r.problem == name));
        }
        let provenance = self
            .provenance()?
            .into_iter()
            .filter(|(p, _, _)| p == name)
            .map(|(_, label, citation)| (label, citation))
            .collect();
        Ok(CorpusEntry { name: name.to_string(), problem, rows, provenance })
    }

    /// Runs every row of a suite in manifest order.
    pub fn run_suite(&self, suite: &str, budget: &SuiteBudget) -> Result<SuiteReport, CorpusError> {
        let rows = self.suite_rows(suite)?;
        let mut problems: BTreeMap<String, Problem> = BTreeMap::new();
        for (i, row) in rows.iter().enumerate() {
            if !problems.contains_key(&row.problem) {
                problems.insert(row.problem.clone(), self.load_problem(&row.problem)?);
            }
            if problems[&row.problem].query(&row.query).is_none() {
                return Err(CorpusError::Manifest {
                    file: format!("{suite}.suite"),
                    line: i + 1,
                    message: format!("problem `{}` has no query `{}`", row.problem, row.query),
                });
            }
        }
        let reports: Vec<RowReport> = rows
            .iter()
            .map(|row| {
                let bound = match (budget.bound, row.bound) {
                    (Some(n), Bound::Exactly(_)) => Bound::Exactly(n),
                    (Some(n), Bound::UpTo(_)) => Bound::UpTo(n),
                    (None, b) => b,
                };
                run_row(&problems[&row.problem], row, bound, budget.node_limit)
            })
            .collect();
        let passed = reports.iter().all(RowReport::passed);
        Ok(SuiteReport { suite: suite.to_string(), rows: reports, passed })
    }
}

fn parse_manifest(file: &str, text: &str) -> Result<Vec<SuiteRow>, CorpusError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CorpusError::Manifest { file: file.to_string(), line: i + 1, message };
        let cols: Vec<&str> = line.split_whitespace().collect();
        let [problem, query, kind, bound] = cols.as_slice() else {
            return Err(err("expected `problem query Kind bound`".into()));
        };
        let expected: VerdictKind = kind.parse().map_err(err)?;
        if expected == VerdictKind::Inconclusive {
            return Err(err("Inconclusive cannot be expected".into()));
        }
        rows.push(SuiteRow {
            problem: problem.to_string(),
            query: query.to_string(),
            expected,
            bound: bound.parse().map_err(err)?,
        });
    }
    Ok(rows)
}

fn run_row(p: &Problem, row: &SuiteRow, bound: Bound, node_limit: Option<u64>) -> RowReport {
    let start = Instant::now();
    let q = p.query(&row.query).expect("rows are checked before running");
    let pq = p.for_query(q);
    let (actual, worlds, verified, detail) = match (row.expected, &q.kind) {
        (VerdictKind::Proof | VerdictKind::Refuted, QueryKind::Entails(goal)) => {
            match prove_sdl_with_limit(&pq, goal, node_limit.unwrap_or(DEFAULT_STEP_LIMIT)) {
                Ok(TableauVerdict::Proof(proof)) => {
                    let ok = crate::tableau::replay(&pq, goal, &proof).is_ok();
                    (VerdictKind::Proof, None, ok, format!("proof: {} steps", proof.steps))
                }
                Ok(TableauVerdict::Refuted(m)) => {
                    let theory = pq.signature.theory_spec();
                    let ok = verify_problem(&m, &pq) && eval(&m, &theory, m.actual, goal).is_ok_and(|v| !v);
                    (VerdictKind::Refuted, Some(m.worlds), ok, format!("refuted: {} worlds", m.worlds))
                }
                Err(e) => (VerdictKind::Inconclusive, None, true, e.to_string()),
            }
        }
        (_, kind) => {
            let goal = match kind {
                QueryKind::Entails(g) => Some(g),
                QueryKind::Consistent => None,
            };
            match finder_verdict(&pq, goal, bound, node_limit) {
                Ok(v) => (v.kind(), v.model().map(|m| m.worlds), verify(&v, &pq), v.to_string()),
                Err(e) => (VerdictKind::Inconclusive, None, true, e.to_string()),
            }
        }
    };
    RowReport {
        problem: row.problem.clone(),
        query: row.query.clone(),
        expected: row.expected,
        actual,
        bound,
        worlds,
        verified,
        detail,
        elapsed: start.elapsed(),
    }
}

fn finder_verdict(
    p: &Problem,
    goal: Option<&crate::logic::Formula>,
    bound: Bound,
    node_limit: Option<u64>,
) -> Result<Verdict, FinderError> {
    match bound {
        Bound::UpTo(n) => {
            let b = SearchBudget::new(n).with_node_limit(node_limit);
            match goal {
                Some(g) => check_entailment(p, g, &b),
                None => match find_model(p, &b)? {
                    Verdict::NoModelUpTo { exhaustive: false, .. } => {
                        Err(FinderError::BudgetExhausted { nodes: node_limit.unwrap_or(0), worlds: n })
                    }
                    v => Ok(v),
                },
            }
        }
        Bound::Exactly(n) => {
            let found = search_cardinality(p, goal, n, node_limit)?;
            Ok(match (found, goal) {
                (Some(model), Some(g)) => Verdict::Countermodel { model, goal: g.clone() },
                (Some(model), None) => Verdict::ModelFound { model, worlds: n },
                (None, Some(_)) => Verdict::BoundedValid { max_worlds: n },
                (None, None) => Verdict::NoModelUpTo { max_worlds: n, exhaustive: true },
            })
        }
    }
}

/// Problem names, from `DEON_CORPUS_DIR` or the embedded fixtures.
pub fn list_problems() -> Result<Vec<String>, CorpusError> {
    Corpus::from_env().list_problems()
}

pub fn load_problem(name: &str) -> Result<Problem, CorpusError> {
    Corpus::from_env().load_problem(name)
}

pub fn run_suite(name: &str, budget: &SuiteBudget) -> Result<SuiteReport, CorpusError> {
    Corpus::from_env().run_suite(name, budget)
}
