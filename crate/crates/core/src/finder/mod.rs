//! Bounded model finding and countermodel search.
//!
//! [`find_model`] deepens over world counts `1..=max_worlds`;
//! [`check_entailment`] looks for a model of the problem where the goal
//! fails at the actual world. Every returned model is re-checked against the
//! frame conditions and the problem with the plain evaluator before it is
//! handed out.

mod ir;
mod ob;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{well_formed_in, Formula, Problem, TheoryId};
use crate::semantics::{check_frame, eval, extension, EvalError, FiniteModel};
use crate::theories::TheorySpec;

use ir::{compile, Tables};
pub use ob::MAX_OB_WORLDS as MAX_DYADIC_WORLDS;
use search::{Constraint, Mode, Outcome, Scope, Search};

/// Largest world count searched for theories without an ob function.
pub const MAX_SEARCH_WORLDS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_worlds: usize,
    /// Cap on search nodes over the whole call.
    pub node_limit: Option<u64>,
    /// The search is single-threaded and always deterministic; the flag is
    /// kept so callers can state the requirement.
    pub deterministic: bool,
}

impl SearchBudget {
    pub fn new(max_worlds: usize) -> Self {
        assert!(max_worlds >= 1, "max_worlds must be at least 1");
        SearchBudget { max_worlds, node_limit: None, deterministic: true }
    }

    /// 2 worlds for the Carmo-Jones based theories, 3 for SDL and TDS.
    pub fn for_theory(id: TheoryId) -> Self {
        match id {
            TheoryId::Sdl | TheoryId::Tds => SearchBudget::new(3),
            TheoryId::Cjddl | TheoryId::Xddl1 | TheoryId::Xddl2 => SearchBudget::new(2),
        }
    }

    pub fn with_node_limit(mut self, limit: Option<u64>) -> Self {
        self.node_limit = limit;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    ModelFound { model: FiniteModel, worlds: usize },
    NoModelUpTo { max_worlds: usize, exhaustive: bool },
    Countermodel { model: FiniteModel, goal: Formula },
    BoundedValid { max_worlds: usize },
}

/// Verdict kinds as they appear in expectations and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VerdictKind {
    ModelFound,
    NoModel,
    Countermodel,
    BoundedValid,
    Proof,
    Refuted,
    Inconclusive,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::ModelFound => "ModelFound",
            VerdictKind::NoModel => "NoModel",
            VerdictKind::Countermodel => "Countermodel",
            VerdictKind::BoundedValid => "BoundedValid",
            VerdictKind::Proof => "Proof",
            VerdictKind::Refuted => "Refuted",
            VerdictKind::Inconclusive => "Inconclusive",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VerdictKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            VerdictKind::ModelFound,
            VerdictKind::NoModel,
            VerdictKind::Countermodel,
            VerdictKind::BoundedValid,
            VerdictKind::Proof,
            VerdictKind::Refuted,
            VerdictKind::Inconclusive,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| format!("unknown verdict kind `{s}`"))
    }
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::ModelFound { .. } => VerdictKind::ModelFound,
            Verdict::NoModelUpTo { .. } => VerdictKind::NoModel,
            Verdict::Countermodel { .. } => VerdictKind::Countermodel,
            Verdict::BoundedValid { .. } => VerdictKind::BoundedValid,
        }
    }

    pub fn model(&self) -> Option<&FiniteModel> {
        match self {
            Verdict::ModelFound { model, .. } | Verdict::Countermodel { model, .. } => Some(model),
            _ => None,
        }
    }
}

fn plural(worlds: usize) -> String {
    if worlds == 1 {
        "1 world".to_string()
    } else {
        format!("{worlds} worlds")
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ModelFound { worlds, .. } => write!(f, "model-found: {}", plural(*worlds)),
            Verdict::NoModelUpTo { max_worlds, exhaustive } => write!(
                f,
                "no-model-up-to: {max_worlds} ({})",
                if *exhaustive { "exhaustive" } else { "budget exhausted" }
            ),
            Verdict::Countermodel { model, .. } => write!(f, "countermodel: {}", plural(model.worlds)),
            Verdict::BoundedValid { max_worlds } => write!(f, "bounded-valid: {max_worlds}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinderError {
    #[error("search budget exhausted after {nodes} nodes at {worlds} worlds")]
    BudgetExhausted { nodes: u64, worlds: usize },
    #[error("{requested} worlds requested; theory {theory} is searched up to {limit}")]
    TooManyWorlds { requested: usize, limit: usize, theory: TheoryId },
    #[error("problem is not well formed: {0}")]
    IllFormed(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Everything a search at some cardinality needs, compiled once.
struct Prepared {
    theory: TheorySpec,
    tables: Tables,
    constraints: Vec<Constraint>,
}

fn prepare(p: &Problem, goal: Option<&Formula>) -> Result<Prepared, FinderError> {
    if let Err(errors) = p.validate() {
        let msgs: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
        return Err(FinderError::IllFormed(msgs.join("; ")));
    }
    let theory = p.signature.theory_spec();
    if let Some(g) = goal {
        if let Err(errors) = well_formed_in(g, &p.signature, &theory) {
            let msgs: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
            return Err(FinderError::IllFormed(msgs.join("; ")));
        }
    }
    let tables = Tables::new(&theory, p.signature.atoms());
    let mut constraints = Vec::new();
    for a in &p.locals {
        constraints.push(Constraint { scope: Scope::Local, node: compile(&a.formula, &theory, &tables)? });
    }
    if let Some(g) = goal {
        let negated = Formula::not(g.clone());
        constraints.push(Constraint { scope: Scope::Local, node: compile(&negated, &theory, &tables)? });
    }
    for a in &p.globals {
        constraints.push(Constraint { scope: Scope::Global, node: compile(&a.formula, &theory, &tables)? });
    }
    Ok(Prepared { theory, tables, constraints })
}

fn world_limit(theory: &TheorySpec) -> usize {
    if theory.agent_tags.is_empty() {
        MAX_SEARCH_WORLDS
    } else {
        MAX_DYADIC_WORLDS
    }
}

/// Re-checks a candidate with the plain evaluator.
fn model_checks(m: &FiniteModel, p: &Problem, theory: &TheorySpec, goal: Option<&Formula>) -> bool {
    if !check_frame(m, theory).is_empty() {
        return false;
    }
    let globals_hold = p.globals.iter().all(|a| extension(m, theory, &a.formula).is_ok_and(|e| e == m.all()));
    let locals_hold = p.locals.iter().all(|a| eval(m, theory, m.actual, &a.formula).unwrap_or(false));
    let goal_fails = goal.is_none_or(|g| eval(m, theory, m.actual, g).is_ok_and(|v| !v));
    globals_hold && locals_hold && goal_fails
}

enum Found {
    Model(FiniteModel),
    None,
    Aborted,
}

/// Rejects bounds beyond what the theory can be searched up to.
fn check_bound(prep: &Prepared, max_worlds: usize) -> Result<(), FinderError> {
    let limit = world_limit(&prep.theory);
    if max_worlds > limit {
        return Err(FinderError::TooManyWorlds { requested: max_worlds, limit, theory: prep.theory.id });
    }
    Ok(())
}

fn search_at(
    prep: &Prepared,
    p: &Problem,
    goal: Option<&Formula>,
    n: usize,
    nodes_left: &mut Option<u64>,
) -> Result<Found, FinderError> {
    let limit = world_limit(&prep.theory);
    if n > limit {
        return Err(FinderError::TooManyWorlds { requested: n, limit, theory: prep.theory.id });
    }
    let mut search = Search::new(n, &prep.theory, &prep.tables, &prep.constraints, Mode::Lazy, *nodes_left);
    let mut found = None;
    search.run(&mut |m| {
        assert!(model_checks(&m, p, &prep.theory, goal), "finder produced a model that fails verification");
        found = Some(m);
        Outcome::Stop
    });
    if let Some(left) = nodes_left {
        *left = left.saturating_sub(search.nodes);
    }
    Ok(match found {
        Some(m) => Found::Model(m),
        None if search.aborted => Found::Aborted,
        None => Found::None,
    })
}

/// Searches for a model of `p` with `1..=b.max_worlds` worlds.
pub fn find_model(p: &Problem, b: &SearchBudget) -> Result<Verdict, FinderError> {
    let prep = prepare(p, None)?;
    check_bound(&prep, b.max_worlds)?;
    let mut nodes_left = b.node_limit;
    for n in 1..=b.max_worlds {
        match search_at(&prep, p, None, n, &mut nodes_left)? {
            Found::Model(model) => return Ok(Verdict::ModelFound { model, worlds: n }),
            Found::None => {}
            Found::Aborted => {
                return Ok(Verdict::NoModelUpTo { max_worlds: b.max_worlds, exhaustive: false })
            }
        }
    }
    Ok(Verdict::NoModelUpTo { max_worlds: b.max_worlds, exhaustive: true })
}

/// Searches for a model of `p` in which `goal` fails at the actual world.
pub fn check_entailment(p: &Problem, goal: &Formula, b: &SearchBudget) -> Result<Verdict, FinderError> {
    let prep = prepare(p, Some(goal))?;
    check_bound(&prep, b.max_worlds)?;
    let mut nodes_left = b.node_limit;
    for n in 1..=b.max_worlds {
        match search_at(&prep, p, Some(goal), n, &mut nodes_left)? {
            Found::Model(model) => return Ok(Verdict::Countermodel { model, goal: goal.clone() }),
            Found::None => {}
            Found::Aborted => {
                let spent = b.node_limit.unwrap_or(0);
                return Err(FinderError::BudgetExhausted { nodes: spent, worlds: n });
            }
        }
    }
    Ok(Verdict::BoundedValid { max_worlds: b.max_worlds })
}

/// Searches exactly `n` worlds: `Ok(Some(model))`, or `Ok(None)` when the
/// search space was exhausted. With a goal, the model refutes it.
pub fn search_cardinality(
    p: &Problem,
    goal: Option<&Formula>,
    n: usize,
    node_limit: Option<u64>,
) -> Result<Option<FiniteModel>, FinderError> {
    let prep = prepare(p, goal)?;
    let mut nodes_left = node_limit;
    match search_at(&prep, p, goal, n, &mut nodes_left)? {
        Found::Model(m) => Ok(Some(m)),
        Found::None => Ok(None),
        Found::Aborted => Err(FinderError::BudgetExhausted { nodes: node_limit.unwrap_or(0), worlds: n }),
    }
}

/// All models of `p` with exactly `n` worlds, up to `limit` of them, in
/// search order. Every item of the structure is decided: the valuation of
/// all signature atoms, relations, av/pv and ob of every tag, and stit
/// choices of the agents occurring under `stit`. With three or more worlds
/// only models whose non-actual worlds are sorted by valuation are listed.
pub fn enumerate_models(
    p: &Problem,
    n: usize,
    limit: Option<usize>,
    node_limit: Option<u64>,
) -> Result<Vec<FiniteModel>, FinderError> {
    let prep = prepare(p, None)?;
    let max = world_limit(&prep.theory);
    if n > max {
        return Err(FinderError::TooManyWorlds { requested: n, limit: max, theory: prep.theory.id });
    }
    let mut search =
        Search::new(n, &prep.theory, &prep.tables, &prep.constraints, Mode::Exhaustive, node_limit);
    let mut out = Vec::new();
    if limit == Some(0) {
        return Ok(out);
    }
    search.run(&mut |m| {
        assert!(model_checks(&m, p, &prep.theory, None), "enumerated model fails verification");
        out.push(m);
        if limit.is_some_and(|l| out.len() >= l) {
            Outcome::Stop
        } else {
            Outcome::Continue
        }
    });
    if search.aborted {
        return Err(FinderError::BudgetExhausted { nodes: search.nodes, worlds: n });
    }
    Ok(out)
}

/// Re-checks any model a verdict carries: frame conditions, assumptions
/// and, for countermodels, the failure of the goal.
pub fn verify(v: &Verdict, p: &Problem) -> bool {
    let theory = p.signature.theory_spec();
    match v {
        Verdict::ModelFound { model, worlds } => {
            model.worlds == *worlds && model_checks(model, p, &theory, None)
        }
        Verdict::Countermodel { model, goal } => model_checks(model, p, &theory, Some(goal)),
        Verdict::NoModelUpTo { .. } | Verdict::BoundedValid { .. } => true,
    }
}
