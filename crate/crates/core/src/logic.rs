//! Formula AST, signatures, theory identifiers and problems.
//!
//! Every other module consumes these types. Formulas are plain immutable
//! values with structural equality; there are no world-indexed terms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::theories::{builtin_theory, TheorySpec};

/// Words the concrete syntax reserves; none of them may name an atom or agent.
pub const RESERVED_WORDS: &[&str] = &[
    "true",
    "false",
    "stit",
    "theory",
    "atom",
    "agent",
    "global",
    "local",
    "query",
    "consistent",
    "entails",
    "expect",
    "without",
    "default",
    "av",
    "pv",
    "rel",
];

fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid {what} name `{name}`")]
pub struct InvalidName {
    pub what: &'static str,
    pub name: String,
}

macro_rules! name_type {
    ($(#[$meta:meta])* $ty:ident, $what:literal, $check:expr) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $ty(String);

        impl $ty {
            /// Builds the name, panicking on an invalid identifier. Use
            /// [`FromStr`] for fallible construction.
            pub fn new(name: &str) -> Self {
                name.parse().unwrap_or_else(|e| panic!("{e}"))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl FromStr for $ty {
            type Err = InvalidName;

            fn from_str(name: &str) -> Result<Self, Self::Err> {
                let check: fn(&str) -> bool = $check;
                if check(name) {
                    Ok($ty(name.to_string()))
                } else {
                    Err(InvalidName { what: $what, name: name.to_string() })
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $ty {
            fn from(name: &str) -> Self {
                $ty::new(name)
            }
        }
    };
}

name_type!(
    /// A propositional constant, `[a-z][a-z0-9_]*`.
    Atom,
    "atom",
    |s| is_atom_name(s) && !RESERVED_WORDS.contains(&s)
);
name_type!(
    /// An agent (or agent type) such as a provider or an importer.
    AgentId,
    "agent",
    |s| is_identifier(s) && !RESERVED_WORDS.contains(&s)
);
name_type!(
    /// A named accessibility relation declared by a theory.
    RelId,
    "relation",
    is_identifier
);

/// Multi-modal propositional formulas.
///
/// `Perm` and `Forb` are kept as constructors so encodings read like the
/// legal text, but they mean `~O ~f` and `O ~f`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    Prop(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// Truth at every world.
    Nec(Box<Formula>),
    /// Truth at some world.
    Poss(Box<Formula>),
    /// Box over a named relation.
    RelNec(RelId, Box<Formula>),
    /// Box over the actual versions of the current world.
    AvNec(Box<Formula>),
    /// Box over the potential versions of the current world.
    PvNec(Box<Formula>),
    Ob(Box<Formula>),
    Perm(Box<Formula>),
    Forb(Box<Formula>),
    /// `O{body | context}`.
    CondOb {
        body: Box<Formula>,
        context: Box<Formula>,
    },
    ActualOb(Box<Formula>),
    PrimaryOb(Box<Formula>),
    /// `O[agent] f`: unconditional obligation read against the agent's structures.
    AgentOb(AgentId, Box<Formula>),
    /// `O[agent]{body | context}`.
    AgentCondOb {
        agent: AgentId,
        body: Box<Formula>,
        context: Box<Formula>,
    },
    Stit(AgentId, Box<Formula>),
}

/// Operator kinds, used by theories to restrict the language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OpKind {
    True,
    False,
    Prop,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Nec,
    Poss,
    RelNec,
    AvNec,
    PvNec,
    Ob,
    Perm,
    Forb,
    CondOb,
    ActualOb,
    PrimaryOb,
    AgentOb,
    AgentCondOb,
    Stit,
}

impl OpKind {
    pub const BOOLEANS: [OpKind; 8] = [
        OpKind::True,
        OpKind::False,
        OpKind::Prop,
        OpKind::Not,
        OpKind::And,
        OpKind::Or,
        OpKind::Implies,
        OpKind::Iff,
    ];
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One argument position of a formula node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arg<'a> {
    Formula(&'a Formula),
    Agent(&'a AgentId),
    Rel(&'a RelId),
}

impl Formula {
    pub fn prop(name: &str) -> Formula {
        Formula::Prop(Atom::new(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn nec(f: Formula) -> Formula {
        Formula::Nec(Box::new(f))
    }

    pub fn poss(f: Formula) -> Formula {
        Formula::Poss(Box::new(f))
    }

    pub fn rel_nec(rel: &str, f: Formula) -> Formula {
        Formula::RelNec(RelId::new(rel), Box::new(f))
    }

    pub fn av_nec(f: Formula) -> Formula {
        Formula::AvNec(Box::new(f))
    }

    pub fn pv_nec(f: Formula) -> Formula {
        Formula::PvNec(Box::new(f))
    }

    pub fn ob(f: Formula) -> Formula {
        Formula::Ob(Box::new(f))
    }

    pub fn perm(f: Formula) -> Formula {
        Formula::Perm(Box::new(f))
    }

    pub fn forb(f: Formula) -> Formula {
        Formula::Forb(Box::new(f))
    }

    pub fn cond_ob(body: Formula, context: Formula) -> Formula {
        Formula::CondOb { body: Box::new(body), context: Box::new(context) }
    }

    pub fn actual_ob(f: Formula) -> Formula {
        Formula::ActualOb(Box::new(f))
    }

    pub fn primary_ob(f: Formula) -> Formula {
        Formula::PrimaryOb(Box::new(f))
    }

    pub fn agent_ob(agent: &str, f: Formula) -> Formula {
        Formula::AgentOb(AgentId::new(agent), Box::new(f))
    }

    pub fn agent_cond_ob(agent: &str, body: Formula, context: Formula) -> Formula {
        Formula::AgentCondOb { agent: AgentId::new(agent), body: Box::new(body), context: Box::new(context) }
    }

    pub fn stit(agent: &str, f: Formula) -> Formula {
        Formula::Stit(AgentId::new(agent), Box::new(f))
    }

    pub fn op_kind(&self) -> OpKind {
        match self {
            Formula::True => OpKind::True,
            Formula::False => OpKind::False,
            Formula::Prop(_) => OpKind::Prop,
            Formula::Not(_) => OpKind::Not,
            Formula::And(..) => OpKind::And,
            Formula::Or(..) => OpKind::Or,
            Formula::Implies(..) => OpKind::Implies,
            Formula::Iff(..) => OpKind::Iff,
            Formula::Nec(_) => OpKind::Nec,
            Formula::Poss(_) => OpKind::Poss,
            Formula::RelNec(..) => OpKind::RelNec,
            Formula::AvNec(_) => OpKind::AvNec,
            Formula::PvNec(_) => OpKind::PvNec,
            Formula::Ob(_) => OpKind::Ob,
            Formula::Perm(_) => OpKind::Perm,
            Formula::Forb(_) => OpKind::Forb,
            Formula::CondOb { .. } => OpKind::CondOb,
            Formula::ActualOb(_) => OpKind::ActualOb,
            Formula::PrimaryOb(_) => OpKind::PrimaryOb,
            Formula::AgentOb(..) => OpKind::AgentOb,
            Formula::AgentCondOb { .. } => OpKind::AgentCondOb,
            Formula::Stit(..) => OpKind::Stit,
        }
    }

    /// Argument slots in order. Symbol slots (agents, relations) count as
    /// positions, so diagnostic paths can point at them.
    pub fn args(&self) -> Vec<Arg<'_>> {
        use Formula::*;
        match self {
            True | False | Prop(_) => vec![],
            Not(f) | Nec(f) | Poss(f) | AvNec(f) | PvNec(f) | Ob(f) | Perm(f) | Forb(f) | ActualOb(f)
            | PrimaryOb(f) => vec![Arg::Formula(f)],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                vec![Arg::Formula(a), Arg::Formula(b)]
            }
            CondOb { body, context } => vec![Arg::Formula(body), Arg::Formula(context)],
            RelNec(r, f) => vec![Arg::Rel(r), Arg::Formula(f)],
            AgentOb(a, f) | Stit(a, f) => vec![Arg::Agent(a), Arg::Formula(f)],
            AgentCondOb { agent, body, context } => {
                vec![Arg::Agent(agent), Arg::Formula(body), Arg::Formula(context)]
            }
        }
    }

    /// Direct subformulas in argument order.
    pub fn children(&self) -> impl Iterator<Item = &Formula> {
        self.args().into_iter().filter_map(|a| match a {
            Arg::Formula(f) => Some(f),
            _ => None,
        })
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().map(Formula::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().map(Formula::depth).max().unwrap_or(0)
    }

    /// Every operator kind occurring in the formula.
    pub fn operators(&self) -> BTreeSet<OpKind> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.insert(f.op_kind());
            stack.extend(f.children());
        }
        out
    }

    /// Agents occurring in the formula (in `O[a]` or `stit(a, .)`).
    pub fn agents(&self) -> BTreeSet<AgentId> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::AgentOb(a, _) | Formula::Stit(a, _) => {
                out.insert(a.clone());
            }
            Formula::AgentCondOb { agent, .. } => {
                out.insert(agent.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }
}

/// Exactly the atoms occurring in `f`.
pub fn free_atoms(f: &Formula) -> BTreeSet<Atom> {
    let mut out = BTreeSet::new();
    f.visit(&mut |g| {
        if let Formula::Prop(a) = g {
            out.insert(a.clone());
        }
    });
    out
}

/// All distinct subformulas of `f`, children before parents.
pub fn subformula_closure(f: &Formula) -> Vec<Formula> {
    fn go(f: &Formula, seen: &mut BTreeSet<Formula>, out: &mut Vec<Formula>) {
        for c in f.children() {
            go(c, seen, out);
        }
        if seen.insert(f.clone()) {
            out.push(f.clone());
        }
    }
    let mut out = Vec::new();
    go(f, &mut BTreeSet::new(), &mut out);
    out
}

/// The built-in logics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoryId {
    /// Standard deontic logic (KD).
    Sdl,
    /// Carmo-Jones dyadic deontic logic.
    Cjddl,
    /// DDL with one structure set per agent constant, plus stit.
    Xddl1,
    /// DDL with agent-parameterised structures, plus stit.
    Xddl2,
    /// Temporal deontic STIT frame theory.
    Tds,
}

impl TheoryId {
    pub const ALL: [TheoryId; 5] =
        [TheoryId::Sdl, TheoryId::Cjddl, TheoryId::Xddl1, TheoryId::Xddl2, TheoryId::Tds];

    pub fn keyword(self) -> &'static str {
        match self {
            TheoryId::Sdl => "sdl",
            TheoryId::Cjddl => "cjddl",
            TheoryId::Xddl1 => "xddl1",
            TheoryId::Xddl2 => "xddl2",
            TheoryId::Tds => "tds",
        }
    }

    /// Whether the theory is built on the Carmo-Jones ob function.
    pub fn is_dyadic(self) -> bool {
        matches!(self, TheoryId::Cjddl | TheoryId::Xddl1 | TheoryId::Xddl2)
    }
}

impl fmt::Display for TheoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for TheoryId {
    type Err = InvalidName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoryId::ALL
            .into_iter()
            .find(|t| t.keyword() == s)
            .ok_or_else(|| InvalidName { what: "theory", name: s.to_string() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("atom `{0}` declared twice")]
    DuplicateAtom(Atom),
    #[error("agent `{0}` declared twice")]
    DuplicateAgent(AgentId),
    #[error("`{0}` declared both as atom and as agent")]
    AtomAgentClash(String),
}

/// Declared atoms and agents (in declaration order) and the governing theory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    atoms: Vec<Atom>,
    agents: Vec<AgentId>,
    pub theory: TheoryId,
}

impl Signature {
    pub fn new(theory: TheoryId) -> Self {
        Signature { atoms: Vec::new(), agents: Vec::new(), theory }
    }

    pub fn with_atoms(theory: TheoryId, atoms: &[&str]) -> Self {
        let mut sig = Signature::new(theory);
        for a in atoms {
            sig.add_atom(Atom::new(a)).expect("distinct atoms");
        }
        sig
    }

    pub fn add_atom(&mut self, atom: Atom) -> Result<(), SignatureError> {
        if self.atoms.contains(&atom) {
            return Err(SignatureError::DuplicateAtom(atom));
        }
        if self.agents.iter().any(|a| a.as_str() == atom.as_str()) {
            return Err(SignatureError::AtomAgentClash(atom.as_str().to_string()));
        }
        self.atoms.push(atom);
        Ok(())
    }

    pub fn add_agent(&mut self, agent: AgentId) -> Result<(), SignatureError> {
        if self.agents.contains(&agent) {
            return Err(SignatureError::DuplicateAgent(agent));
        }
        if self.atoms.iter().any(|a| a.as_str() == agent.as_str()) {
            return Err(SignatureError::AtomAgentClash(agent.as_str().to_string()));
        }
        self.agents.push(agent);
        Ok(())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn has_atom(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn has_agent(&self, agent: &AgentId) -> bool {
        self.agents.contains(agent)
    }

    /// The theory spec governing this signature, extended with the declared
    /// agents where the theory is agent-parameterised.
    pub fn theory_spec(&self) -> TheorySpec {
        builtin_theory(self.theory).with_agents(&self.agents)
    }
}

/// Why a formula is not well formed, with the path (argument positions from
/// the root) of the offending node or symbol slot.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WellFormednessError {
    #[error("undeclared {kind} `{name}` at path {path:?}")]
    UndeclaredSymbol { kind: &'static str, name: String, path: Vec<usize> },
    #[error("operator {op} is not part of theory {theory} (at path {path:?})")]
    OperatorNotInTheory { op: OpKind, theory: TheoryId, path: Vec<usize> },
}

impl WellFormednessError {
    pub fn path(&self) -> &[usize] {
        match self {
            WellFormednessError::UndeclaredSymbol { path, .. }
            | WellFormednessError::OperatorNotInTheory { path, .. } => path,
        }
    }
}

/// Checks symbol declarations and the operator set of `sig.theory`.
pub fn well_formed(f: &Formula, sig: &Signature) -> Result<(), Vec<WellFormednessError>> {
    well_formed_in(f, sig, &sig.theory_spec())
}

/// As [`well_formed`], against an explicit theory spec.
pub fn well_formed_in(
    f: &Formula,
    sig: &Signature,
    theory: &TheorySpec,
) -> Result<(), Vec<WellFormednessError>> {
    let mut errors = Vec::new();
    check_node(f, sig, theory, &mut Vec::new(), &mut errors);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn check_node(
    f: &Formula,
    sig: &Signature,
    theory: &TheorySpec,
    path: &mut Vec<usize>,
    errors: &mut Vec<WellFormednessError>,
) {
    let op = f.op_kind();
    if !theory.operators.contains(&op) {
        errors.push(WellFormednessError::OperatorNotInTheory { op, theory: theory.id, path: path.clone() });
    }
    if let Formula::Prop(a) = f {
        if !sig.has_atom(a) {
            errors.push(WellFormednessError::UndeclaredSymbol {
                kind: "atom",
                name: a.to_string(),
                path: path.clone(),
            });
        }
    }
    for (i, arg) in f.args().into_iter().enumerate() {
        path.push(i);
        match arg {
            Arg::Formula(g) => check_node(g, sig, theory, path, errors),
            Arg::Agent(a) => {
                if !sig.has_agent(a) {
                    errors.push(WellFormednessError::UndeclaredSymbol {
                        kind: "agent",
                        name: a.to_string(),
                        path: path.clone(),
                    });
                }
            }
            Arg::Rel(r) => {
                if theory.relation(r).is_none() {
                    errors.push(WellFormednessError::UndeclaredSymbol {
                        kind: "relation",
                        name: r.to_string(),
                        path: path.clone(),
                    });
                }
            }
        }
        path.pop();
    }
}

/// A labelled assumption.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axiom {
    pub label: String,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum QueryKind {
    Consistent,
    Entails(Formula),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub label: String,
    pub kind: QueryKind,
    /// Local assumptions set aside for this query.
    #[serde(default)]
    pub without: Vec<String>,
    /// Expected verdict tag, e.g. `BoundedValid`; informational for suites.
    pub expected: Option<String>,
}

/// Global assumptions hold at every world, local ones at the actual world.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub signature: Signature,
    pub globals: Vec<Axiom>,
    pub locals: Vec<Axiom>,
    pub queries: Vec<Query>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("label `{0}` used twice")]
    DuplicateLabel(String),
    #[error("`{label}`: {error}")]
    IllFormed { label: String, error: WellFormednessError },
    #[error("query `{query}` sets aside `{label}`, which is not a local assumption")]
    UnknownLocal { query: String, label: String },
}

impl Problem {
    pub fn new(signature: Signature) -> Self {
        Problem { signature, globals: Vec::new(), locals: Vec::new(), queries: Vec::new() }
    }

    pub fn theory(&self) -> TheoryId {
        self.signature.theory
    }

    pub fn query(&self, label: &str) -> Option<&Query> {
        self.queries.iter().find(|q| q.label == label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.globals
            .iter()
            .chain(&self.locals)
            .map(|a| a.label.as_str())
            .chain(self.queries.iter().map(|q| q.label.as_str()))
    }

    /// All formulas of the problem: assumptions and query goals.
    pub fn formulas(&self) -> impl Iterator<Item = (&str, &Formula)> {
        self.globals.iter().chain(&self.locals).map(|a| (a.label.as_str(), &a.formula)).chain(
            self.queries.iter().filter_map(|q| match &q.kind {
                QueryKind::Entails(g) => Some((q.label.as_str(), g)),
                QueryKind::Consistent => None,
            }),
        )
    }

    /// Label uniqueness and well-formedness of every formula.
    pub fn validate(&self) -> Result<(), Vec<ProblemError>> {
        let mut errors = Vec::new();
        let mut seen = BTreeSet::new();
        for label in self.labels() {
            if !seen.insert(label) {
                errors.push(ProblemError::DuplicateLabel(label.to_string()));
            }
        }
        for q in &self.queries {
            for label in &q.without {
                if !self.locals.iter().any(|a| &a.label == label) {
                    errors.push(ProblemError::UnknownLocal { query: q.label.clone(), label: label.clone() });
                }
            }
        }
        let theory = self.signature.theory_spec();
        for (label, f) in self.formulas() {
            if let Err(es) = well_formed_in(f, &self.signature, &theory) {
                errors.extend(
                    es.into_iter().map(|error| ProblemError::IllFormed { label: label.to_string(), error }),
                );
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    /// A copy with the given local assumption removed.
    pub fn without_local(&self, label: &str) -> Problem {
        let mut p = self.clone();
        p.locals.retain(|a| a.label != label);
        p
    }

    /// The assumptions a query is asked against: all globals and the locals
    /// it does not set aside. The result holds that query alone.
    pub fn for_query(&self, q: &Query) -> Problem {
        let mut p = self.clone();
        p.locals.retain(|a| !q.without.contains(&a.label));
        p.queries = vec![Query { without: Vec::new(), ..q.clone() }];
        p
    }
}
