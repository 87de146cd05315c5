//! Finite structures and the formula evaluator.
//!
//! A [`FiniteModel`] carries every structure any built-in theory can use;
//! a theory only looks at the parts it declares. The ob function is stored
//! in core form: for a context `X` only subsets of `X` are stored, and an
//! arbitrary `Y` is obligatory in `X` iff `Y ∩ X` is a stored core.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{AgentId, Atom, Formula, OpKind, Problem, RelId, TheoryId};
use crate::theories::{RelRole, TheorySpec};

/// Upper bound on the number of worlds a model may have.
pub const MAX_WORLDS: usize = 64;

/// A set of worlds `0..n` as a bit set.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WorldSet(pub u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn full(n: usize) -> WorldSet {
        assert!(n <= MAX_WORLDS, "at most {MAX_WORLDS} worlds");
        if n == 64 {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(w: usize) -> WorldSet {
        WorldSet(1u64 << w)
    }

    pub fn from_worlds<I: IntoIterator<Item = usize>>(worlds: I) -> WorldSet {
        worlds.into_iter().fold(WorldSet::EMPTY, |s, w| s.with(w))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, w: usize) -> bool {
        w < 64 && self.0 & (1u64 << w) != 0
    }

    pub fn with(self, w: usize) -> WorldSet {
        WorldSet(self.0 | (1u64 << w))
    }

    pub fn without(self, w: usize) -> WorldSet {
        WorldSet(self.0 & !(1u64 << w))
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersect(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn minus(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & !other.0)
    }

    /// Complement relative to `0..n`.
    pub fn complement(self, n: usize) -> WorldSet {
        WorldSet::full(n).minus(self)
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w)
            }
        })
    }

    /// All subsets of `self`, in increasing numeric order.
    pub fn subsets(self) -> impl Iterator<Item = WorldSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
            Some(WorldSet(cur))
        })
    }

    /// All supersets of `self` within `within`, in increasing numeric order.
    pub fn supersets_within(self, within: WorldSet) -> impl Iterator<Item = WorldSet> {
        let base = self.0;
        within.minus(self).subsets().map(move |extra| WorldSet(base | extra.0))
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, w) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("}")
    }
}

/// Which structure family an operator reads: the non-agentive one or an
/// agent's own.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AgentTag {
    Default,
    Agent(AgentId),
}

impl AgentTag {
    pub fn agent(name: &str) -> AgentTag {
        AgentTag::Agent(AgentId::new(name))
    }

    pub fn key(&self) -> &str {
        match self {
            AgentTag::Default => "default",
            AgentTag::Agent(a) => a.as_str(),
        }
    }

    pub fn from_key(key: &str) -> Option<AgentTag> {
        if key == "default" {
            Some(AgentTag::Default)
        } else {
            key.parse().ok().map(AgentTag::Agent)
        }
    }
}

impl fmt::Display for AgentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Cores per context.
pub type ObFunction = BTreeMap<WorldSet, BTreeSet<WorldSet>>;

/// A finite structure over worlds `0..worlds`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    pub worlds: usize,
    pub actual: usize,
    /// Atoms missing from the map are false everywhere.
    pub valuation: BTreeMap<Atom, WorldSet>,
    /// Successor set of every world, per stored relation.
    pub relations: BTreeMap<RelId, Vec<WorldSet>>,
    pub av: BTreeMap<AgentTag, Vec<WorldSet>>,
    pub pv: BTreeMap<AgentTag, Vec<WorldSet>>,
    pub ob: BTreeMap<AgentTag, ObFunction>,
    /// Chosen worlds per (agent, proposition); missing entries choose the
    /// whole proposition.
    pub stit: BTreeMap<(AgentId, WorldSet), WorldSet>,
}

impl FiniteModel {
    /// A bare model with no structure at all.
    pub fn new(worlds: usize) -> Self {
        assert!((1..=MAX_WORLDS).contains(&worlds), "world count must be in 1..={MAX_WORLDS}");
        FiniteModel {
            worlds,
            actual: 0,
            valuation: BTreeMap::new(),
            relations: BTreeMap::new(),
            av: BTreeMap::new(),
            pv: BTreeMap::new(),
            ob: BTreeMap::new(),
            stit: BTreeMap::new(),
        }
    }

    /// A model with the structure `theory` declares, filled with the least
    /// choices: empty relations, `av(w) = pv(w) = {w}` and no cores.
    pub fn skeleton(theory: &TheorySpec, worlds: usize) -> Self {
        let mut m = FiniteModel::new(worlds);
        for rel in theory.stored_relations() {
            m.relations.insert(rel.clone(), vec![WorldSet::EMPTY; worlds]);
        }
        for tag in &theory.agent_tags {
            let points: Vec<_> = (0..worlds).map(WorldSet::singleton).collect();
            m.av.insert(tag.clone(), points.clone());
            m.pv.insert(tag.clone(), points);
            m.ob.insert(tag.clone(), ObFunction::new());
        }
        m
    }

    pub fn all(&self) -> WorldSet {
        WorldSet::full(self.worlds)
    }

    pub fn truth_set(&self, atom: &Atom) -> WorldSet {
        self.valuation.get(atom).copied().unwrap_or_default()
    }

    pub fn set_true(&mut self, atom: &str, worlds: &[usize]) -> &mut Self {
        self.valuation.insert(Atom::new(atom), WorldSet::from_worlds(worlds.iter().copied()));
        self
    }

    pub fn set_relation(&mut self, rel: &str, pairs: &[(usize, usize)]) -> &mut Self {
        let mut rows = vec![WorldSet::EMPTY; self.worlds];
        for &(a, b) in pairs {
            rows[a] = rows[a].with(b);
        }
        self.relations.insert(RelId::new(rel), rows);
        self
    }

    pub fn relation_pairs(&self, rel: &RelId) -> Vec<(usize, usize)> {
        self.relations
            .get(rel)
            .map(|rows| rows.iter().enumerate().flat_map(|(w, s)| s.iter().map(move |v| (w, v))).collect())
            .unwrap_or_default()
    }

    pub fn add_core(&mut self, tag: &AgentTag, context: WorldSet, core: WorldSet) -> &mut Self {
        self.ob.entry(tag.clone()).or_default().entry(context).or_default().insert(core);
        self
    }

    pub fn cores(&self, tag: &AgentTag, context: WorldSet) -> impl Iterator<Item = WorldSet> + '_ {
        self.ob.get(tag).and_then(|ob| ob.get(&context)).into_iter().flatten().copied()
    }

    /// `Y ∈ ob(X)` under the core representation.
    pub fn obligatory(&self, tag: &AgentTag, context: WorldSet, y: WorldSet) -> bool {
        let core = y.intersect(context);
        self.ob.get(tag).and_then(|ob| ob.get(&context)).is_some_and(|cs| cs.contains(&core))
    }

    pub fn stit_choice(&self, agent: &AgentId, prop: WorldSet) -> WorldSet {
        self.stit.get(&(agent.clone(), prop)).copied().unwrap_or(prop)
    }

    /// Drops empty entries so structurally equal models compare equal.
    pub fn normalize(&mut self) {
        self.valuation.retain(|_, s| !s.is_empty());
        for ob in self.ob.values_mut() {
            ob.retain(|_, cores| !cores.is_empty());
        }
        self.stit.retain(|(_, prop), choice| choice != prop);
    }

    fn check_world(&self, w: usize) -> Result<(), EvalError> {
        if w < self.worlds {
            Ok(())
        } else {
            Err(EvalError::IndexOutOfRange { world: w, worlds: self.worlds })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("operator {op} is not supported by theory {theory}")]
    UnsupportedOperator { op: OpKind, theory: TheoryId },
    #[error("world {world} out of range for a model with {worlds} worlds")]
    IndexOutOfRange { world: usize, worlds: usize },
    #[error("model lacks structure: {0}")]
    MissingStructure(String),
}

/// Truth of `f` at world `w`.
pub fn eval(m: &FiniteModel, theory: &TheorySpec, w: usize, f: &Formula) -> Result<bool, EvalError> {
    m.check_world(w)?;
    m.check_world(m.actual)?;
    Ok(extension(m, theory, f)?.contains(w))
}

/// The set of worlds where `f` holds.
pub fn extension(m: &FiniteModel, theory: &TheorySpec, f: &Formula) -> Result<WorldSet, EvalError> {
    Evaluator { m, theory }.ext(f)
}

struct Evaluator<'a> {
    m: &'a FiniteModel,
    theory: &'a TheorySpec,
}

impl Evaluator<'_> {
    fn all(&self) -> WorldSet {
        self.m.all()
    }

    fn per_world(&self, mut holds: impl FnMut(usize) -> bool) -> WorldSet {
        WorldSet::from_worlds((0..self.m.worlds).filter(|&w| holds(w)))
    }

    fn everywhere_if(&self, b: bool) -> WorldSet {
        if b {
            self.all()
        } else {
            WorldSet::EMPTY
        }
    }

    fn rows(&self, rel: &RelId) -> Result<Vec<WorldSet>, EvalError> {
        let decl = self
            .theory
            .relation(rel)
            .ok_or_else(|| EvalError::MissingStructure(format!("relation {rel}")))?;
        let stored = |name: &RelId| {
            self.m
                .relations
                .get(name)
                .cloned()
                .ok_or_else(|| EvalError::MissingStructure(format!("relation {name}")))
        };
        match &decl.role {
            RelRole::Stored => stored(rel),
            RelRole::ConverseOf(base) => Ok(converse(&stored(base)?)),
        }
    }

    fn av_rows(&self, tag: &AgentTag) -> Result<&Vec<WorldSet>, EvalError> {
        self.m.av.get(tag).ok_or_else(|| EvalError::MissingStructure(format!("av for {tag}")))
    }

    fn pv_rows(&self, tag: &AgentTag) -> Result<&Vec<WorldSet>, EvalError> {
        self.m.pv.get(tag).ok_or_else(|| EvalError::MissingStructure(format!("pv for {tag}")))
    }

    fn box_over(&self, rows: &[WorldSet], inner: WorldSet) -> WorldSet {
        self.per_world(|w| rows[w].is_subset(inner))
    }

    fn cond(&self, tag: &AgentTag, body: &Formula, context: &Formula) -> Result<WorldSet, EvalError> {
        let x = self.ext(context)?;
        let b = self.ext(body)?;
        Ok(self.everywhere_if(self.m.obligatory(tag, x, b)))
    }

    /// Actual/primary obligation against the version sets `rows`.
    fn versioned(&self, rows: &[WorldSet], body: &Formula) -> Result<WorldSet, EvalError> {
        let b = self.ext(body)?;
        let nonvacuous = self.theory.actual_ob_nonvacuous;
        Ok(self.per_world(|w| {
            let y = rows[w];
            self.m.obligatory(&AgentTag::Default, y, b) && (!nonvacuous || !y.is_subset(b))
        }))
    }

    fn ext(&self, f: &Formula) -> Result<WorldSet, EvalError> {
        use Formula::*;
        let op = f.op_kind();
        if !self.theory.operators.contains(&op) {
            return Err(EvalError::UnsupportedOperator { op, theory: self.theory.id });
        }
        let n = self.m.worlds;
        Ok(match f {
            True => self.all(),
            False => WorldSet::EMPTY,
            Prop(a) => self.m.truth_set(a).intersect(self.all()),
            Not(g) => self.ext(g)?.complement(n),
            And(a, b) => self.ext(a)?.intersect(self.ext(b)?),
            Or(a, b) => self.ext(a)?.union(self.ext(b)?),
            Implies(a, b) => self.ext(a)?.complement(n).union(self.ext(b)?),
            Iff(a, b) => {
                let (x, y) = (self.ext(a)?, self.ext(b)?);
                x.intersect(y).union(x.union(y).complement(n))
            }
            Nec(g) => self.everywhere_if(self.ext(g)? == self.all()),
            Poss(g) => self.everywhere_if(!self.ext(g)?.is_empty()),
            RelNec(r, g) => {
                let rows = self.rows(r)?;
                self.box_over(&rows, self.ext(g)?)
            }
            AvNec(g) => self.box_over(self.av_rows(&AgentTag::Default)?, self.ext(g)?),
            PvNec(g) => self.box_over(self.pv_rows(&AgentTag::Default)?, self.ext(g)?),
            Ob(g) => self.ob(g)?,
            Perm(g) => self.ob(&Formula::not((**g).clone()))?.complement(n),
            Forb(g) => self.ob(&Formula::not((**g).clone()))?,
            CondOb { body, context } => self.cond(&AgentTag::Default, body, context)?,
            ActualOb(g) => {
                let rows = self.av_rows(&AgentTag::Default)?.clone();
                self.versioned(&rows, g)?
            }
            PrimaryOb(g) => {
                let rows = self.pv_rows(&AgentTag::Default)?.clone();
                self.versioned(&rows, g)?
            }
            AgentOb(a, g) => self.cond(&AgentTag::Agent(a.clone()), g, &Formula::True)?,
            AgentCondOb { agent, body, context } => {
                self.cond(&AgentTag::Agent(agent.clone()), body, context)?
            }
            Stit(a, g) => {
                let prop = self.ext(g)?;
                self.m.stit_choice(a, prop).intersect(self.all())
            }
        })
    }

    /// Monadic obligation: a box over `R` in SDL, `O{f | true}` in the dyadic logics.
    fn ob(&self, g: &Formula) -> Result<WorldSet, EvalError> {
        if self.theory.id.is_dyadic() {
            self.cond(&AgentTag::Default, g, &Formula::True)
        } else {
            let rows = self.rows(&RelId::new("R"))?;
            Ok(self.box_over(&rows, self.ext(g)?))
        }
    }
}

pub(crate) fn converse(rows: &[WorldSet]) -> Vec<WorldSet> {
    let mut out = vec![WorldSet::EMPTY; rows.len()];
    for (w, succ) in rows.iter().enumerate() {
        for v in succ.iter() {
            out[v] = out[v].with(w);
        }
    }
    out
}

/// A failed frame condition together with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: String,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated: {}", self.condition, self.witness)
    }
}

/// Every violated frame condition of `theory` in `m`; empty iff `m` is a
/// frame of the theory. Missing structure is itself reported as a violation.
pub fn check_frame(m: &FiniteModel, theory: &TheorySpec) -> Vec<Violation> {
    let mut out = Vec::new();
    if m.actual >= m.worlds {
        out.push(Violation {
            condition: "ActualWorld".into(),
            witness: format!("actual world {} out of range", m.actual),
        });
    }
    for c in &theory.conditions {
        match c.violations(m) {
            Ok(vs) => out.extend(vs),
            Err(missing) => out.push(Violation { condition: c.name.clone(), witness: missing.to_string() }),
        }
    }
    out
}

/// Every global holds at every world and every local at the actual world.
pub fn verify_problem(m: &FiniteModel, p: &Problem) -> bool {
    let theory = p.signature.theory_spec();
    verify_against(m, p, &theory).unwrap_or(false)
}

pub(crate) fn verify_against(m: &FiniteModel, p: &Problem, theory: &TheorySpec) -> Result<bool, EvalError> {
    for g in &p.globals {
        if extension(m, theory, &g.formula)? != m.all() {
            return Ok(false);
        }
    }
    for l in &p.locals {
        if !eval(m, theory, m.actual, &l.formula)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theories::builtin_theory;

    fn p() -> Formula {
        Formula::prop("p")
    }

    fn sdl_two_worlds() -> FiniteModel {
        let mut m = FiniteModel::new(2);
        m.set_relation("R", &[(0, 1), (1, 1)]).set_true("p", &[1]);
        m
    }

    #[test]
    fn true_holds_everywhere() {
        let th = builtin_theory(TheoryId::Sdl);
        let m = sdl_two_worlds();
        for w in 0..2 {
            assert!(eval(&m, &th, w, &Formula::True).unwrap());
        }
    }

    #[test]
    fn sdl_obligation_over_successors() {
        let th = builtin_theory(TheoryId::Sdl);
        let m = sdl_two_worlds();
        assert!(eval(&m, &th, 0, &Formula::ob(p())).unwrap());
        assert!(!eval(&m, &th, 0, &Formula::ob(Formula::not(p()))).unwrap());
        assert!(eval(&m, &th, 0, &Formula::perm(p())).unwrap());
        assert!(eval(&m, &th, 0, &Formula::forb(Formula::not(p()))).unwrap());
    }

    #[test]
    fn core_membership_decides_conditional_obligation() {
        let th = builtin_theory(TheoryId::Cjddl);
        let mut m = FiniteModel::skeleton(&th, 2);
        m.set_true("p", &[1]);
        m.add_core(&AgentTag::Default, WorldSet::full(2), WorldSet::singleton(1));
        assert!(eval(&m, &th, 0, &Formula::cond_ob(p(), Formula::True)).unwrap());
        assert!(!eval(&m, &th, 0, &Formula::cond_ob(Formula::not(p()), Formula::True)).unwrap());
        // monadic O is O{. | true} in the dyadic logics
        assert!(eval(&m, &th, 1, &Formula::ob(p())).unwrap());
    }

    #[test]
    fn extension_laws() {
        let th = builtin_theory(TheoryId::Cjddl);
        let mut m = FiniteModel::skeleton(&th, 3);
        m.set_true("p", &[0, 2]).set_true("q", &[2]);
        let q = Formula::prop("q");
        assert_eq!(extension(&m, &th, &Formula::False).unwrap(), WorldSet::EMPTY);
        let ep = extension(&m, &th, &p()).unwrap();
        assert_eq!(extension(&m, &th, &Formula::not(p())).unwrap(), ep.complement(3));
        let eq = extension(&m, &th, &q).unwrap();
        assert_eq!(extension(&m, &th, &Formula::and(p(), q)).unwrap(), ep.intersect(eq));
    }

    #[test]
    fn out_of_range_world_is_an_error() {
        let th = builtin_theory(TheoryId::Sdl);
        let m = sdl_two_worlds();
        assert!(matches!(eval(&m, &th, 5, &p()), Err(EvalError::IndexOutOfRange { .. })));
    }

    #[test]
    fn operator_outside_theory_is_rejected() {
        let th = builtin_theory(TheoryId::Sdl);
        let m = sdl_two_worlds();
        let err = eval(&m, &th, 0, &Formula::cond_ob(p(), p())).unwrap_err();
        assert!(matches!(err, EvalError::UnsupportedOperator { op: OpKind::CondOb, .. }));
    }

    #[test]
    fn actual_obligation_needs_a_violating_version() {
        let mut th = builtin_theory(TheoryId::Cjddl);
        let mut m = FiniteModel::skeleton(&th, 2);
        m.set_true("p", &[0]);
        m.av.insert(AgentTag::Default, vec![WorldSet::singleton(0), WorldSet::singleton(1)]);
        m.add_core(&AgentTag::Default, WorldSet::singleton(0), WorldSet::singleton(0));
        let oa = Formula::actual_ob(p());
        assert!(!eval(&m, &th, 0, &oa).unwrap());
        th.actual_ob_nonvacuous = false;
        assert!(eval(&m, &th, 0, &oa).unwrap());
    }

    #[test]
    fn stit_defaults_to_the_whole_proposition() {
        let th = builtin_theory(TheoryId::Xddl1);
        let mut m = FiniteModel::skeleton(&th, 2);
        m.set_true("p", &[0, 1]);
        let f = Formula::stit("d", p());
        assert_eq!(extension(&m, &th, &f).unwrap(), WorldSet::full(2));
        m.stit.insert((AgentId::new("d"), WorldSet::full(2)), WorldSet::singleton(1));
        assert_eq!(extension(&m, &th, &f).unwrap(), WorldSet::singleton(1));
    }

    #[test]
    fn seriality_checks() {
        let th = builtin_theory(TheoryId::Sdl);
        let mut m = FiniteModel::new(1);
        m.set_relation("R", &[(0, 0)]);
        assert!(check_frame(&m, &th).is_empty());
        m.set_relation("R", &[]);
        let vs = check_frame(&m, &th);
        assert_eq!(vs.len(), 1);
        assert_eq!(vs[0].condition, "Serial(R)");
        assert!(vs[0].witness.contains("world 0"));
    }

    #[test]
    fn empty_core_violates_ob1() {
        let th = builtin_theory(TheoryId::Cjddl);
        let mut m = FiniteModel::skeleton(&th, 1);
        m.add_core(&AgentTag::Default, WorldSet::full(1), WorldSet::EMPTY);
        let vs = check_frame(&m, &th);
        assert!(vs.iter().any(|v| v.condition == "Ob1(default)" && v.witness.contains("{0}")));
    }

    #[test]
    fn verify_problem_examples() {
        use crate::logic::{Axiom, Signature};
        let th = builtin_theory(TheoryId::Cjddl);
        let mut m = FiniteModel::skeleton(&th, 2);
        m.set_true("p", &[0, 1]).set_true("comply", &[0]);
        let mut prob = Problem::new(Signature::with_atoms(TheoryId::Cjddl, &["p", "comply"]));
        assert!(verify_problem(&m, &prob));
        prob.globals.push(Axiom { label: "G".into(), formula: Formula::nec(p()) });
        assert!(verify_problem(&m, &prob));
        prob.locals.push(Axiom { label: "F".into(), formula: Formula::not(Formula::prop("comply")) });
        assert!(!verify_problem(&m, &prob));
    }

    #[test]
    fn subset_enumeration() {
        let s = WorldSet::from_worlds([0, 2]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs, vec![WorldSet(0), WorldSet(1), WorldSet(4), WorldSet(5)]);
        let sups: Vec<_> = WorldSet::singleton(1).supersets_within(WorldSet::full(3)).collect();
        assert_eq!(sups, vec![WorldSet(2), WorldSet(3), WorldSet(6), WorldSet(7)]);
    }
}
