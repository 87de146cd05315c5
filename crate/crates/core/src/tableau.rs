//! Labelled tableau prover for SDL (KD) with global and local assumptions.
//!
//! Branches hold signed formulas on world labels. Boolean rules run before
//! modal ones; every new label receives the global assumptions, and a label
//! whose formulas are contained in an earlier unblocked label's is blocked.
//! Closed tableaux come back as a replayable [`ProofObject`]; a saturated
//! open branch yields a finite countermodel.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{well_formed_in, Formula, Problem, TheoryId};
use crate::semantics::{check_frame, eval, verify_problem, FiniteModel, WorldSet, MAX_WORLDS};
use crate::theories::builtin_theory;

/// Rule applications allowed per call unless a limit is given.
pub const DEFAULT_STEP_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    T,
    F,
}

impl Sign {
    fn flip(self) -> Sign {
        match self {
            Sign::T => Sign::F,
            Sign::F => Sign::T,
        }
    }
}

/// A signed formula at a world label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TableauNode {
    pub label: usize,
    pub sign: Sign,
    pub formula: Formula,
}

impl TableauNode {
    pub fn new(label: usize, sign: Sign, formula: Formula) -> Self {
        TableauNode { label, sign, formula }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    NotT,
    NotF,
    AndT,
    AndF,
    OrT,
    OrF,
    ImpliesT,
    ImpliesF,
    IffT,
    IffF,
    PermT,
    PermF,
    ForbT,
    ForbF,
    /// `T O h` at a label puts `T h` on an existing successor.
    ObT,
    /// `F O g` at a label creates a successor carrying `F g`.
    ObF,
    /// A label with obligations and no successor gets one.
    Serial,
}

/// A successor label created by [`Rule::ObF`] or [`Rule::Serial`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewWorld {
    pub from: usize,
    pub label: usize,
}

/// One non-branching rule application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: Rule,
    pub premise: Option<TableauNode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub world: Option<NewWorld>,
    pub added: Vec<TableauNode>,
}

/// A run of steps on one branch and how the branch ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub steps: Vec<Step>,
    pub end: End,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum End {
    /// The two nodes clash, or the single node is `T false` / `F true`.
    Closed { clash: Vec<TableauNode> },
    /// One subtree per alternative, in rule order.
    Split { rule: Rule, premise: TableauNode, branches: Vec<Branch> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub added: Vec<TableauNode>,
    pub tree: Segment,
}

/// A closed tableau: the initial nodes at label 0 and the rule tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofObject {
    pub initial: Vec<TableauNode>,
    pub tree: Segment,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableauVerdict {
    Proof(ProofObject),
    Refuted(FiniteModel),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("the tableau prover handles sdl only, not {0}")]
    NotSdl(TheoryId),
    #[error("{0}")]
    IllFormed(String),
    #[error("resource limit reached after {steps} rule applications and {labels} world labels")]
    ResourceLimit { steps: u64, labels: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("initial nodes do not match the problem and goal")]
    InitialMismatch,
    #[error("premise {0:?} is not on the branch")]
    MissingPremise(TableauNode),
    #[error("{rule:?} does not produce {added:?} from {premise:?}")]
    BadConclusion { rule: Rule, premise: Option<TableauNode>, added: Vec<TableauNode> },
    #[error("{0:?} is not a clash on the branch")]
    NotAClash(Vec<TableauNode>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Signed {
    sign: Sign,
    formula: Formula,
}

enum Shape {
    Alpha(Rule, Vec<Signed>),
    Beta(Rule, Vec<Vec<Signed>>),
    Other,
}

fn s(sign: Sign, formula: &Formula) -> Signed {
    Signed { sign, formula: formula.clone() }
}

fn shape(sf: &Signed) -> Shape {
    use Sign::{F, T};
    let neg = |g: &Formula| Formula::not(g.clone());
    let ob = |g: Formula| Formula::ob(g);
    match (sf.sign, &sf.formula) {
        (T, Formula::Not(g)) => Shape::Alpha(Rule::NotT, vec![s(F, g)]),
        (F, Formula::Not(g)) => Shape::Alpha(Rule::NotF, vec![s(T, g)]),
        (T, Formula::And(a, b)) => Shape::Alpha(Rule::AndT, vec![s(T, a), s(T, b)]),
        (F, Formula::And(a, b)) => Shape::Beta(Rule::AndF, vec![vec![s(F, a)], vec![s(F, b)]]),
        (T, Formula::Or(a, b)) => Shape::Beta(Rule::OrT, vec![vec![s(T, a)], vec![s(T, b)]]),
        (F, Formula::Or(a, b)) => Shape::Alpha(Rule::OrF, vec![s(F, a), s(F, b)]),
        (T, Formula::Implies(a, b)) => Shape::Beta(Rule::ImpliesT, vec![vec![s(F, a)], vec![s(T, b)]]),
        (F, Formula::Implies(a, b)) => Shape::Alpha(Rule::ImpliesF, vec![s(T, a), s(F, b)]),
        (T, Formula::Iff(a, b)) => {
            Shape::Beta(Rule::IffT, vec![vec![s(T, a), s(T, b)], vec![s(F, a), s(F, b)]])
        }
        (F, Formula::Iff(a, b)) => {
            Shape::Beta(Rule::IffF, vec![vec![s(T, a), s(F, b)], vec![s(F, a), s(T, b)]])
        }
        (T, Formula::Perm(g)) => Shape::Alpha(Rule::PermT, vec![s(F, &ob(neg(g)))]),
        (F, Formula::Perm(g)) => Shape::Alpha(Rule::PermF, vec![s(T, &ob(neg(g)))]),
        (T, Formula::Forb(g)) => Shape::Alpha(Rule::ForbT, vec![s(T, &ob(neg(g)))]),
        (F, Formula::Forb(g)) => Shape::Alpha(Rule::ForbF, vec![s(F, &ob(neg(g)))]),
        _ => Shape::Other,
    }
}

fn is_closed_single(sf: &Signed) -> bool {
    matches!((sf.sign, &sf.formula), (Sign::T, Formula::False) | (Sign::F, Formula::True))
}

fn at(label: usize, sfs: &[Signed]) -> Vec<TableauNode> {
    sfs.iter().map(|sf| TableauNode::new(label, sf.sign, sf.formula.clone())).collect()
}

fn unlabel(n: &TableauNode) -> Signed {
    Signed { sign: n.sign, formula: n.formula.clone() }
}

#[derive(Debug, Clone)]
struct State {
    sets: Vec<BTreeSet<Signed>>,
    done: Vec<BTreeSet<Signed>>,
    children: Vec<Vec<usize>>,
}

impl State {
    fn new() -> Self {
        State { sets: Vec::new(), done: Vec::new(), children: Vec::new() }
    }

    fn add_label(&mut self) -> usize {
        self.sets.push(BTreeSet::new());
        self.done.push(BTreeSet::new());
        self.children.push(Vec::new());
        self.sets.len() - 1
    }

    fn contains(&self, n: &TableauNode) -> bool {
        self.sets.get(n.label).is_some_and(|set| set.contains(&unlabel(n)))
    }

    fn add(&mut self, nodes: &[TableauNode]) {
        for n in nodes {
            self.sets[n.label].insert(unlabel(n));
        }
    }

    fn ob_bodies(&self, w: usize) -> Vec<Formula> {
        self.sets[w]
            .iter()
            .filter_map(|sf| match (sf.sign, &sf.formula) {
                (Sign::T, Formula::Ob(h)) => Some((**h).clone()),
                _ => None,
            })
            .collect()
    }

    fn clash(&self) -> Option<Vec<TableauNode>> {
        for (w, set) in self.sets.iter().enumerate() {
            for sf in set {
                if is_closed_single(sf) {
                    return Some(vec![TableauNode::new(w, sf.sign, sf.formula.clone())]);
                }
                if sf.sign == Sign::T && set.contains(&s(Sign::F, &sf.formula)) {
                    return Some(vec![
                        TableauNode::new(w, Sign::T, sf.formula.clone()),
                        TableauNode::new(w, Sign::F, sf.formula.clone()),
                    ]);
                }
            }
        }
        None
    }

    /// For each label, the earlier unblocked label whose formulas contain
    /// its own, if any.
    fn blockers(&self) -> Vec<Option<usize>> {
        let mut out: Vec<Option<usize>> = Vec::with_capacity(self.sets.len());
        for v in 0..self.sets.len() {
            let b = (0..v).find(|&u| out[u].is_none() && self.sets[v].is_subset(&self.sets[u]));
            out.push(b);
        }
        out
    }
}

enum Next {
    Step(Step),
    Split(Rule, TableauNode, Vec<Vec<TableauNode>>),
    Saturated,
}

struct Prover<'a> {
    globals: &'a [Formula],
    steps: u64,
    limit: u64,
}

enum Run {
    Closed(Segment),
    Open(State),
}

impl Prover<'_> {
    fn new_world(&self, st: &mut State, from: usize, first: Option<Signed>) -> (NewWorld, Vec<TableauNode>) {
        let v = st.add_label();
        st.children[from].push(v);
        let mut sfs: Vec<Signed> = first.into_iter().collect();
        sfs.extend(st.ob_bodies(from).iter().map(|h| s(Sign::T, h)));
        sfs.extend(self.globals.iter().map(|g| s(Sign::T, g)));
        let added = at(v, &sfs);
        st.add(&added);
        (NewWorld { from, label: v }, added)
    }

    fn next(&self, st: &mut State) -> Next {
        let mut beta = None;
        for w in 0..st.sets.len() {
            for sf in &st.sets[w] {
                if st.done[w].contains(sf) {
                    continue;
                }
                match shape(sf) {
                    Shape::Alpha(rule, concl) => {
                        let premise = TableauNode::new(w, sf.sign, sf.formula.clone());
                        let sf = sf.clone();
                        st.done[w].insert(sf);
                        let added = at(w, &concl);
                        st.add(&added);
                        return Next::Step(Step { rule, premise: Some(premise), world: None, added });
                    }
                    Shape::Beta(rule, alts) if beta.is_none() => beta = Some((w, sf.clone(), rule, alts)),
                    _ => {}
                }
            }
        }
        if let Some((w, sf, rule, alts)) = beta {
            st.done[w].insert(sf.clone());
            if alts.iter().any(|alt| alt.iter().all(|x| st.sets[w].contains(x))) {
                return self.next(st);
            }
            let premise = TableauNode::new(w, sf.sign, sf.formula);
            return Next::Split(rule, premise, alts.iter().map(|alt| at(w, alt)).collect());
        }
        let blockers = st.blockers();
        for w in (0..st.sets.len()).filter(|&w| blockers[w].is_none()) {
            for body in st.ob_bodies(w) {
                let target =
                    st.children[w].iter().copied().find(|&v| !st.sets[v].contains(&s(Sign::T, &body)));
                if let Some(v) = target {
                    let added = vec![TableauNode::new(v, Sign::T, body.clone())];
                    st.add(&added);
                    let premise = TableauNode::new(w, Sign::T, Formula::ob(body));
                    return Next::Step(Step { rule: Rule::ObT, premise: Some(premise), world: None, added });
                }
            }
            let pending = st.sets[w].iter().find(|sf| {
                sf.sign == Sign::F && matches!(sf.formula, Formula::Ob(_)) && !st.done[w].contains(sf)
            });
            if let Some(sf) = pending.cloned() {
                st.done[w].insert(sf.clone());
                let Formula::Ob(g) = &sf.formula else { unreachable!() };
                let (world, added) = self.new_world(st, w, Some(s(Sign::F, g)));
                let premise = TableauNode::new(w, Sign::F, sf.formula.clone());
                return Next::Step(Step {
                    rule: Rule::ObF,
                    premise: Some(premise),
                    world: Some(world),
                    added,
                });
            }
            if st.children[w].is_empty() {
                if let Some(h) = st.ob_bodies(w).into_iter().next() {
                    let premise = TableauNode::new(w, Sign::T, Formula::ob(h));
                    let (world, added) = self.new_world(st, w, None);
                    return Next::Step(Step {
                        rule: Rule::Serial,
                        premise: Some(premise),
                        world: Some(world),
                        added,
                    });
                }
            }
        }
        Next::Saturated
    }

    fn run(&mut self, mut st: State) -> Result<Run, TableauError> {
        let mut steps = Vec::new();
        loop {
            if let Some(clash) = st.clash() {
                return Ok(Run::Closed(Segment { steps, end: End::Closed { clash } }));
            }
            self.steps += 1;
            if self.steps > self.limit || st.sets.len() > MAX_WORLDS {
                return Err(TableauError::ResourceLimit { steps: self.steps - 1, labels: st.sets.len() });
            }
            match self.next(&mut st) {
                Next::Step(step) => steps.push(step),
                Next::Split(rule, premise, alts) => {
                    let mut branches = Vec::with_capacity(alts.len());
                    for added in alts {
                        let mut child = st.clone();
                        child.add(&added);
                        match self.run(child)? {
                            Run::Closed(tree) => branches.push(Branch { added, tree }),
                            open => return Ok(open),
                        }
                    }
                    return Ok(Run::Closed(Segment { steps, end: End::Split { rule, premise, branches } }));
                }
                Next::Saturated => return Ok(Run::Open(st)),
            }
        }
    }
}

fn initial_nodes(p: &Problem, goal: &Formula) -> Vec<TableauNode> {
    let mut out: Vec<TableauNode> =
        p.globals.iter().chain(&p.locals).map(|a| TableauNode::new(0, Sign::T, a.formula.clone())).collect();
    out.push(TableauNode::new(0, Sign::F, goal.clone()));
    out
}

fn check_input(p: &Problem, goal: &Formula) -> Result<(), TableauError> {
    if p.theory() != TheoryId::Sdl {
        return Err(TableauError::NotSdl(p.theory()));
    }
    if let Err(errors) = p.validate() {
        let msgs: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
        return Err(TableauError::IllFormed(msgs.join("; ")));
    }
    let theory = builtin_theory(TheoryId::Sdl);
    if let Err(errors) = well_formed_in(goal, &p.signature, &theory) {
        let msgs: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
        return Err(TableauError::IllFormed(msgs.join("; ")));
    }
    Ok(())
}

/// Decides whether `goal` holds at the actual world of every serial model
/// where the globals hold everywhere and the locals at the actual world.
pub fn prove_sdl(p: &Problem, goal: &Formula) -> Result<TableauVerdict, TableauError> {
    prove_sdl_with_limit(p, goal, DEFAULT_STEP_LIMIT)
}

pub fn prove_sdl_with_limit(p: &Problem, goal: &Formula, limit: u64) -> Result<TableauVerdict, TableauError> {
    check_input(p, goal)?;
    let globals: Vec<Formula> = p.globals.iter().map(|a| a.formula.clone()).collect();
    let initial = initial_nodes(p, goal);
    let mut st = State::new();
    st.add_label();
    st.add(&initial);
    let mut prover = Prover { globals: &globals, steps: 0, limit };
    match prover.run(st)? {
        Run::Closed(tree) => Ok(TableauVerdict::Proof(ProofObject { initial, tree, steps: prover.steps })),
        Run::Open(st) => {
            let m = extract(&st, p);
            let theory = builtin_theory(TheoryId::Sdl);
            assert!(
                check_frame(&m, &theory).is_empty()
                    && verify_problem(&m, p)
                    && eval(&m, &theory, m.actual, goal).is_ok_and(|v| !v),
                "open branch model fails verification"
            );
            Ok(TableauVerdict::Refuted(m))
        }
    }
}

/// Unblocked labels become worlds; an edge to a blocked label goes to its
/// blocker, and a world without successors sees itself.
fn extract(st: &State, p: &Problem) -> FiniteModel {
    let blockers = st.blockers();
    let worlds: Vec<usize> = (0..st.sets.len()).filter(|&w| blockers[w].is_none()).collect();
    let index = |label: usize| {
        let rep = blockers[label].unwrap_or(label);
        worlds.binary_search(&rep).expect("blockers are unblocked")
    };
    let mut m = FiniteModel::skeleton(&builtin_theory(TheoryId::Sdl), worlds.len());
    let rows = m.relations.values_mut().next().expect("sdl has one relation");
    for (i, &w) in worlds.iter().enumerate() {
        let succ = WorldSet::from_worlds(st.children[w].iter().map(|&v| index(v)));
        rows[i] = if succ.is_empty() { WorldSet::singleton(i) } else { succ };
    }
    for atom in p.signature.atoms() {
        let prop = s(Sign::T, &Formula::Prop(atom.clone()));
        let truth = WorldSet::from_worlds((0..worlds.len()).filter(|&i| st.sets[worlds[i]].contains(&prop)));
        m.valuation.insert(atom.clone(), truth);
    }
    m
}

/// Re-checks a proof against the problem: every step must be a correct
/// rule application to nodes on its branch and every leaf a clash.
pub fn replay(p: &Problem, goal: &Formula, proof: &ProofObject) -> Result<(), ReplayError> {
    let expected: BTreeSet<TableauNode> = initial_nodes(p, goal).into_iter().collect();
    let given: BTreeSet<TableauNode> = proof.initial.iter().cloned().collect();
    if expected != given {
        return Err(ReplayError::InitialMismatch);
    }
    let globals: Vec<Signed> = p.globals.iter().map(|a| s(Sign::T, &a.formula)).collect();
    let mut st = State::new();
    st.add_label();
    st.add(&proof.initial);
    replay_segment(st, &proof.tree, &globals)
}

fn replay_segment(mut st: State, seg: &Segment, globals: &[Signed]) -> Result<(), ReplayError> {
    for step in &seg.steps {
        replay_step(&mut st, step, globals)?;
    }
    match &seg.end {
        End::Closed { clash } => {
            let ok = match clash.as_slice() {
                [n] => st.contains(n) && is_closed_single(&unlabel(n)),
                [a, b] => {
                    st.contains(a)
                        && st.contains(b)
                        && a.label == b.label
                        && a.formula == b.formula
                        && a.sign == b.sign.flip()
                }
                _ => false,
            };
            if ok {
                Ok(())
            } else {
                Err(ReplayError::NotAClash(clash.clone()))
            }
        }
        End::Split { rule, premise, branches } => {
            if !st.contains(premise) {
                return Err(ReplayError::MissingPremise(premise.clone()));
            }
            let alts = match shape(&unlabel(premise)) {
                Shape::Beta(r, alts) if r == *rule => alts,
                _ => Vec::new(),
            };
            let given: Vec<Vec<TableauNode>> = branches.iter().map(|b| b.added.clone()).collect();
            let wanted: Vec<Vec<TableauNode>> = alts.iter().map(|alt| at(premise.label, alt)).collect();
            if alts.is_empty() || given != wanted {
                return Err(ReplayError::BadConclusion {
                    rule: *rule,
                    premise: Some(premise.clone()),
                    added: given.concat(),
                });
            }
            for b in branches {
                let mut child = st.clone();
                child.add(&b.added);
                replay_segment(child, &b.tree, globals)?;
            }
            Ok(())
        }
    }
}

fn replay_step(st: &mut State, step: &Step, globals: &[Signed]) -> Result<(), ReplayError> {
    let bad = || ReplayError::BadConclusion {
        rule: step.rule,
        premise: step.premise.clone(),
        added: step.added.clone(),
    };
    let premise = step.premise.as_ref().ok_or_else(bad)?;
    if !st.contains(premise) {
        return Err(ReplayError::MissingPremise(premise.clone()));
    }
    let body = match (premise.sign, &premise.formula) {
        (_, Formula::Ob(g)) => Some((**g).clone()),
        _ => None,
    };
    match step.rule {
        Rule::ObT => {
            let (Some(h), Sign::T, [n]) = (body, premise.sign, step.added.as_slice()) else {
                return Err(bad());
            };
            if !st.children[premise.label].contains(&n.label) || n.sign != Sign::T || n.formula != h {
                return Err(bad());
            }
        }
        Rule::ObF | Rule::Serial => {
            let (Some(g), Some(world)) = (body, step.world) else { return Err(bad()) };
            let from = premise.label;
            if world.from != from || world.label != st.sets.len() {
                return Err(bad());
            }
            let wanted_sign = if step.rule == Rule::ObF { Sign::F } else { Sign::T };
            if premise.sign != wanted_sign {
                return Err(bad());
            }
            let bodies: Vec<Signed> = st.ob_bodies(from).iter().map(|h| s(Sign::T, h)).collect();
            let allowed = |n: &TableauNode| {
                let sf = unlabel(n);
                n.label == world.label && (bodies.contains(&sf) || globals.contains(&sf))
            };
            let mut rest = step.added.iter();
            if step.rule == Rule::ObF {
                let first = rest.next().ok_or_else(bad)?;
                if first.label != world.label || unlabel(first) != s(Sign::F, &g) {
                    return Err(bad());
                }
            }
            if !rest.all(allowed) {
                return Err(bad());
            }
            let v = st.add_label();
            st.children[from].push(v);
        }
        rule => match shape(&unlabel(premise)) {
            Shape::Alpha(r, concl) if r == rule && at(premise.label, &concl) == step.added => {}
            _ => return Err(bad()),
        },
    }
    st.add(&step.added);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Axiom, Signature};

    fn problem(atoms: &[&str], globals: &[Formula], locals: &[Formula]) -> Problem {
        let mut p = Problem::new(Signature::with_atoms(TheoryId::Sdl, atoms));
        let ax = |prefix: &str, fs: &[Formula]| -> Vec<Axiom> {
            fs.iter()
                .enumerate()
                .map(|(i, f)| Axiom { label: format!("{prefix}{i}"), formula: f.clone() })
                .collect()
        };
        p.globals = ax("G", globals);
        p.locals = ax("L", locals);
        p
    }

    fn p() -> Formula {
        Formula::prop("p")
    }

    #[test]
    fn local_fact_proves_itself() {
        let pr = problem(&["p"], &[], &[p()]);
        let TableauVerdict::Proof(proof) = prove_sdl(&pr, &p()).unwrap() else { panic!("expected proof") };
        assert!(matches!(proof.tree.end, End::Closed { .. }));
        assert!(proof.tree.steps.is_empty());
        replay(&pr, &p(), &proof).unwrap();
    }

    #[test]
    fn d_axiom_needs_seriality() {
        let pr = problem(&["p"], &[], &[]);
        let goal = Formula::implies(Formula::ob(p()), Formula::perm(p()));
        let TableauVerdict::Proof(proof) = prove_sdl(&pr, &goal).unwrap() else { panic!("expected proof") };
        replay(&pr, &goal, &proof).unwrap();
        let json = serde_json::to_string(&proof).unwrap();
        let back: ProofObject = serde_json::from_str(&json).unwrap();
        assert_eq!(back, proof);
    }

    #[test]
    fn ob_p_does_not_give_p() {
        let pr = problem(&["p"], &[], &[Formula::ob(p())]);
        let TableauVerdict::Refuted(m) = prove_sdl(&pr, &p()).unwrap() else {
            panic!("expected countermodel")
        };
        assert!(verify_problem(&m, &pr));
    }

    #[test]
    fn global_obligation_loops_are_blocked() {
        // every world needs a successor where p holds and another where it fails
        let pr = problem(&["p"], &[Formula::and(Formula::perm(p()), Formula::perm(Formula::not(p())))], &[]);
        let TableauVerdict::Refuted(m) = prove_sdl(&pr, &Formula::False).unwrap() else { panic!() };
        assert!(m.worlds <= 3);
    }

    #[test]
    fn tampered_proofs_are_rejected() {
        let pr = problem(&["p"], &[], &[]);
        let goal = Formula::implies(Formula::ob(p()), Formula::perm(p()));
        let TableauVerdict::Proof(mut proof) = prove_sdl(&pr, &goal).unwrap() else { panic!() };
        proof.tree.steps.pop();
        assert!(replay(&pr, &goal, &proof).is_err());
        let other = Formula::implies(Formula::ob(p()), p());
        let TableauVerdict::Proof(proof) = prove_sdl(&pr, &goal).unwrap() else { panic!() };
        assert_eq!(replay(&pr, &other, &proof), Err(ReplayError::InitialMismatch));
    }

    #[test]
    fn limits_and_theories_are_enforced() {
        let pr = problem(&["p"], &[Formula::and(Formula::perm(p()), Formula::perm(Formula::not(p())))], &[]);
        assert!(matches!(
            prove_sdl_with_limit(&pr, &Formula::False, 3),
            Err(TableauError::ResourceLimit { .. })
        ));
        let dyadic = Problem::new(Signature::with_atoms(TheoryId::Cjddl, &["p"]));
        assert_eq!(prove_sdl(&dyadic, &p()), Err(TableauError::NotSdl(TheoryId::Cjddl)));
    }
}
