//! Random formulas, problems and frames.

use deon::{
    AgentId, AgentTag, Atom, Axiom, FiniteModel, Formula, OpKind, Problem, RelId, Signature, TheoryId,
    TheorySpec, WorldSet,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// Atom names used by generated problems, in declaration order.
pub const ATOM_NAMES: [&str; 4] = ["p", "q", "r", "s"];

/// Draws formulas over one signature using the operators of its theory.
#[derive(Debug, Clone)]
pub struct FormulaGen {
    atoms: Vec<Atom>,
    agents: Vec<AgentId>,
    relations: Vec<RelId>,
    ops: Vec<OpKind>,
}

impl FormulaGen {
    pub fn new(sig: &Signature) -> Self {
        let theory = sig.theory_spec();
        let agents = sig.agents().to_vec();
        let ops = theory
            .operators
            .iter()
            .copied()
            .filter(|op| !matches!(op, OpKind::True | OpKind::False | OpKind::Prop))
            .filter(|op| {
                !matches!(op, OpKind::AgentOb | OpKind::AgentCondOb | OpKind::Stit) || !agents.is_empty()
            })
            .collect();
        FormulaGen {
            atoms: sig.atoms().to_vec(),
            agents,
            relations: theory.relations.iter().map(|r| r.name.clone()).collect(),
            ops,
        }
    }

    /// Restricts the operators drawn at inner nodes.
    pub fn with_ops(mut self, ops: &[OpKind]) -> Self {
        self.ops.retain(|op| ops.contains(op));
        self
    }

    fn leaf<R: Rng>(&self, rng: &mut R) -> Formula {
        if self.atoms.is_empty() || rng.gen_ratio(1, 8) {
            if rng.gen() {
                Formula::True
            } else {
                Formula::False
            }
        } else {
            Formula::Prop(self.atoms.choose(rng).expect("atoms are nonempty").clone())
        }
    }

    /// A formula of depth at most `depth`.
    pub fn formula<R: Rng>(&self, rng: &mut R, depth: usize) -> Formula {
        if depth == 0 || self.ops.is_empty() || rng.gen_ratio(1, 4) {
            return self.leaf(rng);
        }
        let op = *self.ops.choose(rng).expect("ops are nonempty");
        let mut sub = || Box::new(self.formula(rng, depth - 1));
        match op {
            OpKind::Not => Formula::Not(sub()),
            OpKind::And => Formula::And(sub(), sub()),
            OpKind::Or => Formula::Or(sub(), sub()),
            OpKind::Implies => Formula::Implies(sub(), sub()),
            OpKind::Iff => Formula::Iff(sub(), sub()),
            OpKind::Nec => Formula::Nec(sub()),
            OpKind::Poss => Formula::Poss(sub()),
            OpKind::AvNec => Formula::AvNec(sub()),
            OpKind::PvNec => Formula::PvNec(sub()),
            OpKind::Ob => Formula::Ob(sub()),
            OpKind::Perm => Formula::Perm(sub()),
            OpKind::Forb => Formula::Forb(sub()),
            OpKind::CondOb => Formula::CondOb { body: sub(), context: sub() },
            OpKind::ActualOb => Formula::ActualOb(sub()),
            OpKind::PrimaryOb => Formula::PrimaryOb(sub()),
            OpKind::RelNec => {
                let body = sub();
                Formula::RelNec(self.relations.choose(rng).expect("theory has relations").clone(), body)
            }
            OpKind::AgentOb => {
                let body = sub();
                Formula::AgentOb(self.agents.choose(rng).expect("agents are nonempty").clone(), body)
            }
            OpKind::AgentCondOb => {
                let (body, context) = (sub(), sub());
                let agent = self.agents.choose(rng).expect("agents are nonempty").clone();
                Formula::AgentCondOb { agent, body, context }
            }
            OpKind::Stit => {
                let body = sub();
                Formula::Stit(self.agents.choose(rng).expect("agents are nonempty").clone(), body)
            }
            OpKind::True | OpKind::False | OpKind::Prop => unreachable!("leaves are not drawn here"),
        }
    }
}

/// A signature over the first `atoms` names of [`ATOM_NAMES`].
pub fn signature(theory: TheoryId, atoms: usize, agents: &[&str]) -> Signature {
    let mut sig = Signature::with_atoms(theory, &ATOM_NAMES[..atoms]);
    for a in agents {
        sig.add_agent(AgentId::new(a)).expect("fresh agent");
    }
    sig
}

/// A problem with up to `max_axioms` assumptions, each global or local at
/// random, and no queries.
pub fn random_problem<R: Rng>(rng: &mut R, sig: &Signature, max_axioms: usize, depth: usize) -> Problem {
    let gen = FormulaGen::new(sig);
    let mut p = Problem::new(sig.clone());
    for i in 0..rng.gen_range(0..=max_axioms) {
        let formula = gen.formula(rng, depth);
        if rng.gen() {
            p.globals.push(Axiom { label: format!("G{i}"), formula });
        } else {
            p.locals.push(Axiom { label: format!("L{i}"), formula });
        }
    }
    p
}

fn random_set<R: Rng>(rng: &mut R, n: usize) -> WorldSet {
    WorldSet(rng.gen_range(0..1u64 << n))
}

fn random_subset<R: Rng>(rng: &mut R, of: WorldSet) -> WorldSet {
    WorldSet::from_worlds(of.iter().filter(|_| rng.gen()))
}

/// Closes a set of (context, core) seeds under ob3, ob4 and ob5.
pub fn close_cores(n: usize, seeds: &[(WorldSet, WorldSet)]) -> Vec<(WorldSet, WorldSet)> {
    let all = WorldSet::full(n);
    let mut have: std::collections::BTreeSet<(u64, u64)> = std::collections::BTreeSet::new();
    let mut work: Vec<(u64, u64)> = seeds
        .iter()
        .filter(|(_, c)| !c.is_empty())
        .map(|(x, c)| (x.bits(), c.intersect(*x).bits()))
        .filter(|(_, c)| *c != 0)
        .collect();
    while let Some((x, c)) = work.pop() {
        if !have.insert((x, c)) {
            continue;
        }
        let same: Vec<u64> = have.iter().filter(|(x2, _)| *x2 == x).map(|(_, c2)| *c2).collect();
        for c2 in same {
            if c & c2 != 0 {
                work.push((x, c & c2));
            }
        }
        for z in 0..=all.bits() {
            if x & !z == 0 && z != x {
                work.push((z, (z & !x) | c));
            }
            if z & !x == 0 && z != x && z & c != 0 {
                work.push((z, z & c));
            }
        }
    }
    have.into_iter().map(|(x, c)| (WorldSet(x), WorldSet(c))).collect()
}

/// A random structure for `theory` with `n` worlds over `atoms`. The
/// av/pv rows and ob cores always satisfy the CJ conditions; one `stit`
/// entry in twenty ignores the success condition, so callers filter with
/// `check_frame` when they need frames.
pub fn random_frame<R: Rng>(rng: &mut R, theory: &TheorySpec, n: usize, atoms: &[Atom]) -> FiniteModel {
    let mut m = FiniteModel::skeleton(theory, n);
    m.actual = rng.gen_range(0..n);
    for a in atoms {
        m.valuation.insert(a.clone(), random_set(rng, n));
    }
    for rows in m.relations.values_mut() {
        for row in rows.iter_mut() {
            *row = random_set(rng, n);
        }
    }
    for tag in &theory.agent_tags {
        let mut av = Vec::with_capacity(n);
        let mut pv = Vec::with_capacity(n);
        for w in 0..n {
            let p = random_set(rng, n).with(w);
            let mut a = random_subset(rng, p);
            if a.is_empty() {
                a = WorldSet::singleton(*p.iter().collect::<Vec<_>>().choose(rng).expect("pv is nonempty"));
            }
            av.push(a);
            pv.push(p);
        }
        m.av.insert(tag.clone(), av);
        m.pv.insert(tag.clone(), pv);
        let seeds: Vec<(WorldSet, WorldSet)> =
            (0..rng.gen_range(0..=3)).map(|_| (random_set(rng, n), random_set(rng, n))).collect();
        for (x, c) in close_cores(n, &seeds) {
            m.add_core(tag, x, c);
        }
    }
    if theory.has_stit() {
        for agent in theory.agent_tags.iter().filter_map(|t| match t {
            AgentTag::Agent(a) => Some(a.clone()),
            AgentTag::Default => None,
        }) {
            for prop in 0..1u64 << n {
                let prop = WorldSet(prop);
                let choice = if rng.gen_ratio(1, 20) { random_set(rng, n) } else { random_subset(rng, prop) };
                m.stit.insert((agent.clone(), prop), choice);
            }
        }
    }
    m
}
