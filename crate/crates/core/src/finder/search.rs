//! Backtracking search for models of one fixed cardinality.
//!
//! Relations are fixed first, row by row. The rest of the structure is left
//! open and evaluated three-valued: a formula's extension is bracketed by
//! the worlds where it holds in every completion (`lo`) and in some
//! completion (`hi`). A constraint that is not yet decided names an open
//! item it depends on, and the search branches on exactly that item. Once
//! every constraint holds in every completion, the open items take their
//! least values and the result is a model.
//!
//! In exhaustive mode every item is decided in a fixed order instead, which
//! enumerates each model (up to the valuation ordering of non-actual worlds)
//! exactly once.

use std::collections::BTreeMap;

use super::ir::{Node, Tables};
use super::ob::ObState;
use crate::logic::AgentId;
use crate::semantics::{FiniteModel, WorldSet};
use crate::theories::{ConditionKind, TheorySpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Scope {
    /// Must hold at every world.
    Global,
    /// Must hold at the actual world (world 0).
    Local,
}

#[derive(Debug, Clone)]
pub(crate) struct Constraint {
    pub scope: Scope,
    pub node: Node,
}

#[derive(Debug, Clone, Copy)]
struct Tri {
    lo: WorldSet,
    hi: WorldSet,
}

impl Tri {
    fn exact(s: WorldSet) -> Tri {
        Tri { lo: s, hi: s }
    }

    fn unknown(&self) -> WorldSet {
        self.hi.minus(self.lo)
    }

    fn is_exact_on(&self, x: WorldSet) -> bool {
        self.unknown().intersect(x).is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Item {
    Atom(usize, usize),
    Av(usize, usize),
    Pv(usize, usize),
    Ob(usize, WorldSet, WorldSet),
    Stit(AgentId, WorldSet),
}

#[derive(Debug, Clone)]
struct State {
    atom_true: Vec<WorldSet>,
    atom_false: Vec<WorldSet>,
    av: Vec<Vec<Option<WorldSet>>>,
    pv: Vec<Vec<Option<WorldSet>>>,
    ob: Vec<ObState>,
    stit: BTreeMap<(AgentId, WorldSet), WorldSet>,
}

pub(crate) enum Outcome {
    Stop,
    Continue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Branch only on items some constraint depends on.
    Lazy,
    /// Decide every item, for enumeration.
    Exhaustive,
}

pub(crate) struct Search<'a> {
    n: usize,
    all: WorldSet,
    theory: &'a TheorySpec,
    tables: &'a Tables,
    constraints: &'a [Constraint],
    mode: Mode,
    rows: Vec<Vec<WorldSet>>,
    converse: Vec<Vec<WorldSet>>,
    /// Exhaustive-mode item order, excluding relations.
    order: Vec<Item>,
    pub nodes: u64,
    node_limit: Option<u64>,
    pub aborted: bool,
}

impl<'a> Search<'a> {
    pub fn new(
        n: usize,
        theory: &'a TheorySpec,
        tables: &'a Tables,
        constraints: &'a [Constraint],
        mode: Mode,
        node_limit: Option<u64>,
    ) -> Self {
        let mut stit_agents = Vec::new();
        for c in constraints {
            c.node.stit_agents(&mut stit_agents);
        }
        let all = WorldSet::full(n);
        let mut order = Vec::new();
        if mode == Mode::Exhaustive {
            for k in 0..tables.atoms.len() {
                order.extend((0..n).map(|w| Item::Atom(k, w)));
            }
            for t in 0..tables.tags.len() {
                order.extend((0..n).map(|w| Item::Av(t, w)));
                order.extend((0..n).map(|w| Item::Pv(t, w)));
            }
            for t in 0..tables.tags.len() {
                for x in all.subsets() {
                    order.extend(x.subsets().skip(1).map(|c| Item::Ob(t, x, c)));
                }
            }
            for a in &stit_agents {
                order.extend(all.subsets().map(|s| Item::Stit(a.clone(), s)));
            }
        }
        Search {
            n,
            all,
            theory,
            tables,
            constraints,
            mode,
            rows: tables.relations.iter().map(|_| vec![WorldSet::EMPTY; n]).collect(),
            converse: Vec::new(),
            order,
            nodes: 0,
            node_limit,
            aborted: false,
        }
    }

    /// Runs the search, handing every model found to `visit` until it
    /// returns `Stop`.
    pub fn run(&mut self, visit: &mut dyn FnMut(FiniteModel) -> Outcome) {
        let state = State {
            atom_true: vec![WorldSet::EMPTY; self.tables.atoms.len()],
            atom_false: vec![WorldSet::EMPTY; self.tables.atoms.len()],
            av: vec![vec![None; self.n]; self.tables.tags.len()],
            pv: vec![vec![None; self.n]; self.tables.tags.len()],
            ob: (0..self.tables.tags.len()).map(|_| ObState::new(self.n)).collect(),
            stit: BTreeMap::new(),
        };
        self.relations(0, 0, &state, visit);
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.node_limit.is_some_and(|l| self.nodes > l) {
            self.aborted = true;
        }
        !self.aborted
    }

    fn relation_conditions(&self, rel: usize) -> impl Iterator<Item = &ConditionKind> {
        let name = &self.tables.relations[rel];
        self.theory.conditions.iter().map(|c| &c.kind).filter(move |k| k.relation() == Some(name))
    }

    /// Fixes relation `rel` row by row, starting at row `w`.
    fn relations(
        &mut self,
        rel: usize,
        w: usize,
        state: &State,
        visit: &mut dyn FnMut(FiniteModel) -> Outcome,
    ) -> bool {
        if rel == self.rows.len() {
            self.converse = self.rows.iter().map(|r| crate::semantics::converse(r)).collect();
            return self.dfs(state, visit);
        }
        if w == self.n {
            let complete = self.relation_conditions(rel).all(|k| k.holds_on_rows(&self.rows[rel]));
            return !complete || self.relations(rel + 1, 0, state, visit);
        }
        for row in self.all.subsets() {
            if !self.relation_conditions(rel).all(|k| k.row_admissible(w, row)) {
                continue;
            }
            if !self.tick() {
                return false;
            }
            self.rows[rel][w] = row;
            if !self.relations(rel, w + 1, state, visit) {
                return false;
            }
        }
        true
    }

    /// Returns false to stop the whole search.
    fn dfs(&mut self, state: &State, visit: &mut dyn FnMut(FiniteModel) -> Outcome) -> bool {
        if !self.tick() {
            return false;
        }
        let mut pending = None;
        for c in self.constraints {
            let t = self.tri(state, &c.node);
            let (need, ok, possible) = match c.scope {
                Scope::Global => (self.all, t.lo == self.all, t.hi == self.all),
                Scope::Local => (WorldSet::singleton(0), t.lo.contains(0), t.hi.contains(0)),
            };
            if !possible {
                return true;
            }
            if !ok && pending.is_none() && self.mode == Mode::Lazy {
                pending = Some(
                    self.blocker(state, &c.node, need)
                        .expect("an undecided constraint depends on an open item"),
                );
            }
        }
        let item = match self.mode {
            Mode::Lazy => pending,
            Mode::Exhaustive => {
                if !self.valuation_ordered(state) {
                    return true;
                }
                self.order.iter().find(|i| self.is_open(state, i)).cloned()
            }
        };
        match item {
            None => {
                let model = self.complete(state);
                matches!(visit(model), Outcome::Continue)
            }
            Some(item) => {
                for next in self.branches(state, &item) {
                    if !self.dfs(&next, visit) {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Exhaustive mode only: once the valuation is fixed, the non-actual
    /// worlds must appear in non-decreasing order of their valuations.
    fn valuation_ordered(&self, state: &State) -> bool {
        let k = self.tables.atoms.len();
        let decided = (0..k).all(|a| state.atom_true[a].union(state.atom_false[a]) == self.all);
        if !decided || self.n < 3 {
            return true;
        }
        let key = |w: usize| -> Vec<bool> { (0..k).map(|a| state.atom_true[a].contains(w)).collect() };
        (1..self.n - 1).all(|w| key(w) <= key(w + 1))
    }

    fn is_open(&self, state: &State, item: &Item) -> bool {
        match item {
            Item::Atom(k, w) => !state.atom_true[*k].union(state.atom_false[*k]).contains(*w),
            Item::Av(t, w) => state.av[*t][*w].is_none(),
            Item::Pv(t, w) => state.pv[*t][*w].is_none(),
            Item::Ob(t, x, c) => state.ob[*t].status(*x, *c).is_none(),
            Item::Stit(a, s) => !state.stit.contains_key(&(a.clone(), *s)),
        }
    }

    fn branches(&self, state: &State, item: &Item) -> Vec<State> {
        let mut out = Vec::new();
        match item {
            Item::Atom(k, w) => {
                let mut f = state.clone();
                f.atom_false[*k] = f.atom_false[*k].with(*w);
                out.push(f);
                let mut t = state.clone();
                t.atom_true[*k] = t.atom_true[*k].with(*w);
                out.push(t);
            }
            Item::Av(t, w) => {
                let bound = state.pv[*t][*w].unwrap_or(self.all);
                for s in bound.subsets().skip(1) {
                    let mut next = state.clone();
                    next.av[*t][*w] = Some(s);
                    out.push(next);
                }
            }
            Item::Pv(t, w) => {
                let base = state.av[*t][*w].unwrap_or(WorldSet::EMPTY).with(*w);
                for s in base.supersets_within(self.all) {
                    let mut next = state.clone();
                    next.pv[*t][*w] = Some(s);
                    out.push(next);
                }
            }
            Item::Ob(t, x, c) => {
                let mut f = state.clone();
                if f.ob[*t].assert_false(*x, *c) {
                    out.push(f);
                }
                let mut tr = state.clone();
                if tr.ob[*t].assert_true(*x, *c) {
                    out.push(tr);
                }
            }
            Item::Stit(a, s) => {
                let choices = std::iter::once(*s).chain(s.subsets().filter(|c| c != s));
                for choice in choices {
                    let mut next = state.clone();
                    next.stit.insert((a.clone(), *s), choice);
                    out.push(next);
                }
            }
        }
        out
    }

    /// The least completion of `state`.
    fn complete(&self, state: &State) -> FiniteModel {
        let mut m = FiniteModel::new(self.n);
        for (k, atom) in self.tables.atoms.iter().enumerate() {
            if !state.atom_true[k].is_empty() {
                m.valuation.insert(atom.clone(), state.atom_true[k]);
            }
        }
        for (r, name) in self.tables.relations.iter().enumerate() {
            m.relations.insert(name.clone(), self.rows[r].clone());
        }
        for (t, tag) in self.tables.tags.iter().enumerate() {
            let av: Vec<WorldSet> =
                (0..self.n).map(|w| state.av[t][w].unwrap_or(WorldSet::singleton(w))).collect();
            let pv = (0..self.n).map(|w| state.pv[t][w].unwrap_or(av[w].with(w))).collect();
            m.av.insert(tag.clone(), av);
            m.pv.insert(tag.clone(), pv);
            let ob = m.ob.entry(tag.clone()).or_default();
            for x in state.ob[t].contexts() {
                let cores: std::collections::BTreeSet<_> = state.ob[t].cores(x).collect();
                if !cores.is_empty() {
                    ob.insert(x, cores);
                }
            }
        }
        for ((a, s), c) in &state.stit {
            if c != s {
                m.stit.insert((a.clone(), *s), *c);
            }
        }
        m
    }

    fn tri(&self, state: &State, node: &Node) -> Tri {
        let all = self.all;
        let unknown = Tri { lo: WorldSet::EMPTY, hi: all };
        let everywhere = |b: bool| Tri::exact(if b { all } else { WorldSet::EMPTY });
        match node {
            Node::True => Tri::exact(all),
            Node::False => Tri::exact(WorldSet::EMPTY),
            Node::Atom(k) => Tri { lo: state.atom_true[*k], hi: state.atom_false[*k].complement(self.n) },
            Node::Not(g) => {
                let t = self.tri(state, g);
                Tri { lo: t.hi.complement(self.n), hi: t.lo.complement(self.n) }
            }
            Node::And(a, b) => {
                let (a, b) = (self.tri(state, a), self.tri(state, b));
                Tri { lo: a.lo.intersect(b.lo), hi: a.hi.intersect(b.hi) }
            }
            Node::Or(a, b) => {
                let (a, b) = (self.tri(state, a), self.tri(state, b));
                Tri { lo: a.lo.union(b.lo), hi: a.hi.union(b.hi) }
            }
            Node::Implies(a, b) => {
                let (a, b) = (self.tri(state, a), self.tri(state, b));
                Tri { lo: a.hi.complement(self.n).union(b.lo), hi: a.lo.complement(self.n).union(b.hi) }
            }
            Node::Iff(a, b) => {
                let (a, b) = (self.tri(state, a), self.tri(state, b));
                let (na_lo, na_hi) = (a.hi.complement(self.n), a.lo.complement(self.n));
                let (nb_lo, nb_hi) = (b.hi.complement(self.n), b.lo.complement(self.n));
                Tri {
                    lo: a.lo.intersect(b.lo).union(na_lo.intersect(nb_lo)),
                    hi: a.hi.intersect(b.hi).union(na_hi.intersect(nb_hi)),
                }
            }
            Node::Nec(g) => {
                let t = self.tri(state, g);
                if t.lo == all {
                    everywhere(true)
                } else if t.hi != all {
                    everywhere(false)
                } else {
                    unknown
                }
            }
            Node::Poss(g) => {
                let t = self.tri(state, g);
                if !t.lo.is_empty() {
                    everywhere(true)
                } else if t.hi.is_empty() {
                    everywhere(false)
                } else {
                    unknown
                }
            }
            Node::Rel { rel, converse, body } => {
                let t = self.tri(state, body);
                let rows = if *converse { &self.converse[*rel] } else { &self.rows[*rel] };
                Tri {
                    lo: self.worlds_where(|w| rows[w].is_subset(t.lo)),
                    hi: self.worlds_where(|w| rows[w].is_subset(t.hi)),
                }
            }
            Node::Versions { tag, actual: true, body } => {
                let t = self.tri(state, body);
                let (mut lo, mut hi) = (WorldSet::EMPTY, WorldSet::EMPTY);
                for w in 0..self.n {
                    let (in_lo, in_hi) = match state.av[*tag][w] {
                        Some(a) => (a.is_subset(t.lo), a.is_subset(t.hi)),
                        None => {
                            let bound = state.pv[*tag][w].unwrap_or(all);
                            (bound.is_subset(t.lo), !bound.intersect(t.hi).is_empty())
                        }
                    };
                    if in_lo {
                        lo = lo.with(w);
                    }
                    if in_hi {
                        hi = hi.with(w);
                    }
                }
                Tri { lo, hi }
            }
            Node::Versions { tag, actual: false, body } => {
                let t = self.tri(state, body);
                let (mut lo, mut hi) = (WorldSet::EMPTY, WorldSet::EMPTY);
                for w in 0..self.n {
                    let (in_lo, in_hi) = match state.pv[*tag][w] {
                        Some(p) => (p.is_subset(t.lo), p.is_subset(t.hi)),
                        None => {
                            let least = state.av[*tag][w].unwrap_or(WorldSet::EMPTY).with(w);
                            (t.lo == all, least.is_subset(t.hi))
                        }
                    };
                    if in_lo {
                        lo = lo.with(w);
                    }
                    if in_hi {
                        hi = hi.with(w);
                    }
                }
                Tri { lo, hi }
            }
            Node::Cond { tag, body, context } => {
                let ctx = self.tri(state, context);
                if ctx.lo != ctx.hi {
                    return unknown;
                }
                let x = ctx.lo;
                let b = self.tri(state, body);
                if !b.is_exact_on(x) {
                    return unknown;
                }
                match state.ob[*tag].status(x, b.lo.intersect(x)) {
                    Some(v) => everywhere(v),
                    None => unknown,
                }
            }
            Node::Versioned { tag, actual, body } => {
                let b = self.tri(state, body);
                let (mut lo, mut hi) = (WorldSet::EMPTY, WorldSet::EMPTY);
                for w in 0..self.n {
                    let versions = if *actual { state.av[*tag][w] } else { state.pv[*tag][w] };
                    let value = versions.and_then(|x| self.versioned_at(state, *tag, x, &b));
                    match value {
                        Some(true) => {
                            lo = lo.with(w);
                            hi = hi.with(w);
                        }
                        Some(false) => {}
                        None => hi = hi.with(w),
                    }
                }
                Tri { lo, hi }
            }
            Node::Stit { agent, body } => {
                let b = self.tri(state, body);
                if b.lo != b.hi {
                    return Tri { lo: WorldSet::EMPTY, hi: b.hi };
                }
                match state.stit.get(&(agent.clone(), b.lo)) {
                    Some(c) => Tri::exact(*c),
                    None => Tri { lo: WorldSet::EMPTY, hi: b.lo },
                }
            }
        }
    }

    /// Actual/primary obligation against known versions `x`, if decided.
    fn versioned_at(&self, state: &State, tag: usize, x: WorldSet, body: &Tri) -> Option<bool> {
        if !body.is_exact_on(x) {
            return None;
        }
        let y = body.lo.intersect(x);
        if self.theory.actual_ob_nonvacuous && y == x {
            return Some(false);
        }
        state.ob[tag].status(x, y)
    }

    fn worlds_where(&self, mut f: impl FnMut(usize) -> bool) -> WorldSet {
        WorldSet::from_worlds((0..self.n).filter(|&w| f(w)))
    }

    /// An open item the value of `node` on `demand` depends on. Returns
    /// `Some` whenever `node` is undecided somewhere in `demand`.
    fn blocker(&self, state: &State, node: &Node, demand: WorldSet) -> Option<Item> {
        let t = self.tri(state, node);
        let open = demand.intersect(t.unknown());
        if open.is_empty() {
            return None;
        }
        match node {
            Node::True | Node::False => None,
            Node::Atom(k) => open.first().map(|w| Item::Atom(*k, w)),
            Node::Not(g) => self.blocker(state, g, open),
            Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) | Node::Iff(a, b) => {
                self.blocker(state, a, open).or_else(|| self.blocker(state, b, open))
            }
            Node::Nec(g) | Node::Poss(g) => self.blocker(state, g, self.all),
            Node::Rel { rel, converse, body } => {
                let rows = if *converse { &self.converse[*rel] } else { &self.rows[*rel] };
                let succ = open.iter().fold(WorldSet::EMPTY, |acc, w| acc.union(rows[w]));
                self.blocker(state, body, succ)
            }
            Node::Versions { tag, actual, body } => {
                let rows = if *actual { &state.av[*tag] } else { &state.pv[*tag] };
                if let Some(w) = open.iter().find(|&w| rows[w].is_none()) {
                    return Some(if *actual { Item::Av(*tag, w) } else { Item::Pv(*tag, w) });
                }
                let succ = open.iter().fold(WorldSet::EMPTY, |acc, w| acc.union(rows[w].unwrap()));
                self.blocker(state, body, succ)
            }
            Node::Cond { tag, body, context } => self.blocker(state, context, self.all).or_else(|| {
                let x = self.tri(state, context).lo;
                self.blocker(state, body, x).or_else(|| {
                    let y = self.tri(state, body).lo.intersect(x);
                    Some(Item::Ob(*tag, x, y))
                })
            }),
            Node::Versioned { tag, actual, body } => {
                let w = open.first()?;
                let versions = if *actual { state.av[*tag][w] } else { state.pv[*tag][w] };
                match versions {
                    None => Some(if *actual { Item::Av(*tag, w) } else { Item::Pv(*tag, w) }),
                    Some(x) => self.blocker(state, body, x).or_else(|| {
                        let y = self.tri(state, body).lo.intersect(x);
                        Some(Item::Ob(*tag, x, y))
                    }),
                }
            }
            Node::Stit { agent, body } => self
                .blocker(state, body, self.all)
                .or_else(|| Some(Item::Stit(agent.clone(), self.tri(state, body).lo))),
        }
    }
}
