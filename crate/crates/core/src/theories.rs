//! Catalog of built-in theories: operator sets, declared structure and
//! named frame conditions.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::logic::{AgentId, OpKind, RelId, TheoryId};
use crate::semantics::{AgentTag, FiniteModel, Violation, WorldSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelRole {
    /// Part of the model.
    Stored,
    /// Computed as the converse of a stored relation.
    ConverseOf(RelId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelDecl {
    pub name: RelId,
    pub role: RelRole,
}

/// What a frame condition constrains, and how.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConditionKind {
    Serial(RelId),
    Reflexive(RelId),
    Symmetric(RelId),
    Transitive(RelId),
    Irreflexive(RelId),
    /// Reflexive, symmetric and transitive.
    Equivalence(RelId),
    /// `av(w)` is never empty.
    AvSerial(AgentTag),
    /// `av(w) ⊆ pv(w)`.
    AvSubPv(AgentTag),
    /// `w ∈ pv(w)`.
    PvReflexivePoint(AgentTag),
    /// The empty set is never a core.
    Ob1(AgentTag),
    /// Stored cores are subsets of their context (the representation of ob2).
    Ob2(AgentTag),
    /// Overlapping cores of one context intersect to a core.
    Ob3Fin(AgentTag),
    /// A core `C` of `X` lifts to the core `(Z∖X)∪C` of every `Z ⊇ X`.
    Ob4(AgentTag),
    /// A core `C` of `X` restricts to the core `Y∩C` of every `Y ⊆ X` it meets.
    Ob5(AgentTag),
    /// `stit` choices lie inside their proposition.
    StitSuccess,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("missing structure: {0}")]
pub struct MissingStructure(pub String);

/// A named, decidable predicate over finite models.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrameCondition {
    pub name: String,
    pub kind: ConditionKind,
}

impl FrameCondition {
    pub fn new(kind: ConditionKind) -> Self {
        FrameCondition { name: kind.to_string(), kind }
    }

    /// Violations of this condition in `m`, each with a witness.
    pub fn violations(&self, m: &FiniteModel) -> Result<Vec<Violation>, MissingStructure> {
        let mut out = Vec::new();
        let mut bad = |witness: String| {
            out.push(Violation { condition: self.name.clone(), witness });
        };
        let n = m.worlds;
        let all = m.all();
        match &self.kind {
            ConditionKind::Serial(r)
            | ConditionKind::Reflexive(r)
            | ConditionKind::Symmetric(r)
            | ConditionKind::Transitive(r)
            | ConditionKind::Irreflexive(r)
            | ConditionKind::Equivalence(r) => {
                let rows = relation_rows(m, r)?;
                if let Some(w) = relation_failure(&self.kind, rows) {
                    bad(w);
                }
            }
            ConditionKind::AvSerial(tag) => {
                for (w, s) in version_rows(m, tag, true)?.iter().enumerate() {
                    if s.is_empty() {
                        bad(format!("av({w}) is empty at world {w}"));
                    }
                }
            }
            ConditionKind::AvSubPv(tag) => {
                let av = version_rows(m, tag, true)?;
                let pv = version_rows(m, tag, false)?;
                for w in 0..n {
                    if !av[w].is_subset(pv[w]) {
                        bad(format!("av({w}) = {} is not inside pv({w}) = {}", av[w], pv[w]));
                    }
                }
            }
            ConditionKind::PvReflexivePoint(tag) => {
                for (w, s) in version_rows(m, tag, false)?.iter().enumerate() {
                    if !s.contains(w) {
                        bad(format!("world {w} is not in pv({w}) = {s}"));
                    }
                }
            }
            ConditionKind::Ob1(tag) => {
                for (x, cores) in ob_of(m, tag)? {
                    if cores.contains(&WorldSet::EMPTY) {
                        bad(format!("empty core stored for context {x}"));
                    }
                }
            }
            ConditionKind::Ob2(tag) => {
                for (x, cores) in ob_of(m, tag)? {
                    if !x.is_subset(all) {
                        bad(format!("context {x} mentions worlds outside 0..{n}"));
                    }
                    for c in cores {
                        if !c.is_subset(*x) {
                            bad(format!("core {c} is not inside its context {x}"));
                        }
                    }
                }
            }
            ConditionKind::Ob3Fin(tag) => {
                for (x, cores) in ob_of(m, tag)? {
                    for c1 in cores {
                        for c2 in cores.range(c1..) {
                            let i = c1.intersect(*c2);
                            if !i.is_empty() && !cores.contains(&i) {
                                bad(format!("cores {c1} and {c2} of {x} meet in {i}, not a core"));
                            }
                        }
                    }
                }
            }
            ConditionKind::Ob4(tag) => {
                for (x, cores) in ob_of(m, tag)? {
                    for c in cores {
                        for z in x.supersets_within(all) {
                            let lifted = z.minus(*x).union(*c);
                            if !m.obligatory(tag, z, lifted) {
                                bad(format!("core {c} of {x} does not lift to {lifted} in {z}"));
                            }
                        }
                    }
                }
            }
            ConditionKind::Ob5(tag) => {
                for (x, cores) in ob_of(m, tag)? {
                    for c in cores {
                        for y in x.subsets() {
                            let r = y.intersect(*c);
                            if !r.is_empty() && !m.obligatory(tag, y, r) {
                                bad(format!("core {c} of {x} does not restrict to {r} in {y}"));
                            }
                        }
                    }
                }
            }
            ConditionKind::StitSuccess => {
                for ((agent, prop), choice) in &m.stit {
                    if !choice.is_subset(*prop) {
                        bad(format!("{agent} chooses {choice} outside its proposition {prop}"));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn relation_rows<'m>(m: &'m FiniteModel, r: &RelId) -> Result<&'m [WorldSet], MissingStructure> {
    let rows = m.relations.get(r).ok_or_else(|| MissingStructure(format!("relation {r}")))?;
    if rows.len() != m.worlds || rows.iter().any(|s| !s.is_subset(m.all())) {
        return Err(MissingStructure(format!("relation {r} is not over 0..{}", m.worlds)));
    }
    Ok(rows)
}

fn version_rows<'m>(
    m: &'m FiniteModel,
    tag: &AgentTag,
    actual: bool,
) -> Result<&'m [WorldSet], MissingStructure> {
    let (map, name) = if actual { (&m.av, "av") } else { (&m.pv, "pv") };
    let rows = map.get(tag).ok_or_else(|| MissingStructure(format!("{name} for {tag}")))?;
    if rows.len() != m.worlds || rows.iter().any(|s| !s.is_subset(m.all())) {
        return Err(MissingStructure(format!("{name} for {tag} is not over 0..{}", m.worlds)));
    }
    Ok(rows)
}

fn ob_of<'m>(
    m: &'m FiniteModel,
    tag: &AgentTag,
) -> Result<&'m crate::semantics::ObFunction, MissingStructure> {
    m.ob.get(tag).ok_or_else(|| MissingStructure(format!("ob for {tag}")))
}

/// First failure of a relational condition, as a witness description.
fn relation_failure(kind: &ConditionKind, rows: &[WorldSet]) -> Option<String> {
    let n = rows.len();
    let serial = || (0..n).find(|&w| rows[w].is_empty()).map(|w| format!("world {w} has no successor"));
    let reflexive =
        || (0..n).find(|&w| !rows[w].contains(w)).map(|w| format!("({w},{w}) missing at world {w}"));
    let irreflexive =
        || (0..n).find(|&w| rows[w].contains(w)).map(|w| format!("({w},{w}) present at world {w}"));
    let symmetric = || {
        (0..n).find_map(|w| {
            rows[w].iter().find(|&v| !rows[v].contains(w)).map(|v| format!("({w},{v}) without ({v},{w})"))
        })
    };
    let transitive = || {
        (0..n).find_map(|w| {
            rows[w].iter().find_map(|v| {
                rows[v]
                    .iter()
                    .find(|&u| !rows[w].contains(u))
                    .map(|u| format!("({w},{v}) and ({v},{u}) without ({w},{u})"))
            })
        })
    };
    match kind {
        ConditionKind::Serial(_) => serial(),
        ConditionKind::Reflexive(_) => reflexive(),
        ConditionKind::Symmetric(_) => symmetric(),
        ConditionKind::Transitive(_) => transitive(),
        ConditionKind::Irreflexive(_) => irreflexive(),
        ConditionKind::Equivalence(_) => reflexive().or_else(symmetric).or_else(transitive),
        _ => None,
    }
}

impl ConditionKind {
    /// The relation a relational condition constrains.
    pub fn relation(&self) -> Option<&RelId> {
        match self {
            ConditionKind::Serial(r)
            | ConditionKind::Reflexive(r)
            | ConditionKind::Symmetric(r)
            | ConditionKind::Transitive(r)
            | ConditionKind::Irreflexive(r)
            | ConditionKind::Equivalence(r) => Some(r),
            _ => None,
        }
    }

    /// Decides a relational condition on bare successor rows.
    pub fn holds_on_rows(&self, rows: &[WorldSet]) -> bool {
        relation_failure(self, rows).is_none()
    }

    /// Whether a single row can still be part of a relation satisfying the
    /// condition. Only row-local conditions can reject here.
    pub fn row_admissible(&self, w: usize, row: WorldSet) -> bool {
        match self {
            ConditionKind::Serial(_) => !row.is_empty(),
            ConditionKind::Reflexive(_) | ConditionKind::Equivalence(_) => row.contains(w),
            ConditionKind::Irreflexive(_) => !row.contains(w),
            _ => true,
        }
    }
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionKind::Serial(r) => write!(f, "Serial({r})"),
            ConditionKind::Reflexive(r) => write!(f, "Reflexive({r})"),
            ConditionKind::Symmetric(r) => write!(f, "Symmetric({r})"),
            ConditionKind::Transitive(r) => write!(f, "Transitive({r})"),
            ConditionKind::Irreflexive(r) => write!(f, "Irreflexive({r})"),
            ConditionKind::Equivalence(r) => write!(f, "Equivalence({r})"),
            ConditionKind::AvSerial(t) => write!(f, "AvSerial({t})"),
            ConditionKind::AvSubPv(t) => write!(f, "AvSubPv({t})"),
            ConditionKind::PvReflexivePoint(t) => write!(f, "PvReflexivePoint({t})"),
            ConditionKind::Ob1(t) => write!(f, "Ob1({t})"),
            ConditionKind::Ob2(t) => write!(f, "Ob2({t})"),
            ConditionKind::Ob3Fin(t) => write!(f, "Ob3fin({t})"),
            ConditionKind::Ob4(t) => write!(f, "Ob4({t})"),
            ConditionKind::Ob5(t) => write!(f, "Ob5({t})"),
            ConditionKind::StitSuccess => f.write_str("StitSuccess"),
        }
    }
}

/// A logic: operators, declared structure and frame conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheorySpec {
    pub id: TheoryId,
    pub operators: BTreeSet<OpKind>,
    pub relations: Vec<RelDecl>,
    /// Tags carrying their own av/pv/ob structure.
    pub agent_tags: Vec<AgentTag>,
    /// Agents the theory itself fixes.
    pub agents: Vec<AgentId>,
    pub conditions: Vec<FrameCondition>,
    /// Whether actual/primary obligation requires a violating version.
    pub actual_ob_nonvacuous: bool,
}

impl TheorySpec {
    pub fn relation(&self, name: &RelId) -> Option<&RelDecl> {
        self.relations.iter().find(|r| &r.name == name)
    }

    pub fn stored_relations(&self) -> impl Iterator<Item = &RelId> {
        self.relations.iter().filter(|r| r.role == RelRole::Stored).map(|r| &r.name)
    }

    pub fn condition(&self, name: &str) -> Option<&FrameCondition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn has_stit(&self) -> bool {
        self.operators.contains(&OpKind::Stit)
    }

    /// Adds a structure tag (with the full Carmo-Jones conditions) for every
    /// agent not yet present. Only the agentive theories take extra tags.
    pub fn with_agents(mut self, agents: &[AgentId]) -> Self {
        if !matches!(self.id, TheoryId::Xddl1 | TheoryId::Xddl2) {
            return self;
        }
        for a in agents {
            let tag = AgentTag::Agent(a.clone());
            if !self.agent_tags.contains(&tag) {
                self.agents.push(a.clone());
                let at = self.conditions.iter().position(|c| c.kind == ConditionKind::StitSuccess);
                let conds = cj_conditions(&tag);
                match at {
                    Some(i) => {
                        self.conditions.splice(i..i, conds);
                    }
                    None => self.conditions.extend(conds),
                }
                self.agent_tags.push(tag);
            }
        }
        self
    }
}

fn cj_conditions(tag: &AgentTag) -> Vec<FrameCondition> {
    [
        ConditionKind::AvSerial(tag.clone()),
        ConditionKind::AvSubPv(tag.clone()),
        ConditionKind::PvReflexivePoint(tag.clone()),
        ConditionKind::Ob1(tag.clone()),
        ConditionKind::Ob2(tag.clone()),
        ConditionKind::Ob3Fin(tag.clone()),
        ConditionKind::Ob4(tag.clone()),
        ConditionKind::Ob5(tag.clone()),
    ]
    .into_iter()
    .map(FrameCondition::new)
    .collect()
}

fn ops(extra: &[OpKind]) -> BTreeSet<OpKind> {
    OpKind::BOOLEANS.iter().chain(extra).copied().collect()
}

const DYADIC_OPS: [OpKind; 10] = [
    OpKind::Nec,
    OpKind::Poss,
    OpKind::CondOb,
    OpKind::Ob,
    OpKind::ActualOb,
    OpKind::PrimaryOb,
    OpKind::AvNec,
    OpKind::PvNec,
    OpKind::Perm,
    OpKind::Forb,
];

/// The frozen spec for `id`.
pub fn builtin_theory(id: TheoryId) -> TheorySpec {
    let stored = |name: &str| RelDecl { name: RelId::new(name), role: RelRole::Stored };
    match id {
        TheoryId::Sdl => TheorySpec {
            id,
            operators: ops(&[OpKind::Ob, OpKind::Perm, OpKind::Forb]),
            relations: vec![stored("R")],
            agent_tags: vec![],
            agents: vec![],
            conditions: vec![FrameCondition::new(ConditionKind::Serial(RelId::new("R")))],
            actual_ob_nonvacuous: true,
        },
        TheoryId::Cjddl => TheorySpec {
            id,
            operators: ops(&DYADIC_OPS),
            relations: vec![],
            agent_tags: vec![AgentTag::Default],
            agents: vec![],
            conditions: cj_conditions(&AgentTag::Default),
            actual_ob_nonvacuous: true,
        },
        TheoryId::Xddl1 | TheoryId::Xddl2 => {
            let mut operators = ops(&DYADIC_OPS);
            operators.extend([OpKind::AgentOb, OpKind::AgentCondOb, OpKind::Stit]);
            let base = TheorySpec {
                id,
                operators,
                relations: vec![],
                agent_tags: vec![AgentTag::Default],
                agents: vec![],
                conditions: cj_conditions(&AgentTag::Default),
                actual_ob_nonvacuous: true,
            };
            let mut spec = base.with_agents(&[AgentId::new("d"), AgentId::new("b")]);
            spec.conditions.push(FrameCondition::new(ConditionKind::StitSuccess));
            spec
        }
        TheoryId::Tds => {
            let choice = |a: &str| RelId::new(&format!("Choice_{a}"));
            TheorySpec {
                id,
                operators: ops(&[OpKind::RelNec]),
                relations: vec![
                    stored("Choice_a1"),
                    stored("Choice_a2"),
                    stored("RG"),
                    RelDecl { name: RelId::new("RH"), role: RelRole::ConverseOf(RelId::new("RG")) },
                ],
                agent_tags: vec![],
                agents: vec![AgentId::new("a1"), AgentId::new("a2")],
                conditions: vec![
                    FrameCondition::new(ConditionKind::Equivalence(choice("a1"))),
                    FrameCondition::new(ConditionKind::Equivalence(choice("a2"))),
                    FrameCondition::new(ConditionKind::Serial(RelId::new("RG"))),
                    FrameCondition::new(ConditionKind::Transitive(RelId::new("RG"))),
                    FrameCondition::new(ConditionKind::Irreflexive(RelId::new("RG"))),
                ],
                actual_ob_nonvacuous: true,
            }
        }
    }
}

/// Whether the single condition `c` holds in `m`.
pub fn condition_holds(m: &FiniteModel, c: &FrameCondition) -> Result<bool, MissingStructure> {
    c.violations(m).map(|v| v.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::check_frame;

    fn rel_cond(kind: fn(RelId) -> ConditionKind, name: &str) -> FrameCondition {
        FrameCondition::new(kind(RelId::new(name)))
    }

    #[test]
    fn sdl_is_kd() {
        let sdl = builtin_theory(TheoryId::Sdl);
        assert_eq!(sdl.stored_relations().collect::<Vec<_>>(), vec![&RelId::new("R")]);
        assert_eq!(sdl.conditions.len(), 1);
        assert_eq!(sdl.conditions[0].name, "Serial(R)");
        assert_eq!(sdl.operators, ops(&[OpKind::Ob, OpKind::Perm, OpKind::Forb]));
    }

    #[test]
    fn xddl1_has_three_tags_and_stit_success() {
        let th = builtin_theory(TheoryId::Xddl1);
        assert_eq!(th.agent_tags, vec![AgentTag::Default, AgentTag::agent("d"), AgentTag::agent("b")]);
        for tag in &th.agent_tags {
            for kind in [ConditionKind::Ob1(tag.clone()), ConditionKind::Ob5(tag.clone())] {
                assert!(th.conditions.iter().any(|c| c.kind == kind));
            }
        }
        assert_eq!(th.conditions.last().unwrap().kind, ConditionKind::StitSuccess);
        assert!(th.has_stit());
    }

    #[test]
    fn tds_conditions() {
        let th = builtin_theory(TheoryId::Tds);
        assert_eq!(th.agents, vec![AgentId::new("a1"), AgentId::new("a2")]);
        let names: Vec<_> = th.conditions.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "Equivalence(Choice_a1)",
                "Equivalence(Choice_a2)",
                "Serial(RG)",
                "Transitive(RG)",
                "Irreflexive(RG)"
            ]
        );
        assert!(matches!(th.relation(&RelId::new("RH")).unwrap().role, RelRole::ConverseOf(_)));
    }

    #[test]
    fn builtin_is_deterministic() {
        for id in TheoryId::ALL {
            assert_eq!(builtin_theory(id), builtin_theory(id));
        }
    }

    #[test]
    fn relational_probes() {
        let mut m = FiniteModel::new(1);
        m.set_relation("R", &[(0, 0)]);
        assert!(condition_holds(&m, &rel_cond(ConditionKind::Serial, "R")).unwrap());

        let mut m = FiniteModel::new(3);
        m.set_relation("RG", &[(0, 1), (1, 2)]);
        assert!(!condition_holds(&m, &rel_cond(ConditionKind::Transitive, "RG")).unwrap());

        let mut m = FiniteModel::new(1);
        m.set_relation("RG", &[(0, 0)]);
        assert!(!condition_holds(&m, &rel_cond(ConditionKind::Irreflexive, "RG")).unwrap());
    }

    #[test]
    fn missing_structure_is_an_error() {
        let m = FiniteModel::new(1);
        let err = condition_holds(&m, &rel_cond(ConditionKind::Serial, "R")).unwrap_err();
        assert!(err.0.contains("R"));
    }

    #[test]
    fn check_frame_agrees_with_condition_probes() {
        let th = builtin_theory(TheoryId::Cjddl);
        let mut m = FiniteModel::skeleton(&th, 2);
        m.add_core(&AgentTag::Default, WorldSet::singleton(0), WorldSet::singleton(0));
        let all_hold = th.conditions.iter().all(|c| condition_holds(&m, c).unwrap());
        assert_eq!(check_frame(&m, &th).is_empty(), all_hold);
        // {0} core of {0} must lift to {0,1} in {0,1}
        assert!(!all_hold);
        m.add_core(&AgentTag::Default, WorldSet::full(2), WorldSet::full(2));
        m.add_core(&AgentTag::Default, WorldSet::singleton(1), WorldSet::singleton(1));
        assert!(check_frame(&m, &th).is_empty());
    }

    #[test]
    fn with_agents_extends_only_agentive_theories() {
        let extra = [AgentId::new("importer")];
        let th = builtin_theory(TheoryId::Xddl2).with_agents(&extra);
        assert!(th.agent_tags.contains(&AgentTag::agent("importer")));
        assert_eq!(th.conditions.last().unwrap().kind, ConditionKind::StitSuccess);
        assert_eq!(builtin_theory(TheoryId::Cjddl).with_agents(&extra), builtin_theory(TheoryId::Cjddl));
    }
}
