//! Formulas compiled against a theory and signature: atoms, relations and
//! agent tags become indices, derived operators are expanded.

use std::collections::BTreeMap;

use crate::logic::{AgentId, Atom, Formula, RelId};
use crate::semantics::{AgentTag, EvalError};
use crate::theories::{RelRole, TheorySpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Node {
    True,
    False,
    Atom(usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Nec(Box<Node>),
    Poss(Box<Node>),
    /// Box over stored relation `rel`, or over its converse.
    Rel {
        rel: usize,
        converse: bool,
        body: Box<Node>,
    },
    /// Box over av (`actual`) or pv of tag `tag`.
    Versions {
        tag: usize,
        actual: bool,
        body: Box<Node>,
    },
    Cond {
        tag: usize,
        body: Box<Node>,
        context: Box<Node>,
    },
    /// Actual (`actual`) or primary obligation of tag `tag`.
    Versioned {
        tag: usize,
        actual: bool,
        body: Box<Node>,
    },
    Stit {
        agent: AgentId,
        body: Box<Node>,
    },
}

/// Index tables shared by compilation and search.
#[derive(Debug, Clone)]
pub(crate) struct Tables {
    pub atoms: Vec<Atom>,
    pub atom_index: BTreeMap<Atom, usize>,
    pub relations: Vec<RelId>,
    pub tags: Vec<AgentTag>,
}

impl Tables {
    pub fn new(theory: &TheorySpec, atoms: &[Atom]) -> Self {
        Tables {
            atoms: atoms.to_vec(),
            atom_index: atoms.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect(),
            relations: theory.stored_relations().cloned().collect(),
            tags: theory.agent_tags.clone(),
        }
    }

    pub fn tag_index(&self, tag: &AgentTag) -> Result<usize, EvalError> {
        self.tags
            .iter()
            .position(|t| t == tag)
            .ok_or_else(|| EvalError::MissingStructure(format!("structures for {tag}")))
    }

    fn relation_index(&self, rel: &RelId) -> Result<usize, EvalError> {
        self.relations
            .iter()
            .position(|r| r == rel)
            .ok_or_else(|| EvalError::MissingStructure(format!("relation {rel}")))
    }
}

pub(crate) fn compile(f: &Formula, theory: &TheorySpec, tables: &Tables) -> Result<Node, EvalError> {
    let op = f.op_kind();
    if !theory.operators.contains(&op) {
        return Err(EvalError::UnsupportedOperator { op, theory: theory.id });
    }
    let c = |g: &Formula| compile(g, theory, tables).map(Box::new);
    let default = || tables.tag_index(&AgentTag::Default);
    Ok(match f {
        Formula::True => Node::True,
        Formula::False => Node::False,
        Formula::Prop(a) => Node::Atom(
            *tables.atom_index.get(a).ok_or_else(|| EvalError::MissingStructure(format!("atom {a}")))?,
        ),
        Formula::Not(g) => Node::Not(c(g)?),
        Formula::And(a, b) => Node::And(c(a)?, c(b)?),
        Formula::Or(a, b) => Node::Or(c(a)?, c(b)?),
        Formula::Implies(a, b) => Node::Implies(c(a)?, c(b)?),
        Formula::Iff(a, b) => Node::Iff(c(a)?, c(b)?),
        Formula::Nec(g) => Node::Nec(c(g)?),
        Formula::Poss(g) => Node::Poss(c(g)?),
        Formula::RelNec(r, g) => {
            let decl =
                theory.relation(r).ok_or_else(|| EvalError::MissingStructure(format!("relation {r}")))?;
            let (rel, converse) = match &decl.role {
                RelRole::Stored => (tables.relation_index(r)?, false),
                RelRole::ConverseOf(base) => (tables.relation_index(base)?, true),
            };
            Node::Rel { rel, converse, body: c(g)? }
        }
        Formula::AvNec(g) => Node::Versions { tag: default()?, actual: true, body: c(g)? },
        Formula::PvNec(g) => Node::Versions { tag: default()?, actual: false, body: c(g)? },
        Formula::Ob(g) => monadic_ob(c(g)?, theory, tables)?,
        Formula::Perm(g) => Node::Not(Box::new(monadic_ob(Box::new(Node::Not(c(g)?)), theory, tables)?)),
        Formula::Forb(g) => monadic_ob(Box::new(Node::Not(c(g)?)), theory, tables)?,
        Formula::CondOb { body, context } => {
            Node::Cond { tag: default()?, body: c(body)?, context: c(context)? }
        }
        Formula::ActualOb(g) => Node::Versioned { tag: default()?, actual: true, body: c(g)? },
        Formula::PrimaryOb(g) => Node::Versioned { tag: default()?, actual: false, body: c(g)? },
        Formula::AgentOb(a, g) => Node::Cond {
            tag: tables.tag_index(&AgentTag::Agent(a.clone()))?,
            body: c(g)?,
            context: Box::new(Node::True),
        },
        Formula::AgentCondOb { agent, body, context } => Node::Cond {
            tag: tables.tag_index(&AgentTag::Agent(agent.clone()))?,
            body: c(body)?,
            context: c(context)?,
        },
        Formula::Stit(a, g) => Node::Stit { agent: a.clone(), body: c(g)? },
    })
}

fn monadic_ob(body: Box<Node>, theory: &TheorySpec, tables: &Tables) -> Result<Node, EvalError> {
    if theory.id.is_dyadic() {
        Ok(Node::Cond { tag: tables.tag_index(&AgentTag::Default)?, body, context: Box::new(Node::True) })
    } else {
        Ok(Node::Rel { rel: tables.relation_index(&RelId::new("R"))?, converse: false, body })
    }
}

impl Node {
    /// Agents occurring under `stit`.
    pub fn stit_agents(&self, out: &mut Vec<AgentId>) {
        match self {
            Node::True | Node::False | Node::Atom(_) => {}
            Node::Not(g) | Node::Nec(g) | Node::Poss(g) => g.stit_agents(out),
            Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) | Node::Iff(a, b) => {
                a.stit_agents(out);
                b.stit_agents(out);
            }
            Node::Rel { body, .. } | Node::Versions { body, .. } | Node::Versioned { body, .. } => {
                body.stit_agents(out)
            }
            Node::Cond { body, context, .. } => {
                body.stit_agents(out);
                context.stit_agents(out);
            }
            Node::Stit { agent, body } => {
                if !out.contains(agent) {
                    out.push(agent.clone());
                }
                body.stit_agents(out);
            }
        }
    }
}
