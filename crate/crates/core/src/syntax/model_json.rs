//! JSON and text renderings of finite models.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{AgentId, Atom, RelId};
use crate::semantics::{AgentTag, FiniteModel, WorldSet, MAX_WORLDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFormat {
    Text,
    Json,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    worlds: usize,
    actual: usize,
    valuation: BTreeMap<String, Vec<usize>>,
    relations: BTreeMap<String, Vec<[usize; 2]>>,
    av: BTreeMap<String, BTreeMap<String, Vec<usize>>>,
    pv: BTreeMap<String, BTreeMap<String, Vec<usize>>>,
    ob: BTreeMap<String, Vec<ContextDoc>>,
    stit: Vec<StitDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContextDoc {
    context: Vec<usize>,
    core: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StitDoc {
    agent: String,
    prop: Vec<usize>,
    choice: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum ModelJsonError {
    #[error("malformed model JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid model: {0}")]
    Invalid(String),
}

fn worlds(s: WorldSet) -> Vec<usize> {
    s.iter().collect()
}

fn versions(rows: &BTreeMap<AgentTag, Vec<WorldSet>>) -> BTreeMap<String, BTreeMap<String, Vec<usize>>> {
    rows.iter()
        .map(|(tag, rows)| {
            let per_world = rows.iter().enumerate().map(|(w, s)| (w.to_string(), worlds(*s))).collect();
            (tag.key().to_string(), per_world)
        })
        .collect()
}

fn to_doc(m: &FiniteModel) -> ModelDoc {
    ModelDoc {
        worlds: m.worlds,
        actual: m.actual,
        valuation: m
            .valuation
            .iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(a, s)| (a.to_string(), worlds(*s)))
            .collect(),
        relations: m
            .relations
            .keys()
            .map(|r| (r.to_string(), m.relation_pairs(r).into_iter().map(|(a, b)| [a, b]).collect()))
            .collect(),
        av: versions(&m.av),
        pv: versions(&m.pv),
        ob: m
            .ob
            .iter()
            .map(|(tag, ob)| {
                let entries = ob
                    .iter()
                    .filter(|(_, cores)| !cores.is_empty())
                    .map(|(x, cores)| ContextDoc {
                        context: worlds(*x),
                        core: cores.iter().map(|c| worlds(*c)).collect(),
                    })
                    .collect();
                (tag.key().to_string(), entries)
            })
            .collect(),
        stit: m
            .stit
            .iter()
            .filter(|((_, prop), choice)| prop != *choice)
            .map(|((agent, prop), choice)| StitDoc {
                agent: agent.to_string(),
                prop: worlds(*prop),
                choice: worlds(*choice),
            })
            .collect(),
    }
}

/// Compact JSON: `worlds`, `actual`, `valuation`, `relations`, `av`, `pv`,
/// `ob`, `stit`. Atoms false everywhere and identity stit entries are omitted.
pub fn model_to_json(m: &FiniteModel) -> String {
    serde_json::to_string(&to_doc(m)).expect("model documents always serialize")
}

pub fn model_to_json_value(m: &FiniteModel) -> serde_json::Value {
    serde_json::to_value(to_doc(m)).expect("model documents always serialize")
}

/// Parses and validates a model document.
pub fn model_from_json(text: &str) -> Result<FiniteModel, ModelJsonError> {
    let doc: ModelDoc = serde_json::from_str(text)?;
    from_doc(doc)
}

pub fn model_from_json_value(value: serde_json::Value) -> Result<FiniteModel, ModelJsonError> {
    from_doc(serde_json::from_value(value)?)
}

fn from_doc(doc: ModelDoc) -> Result<FiniteModel, ModelJsonError> {
    let invalid = |msg: String| ModelJsonError::Invalid(msg);
    let n = doc.worlds;
    if !(1..=MAX_WORLDS).contains(&n) {
        return Err(invalid(format!("world count {n} outside 1..={MAX_WORLDS}")));
    }
    if doc.actual >= n {
        return Err(invalid(format!("actual world {} out of range", doc.actual)));
    }
    let set = |ws: &[usize]| -> Result<WorldSet, ModelJsonError> {
        match ws.iter().find(|&&w| w >= n) {
            Some(w) => Err(ModelJsonError::Invalid(format!("world {w} out of range"))),
            None => Ok(WorldSet::from_worlds(ws.iter().copied())),
        }
    };
    let tag = |key: &str| {
        AgentTag::from_key(key).ok_or_else(|| ModelJsonError::Invalid(format!("bad agent tag `{key}`")))
    };

    let mut m = FiniteModel::new(n);
    m.actual = doc.actual;
    for (atom, ws) in &doc.valuation {
        let atom: Atom = atom.parse().map_err(|e| invalid(format!("{e}")))?;
        m.valuation.insert(atom, set(ws)?);
    }
    for (rel, pairs) in &doc.relations {
        let rel: RelId = rel.parse().map_err(|e| invalid(format!("{e}")))?;
        let mut rows = vec![WorldSet::EMPTY; n];
        for &[a, b] in pairs {
            if a >= n || b >= n {
                return Err(invalid(format!("pair ({a},{b}) out of range")));
            }
            rows[a] = rows[a].with(b);
        }
        m.relations.insert(rel, rows);
    }
    for (target, source) in [(&mut m.av, &doc.av), (&mut m.pv, &doc.pv)] {
        for (key, per_world) in source {
            let mut rows = vec![WorldSet::EMPTY; n];
            for (w, ws) in per_world {
                let w: usize = w.parse().map_err(|_| invalid(format!("bad world key `{w}`")))?;
                if w >= n {
                    return Err(invalid(format!("world {w} out of range")));
                }
                rows[w] = set(ws)?;
            }
            target.insert(tag(key)?, rows);
        }
    }
    for (key, entries) in &doc.ob {
        let t = tag(key)?;
        let ob = m.ob.entry(t).or_default();
        for e in entries {
            let x = set(&e.context)?;
            let cores = ob.entry(x).or_default();
            for c in &e.core {
                let c = set(c)?;
                if !c.is_subset(x) {
                    return Err(invalid(format!("core {c} not inside context {x}")));
                }
                cores.insert(c);
            }
        }
    }
    for s in &doc.stit {
        let agent: AgentId = s.agent.parse().map_err(|e| invalid(format!("{e}")))?;
        m.stit.insert((agent, set(&s.prop)?), set(&s.choice)?);
    }
    Ok(m)
}

/// Human-readable listing of worlds, valuation, relations, versions and cores.
pub fn model_to_text(m: &FiniteModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "worlds: {} (actual {})", m.worlds, m.actual);
    for w in 0..m.worlds {
        let true_atoms: Vec<&str> =
            m.valuation.iter().filter(|(_, s)| s.contains(w)).map(|(a, _)| a.as_str()).collect();
        let _ = writeln!(
            out,
            "  w{w}: {}",
            if true_atoms.is_empty() { "-".to_string() } else { true_atoms.join(" ") }
        );
    }
    for r in m.relations.keys() {
        let pairs: Vec<String> = m.relation_pairs(r).iter().map(|(a, b)| format!("({a},{b})")).collect();
        let _ = writeln!(out, "{r}: {}", pairs.join(" "));
    }
    for (name, map) in [("av", &m.av), ("pv", &m.pv)] {
        for (tag, rows) in map {
            let cells: Vec<String> = rows.iter().enumerate().map(|(w, s)| format!("{w}->{s}")).collect();
            let _ = writeln!(out, "{name}[{tag}]: {}", cells.join(" "));
        }
    }
    for (tag, ob) in &m.ob {
        for (x, cores) in ob.iter().filter(|(_, c)| !c.is_empty()) {
            let cs: Vec<String> = cores.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "ob[{tag}] {x}: {}", cs.join(" "));
        }
    }
    for ((agent, prop), choice) in m.stit.iter().filter(|((_, p), c)| p != *c) {
        let _ = writeln!(out, "stit {agent} {prop}: {choice}");
    }
    out
}

pub fn print_model(m: &FiniteModel, format: ModelFormat) -> String {
    match format {
        ModelFormat::Text => model_to_text(m),
        ModelFormat::Json => model_to_json(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::TheoryId;
    use crate::theories::builtin_theory;

    #[test]
    fn one_world_without_structure() {
        let m = FiniteModel::new(1);
        assert_eq!(
            model_to_json(&m),
            r#"{"worlds":1,"actual":0,"valuation":{},"relations":{},"av":{},"pv":{},"ob":{},"stit":[]}"#
        );
    }

    #[test]
    fn sdl_relation_pairs() {
        let mut m = FiniteModel::new(2);
        m.set_relation("R", &[(0, 1), (1, 1)]);
        assert!(model_to_json(&m).contains(r#""relations":{"R":[[0,1],[1,1]]}"#));
    }

    #[test]
    fn round_trip_with_all_structure() {
        let th = builtin_theory(TheoryId::Xddl1);
        let mut m = FiniteModel::skeleton(&th, 3);
        m.set_true("p", &[0, 2]);
        m.add_core(&AgentTag::agent("d"), WorldSet::full(3), WorldSet::singleton(2));
        m.stit.insert((AgentId::new("d"), WorldSet::full(3)), WorldSet::singleton(1));
        m.actual = 2;
        let back = model_from_json(&model_to_json(&m)).unwrap();
        assert_eq!(back, m);
        assert!(model_to_text(&m).contains("ob[d] {0,1,2}: {2}"));
    }

    #[test]
    fn rejects_out_of_range_and_unknown_fields() {
        assert!(model_from_json(
            r#"{"worlds":1,"actual":1,"valuation":{},"relations":{},"av":{},"pv":{},"ob":{},"stit":[]}"#
        )
        .is_err());
        assert!(model_from_json(r#"{"worlds":1,"actual":0,"valuation":{"p":[3]},"relations":{},"av":{},"pv":{},"ob":{},"stit":[]}"#).is_err());
        assert!(model_from_json(r#"{"worlds":1,"actual":0,"extra":1,"valuation":{},"relations":{},"av":{},"pv":{},"ob":{},"stit":[]}"#).is_err());
    }
}
