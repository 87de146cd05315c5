//! Brute-force model enumeration for SDL and CJ dyadic deontic logic.
//!
//! Nothing here uses the library's evaluator, frame checks or search. Models
//! are plain bit masks and the ob function is a membership table over all
//! subsets, filtered by the Carmo-Jones conditions in their set form.

use deon::{Formula, Problem, QueryKind, TheoryId};
use thiserror::Error;

/// The CJ membership table has `4^n` cells, so dyadic enumeration stops here.
pub const MAX_DYADIC: usize = 2;
/// SDL enumeration is over serial relations and valuations.
pub const MAX_SDL: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the naive enumerator covers sdl and cjddl, not {0}")]
    Theory(TheoryId),
    #[error("{0} worlds is beyond the naive enumerator for this theory")]
    TooLarge(usize),
    #[error("formula outside the enumerated fragment: {0:?}")]
    Unsupported(Formula),
}

/// A finite structure with world 0 as the actual world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveModel {
    pub n: usize,
    /// Truth set of each signature atom, in declaration order.
    pub val: Vec<u64>,
    /// SDL successor sets.
    pub r: Vec<u64>,
    pub av: Vec<u64>,
    pub pv: Vec<u64>,
    /// `ob[x]` has bit `y` set when subset `y` is obligatory in context `x`.
    pub ob: Vec<u64>,
}

fn full(n: usize) -> u64 {
    (1u64 << n) - 1
}

fn subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

fn in_ob(ob: &[u64], x: u64, y: u64) -> bool {
    ob[x as usize] >> y & 1 == 1
}

/// Whether a membership table satisfies the Carmo-Jones conditions:
/// (5a) no empty obligation, (5b) contextual equivalence, (5c) closure
/// under meets inside the context, (5d) lifting, (5e) inheritance.
pub fn cj_ob_ok(n: usize, ob: &[u64]) -> bool {
    let sets = 1u64 << n;
    for x in 0..sets {
        if in_ob(ob, x, 0) {
            return false;
        }
        for y in 0..sets {
            for z in 0..sets {
                if y & x == z & x && in_ob(ob, x, y) != in_ob(ob, x, z) {
                    return false;
                }
                if in_ob(ob, x, y) && in_ob(ob, x, z) && x & y & z != 0 && !in_ob(ob, x, y & z) {
                    return false;
                }
            }
        }
    }
    for x in 0..sets {
        for y in 0..sets {
            if !in_ob(ob, x, y) {
                continue;
            }
            // 5d: y inside x, x inside z
            if subset(y, x) {
                for z in 0..sets {
                    if subset(x, z) && !in_ob(ob, z, (z & !x) | y) {
                        return false;
                    }
                }
            }
            // 5e: sub-contexts meeting y
            for sub in 0..sets {
                if subset(sub, x) && sub & y != 0 && !in_ob(ob, sub, y) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every CJ membership table over `n` worlds.
pub fn cj_ob_tables(n: usize) -> Result<Vec<Vec<u64>>, OracleError> {
    if n > MAX_DYADIC {
        return Err(OracleError::TooLarge(n));
    }
    let sets = 1usize << n;
    let cell_bits = sets;
    let total_bits = sets * cell_bits;
    let mask = full(cell_bits);
    let mut out = Vec::new();
    for code in 0u64..(1u64 << total_bits) {
        let ob: Vec<u64> = (0..sets).map(|x| (code >> (x * cell_bits)) & mask).collect();
        if cj_ob_ok(n, &ob) {
            out.push(ob);
        }
    }
    Ok(out)
}

struct Ctx<'a> {
    m: &'a NaiveModel,
    atoms: &'a [deon::Atom],
    dyadic: bool,
}

impl Ctx<'_> {
    fn all(&self) -> u64 {
        full(self.m.n)
    }

    fn everywhere(&self, b: bool) -> u64 {
        if b {
            self.all()
        } else {
            0
        }
    }

    fn boxed(&self, rows: &[u64], inner: u64) -> u64 {
        (0..self.m.n).filter(|&w| subset(rows[w], inner)).fold(0, |acc, w| acc | 1 << w)
    }

    fn ob_true(&self, body: u64, context: u64) -> bool {
        in_ob(&self.m.ob, context, body)
    }

    fn versioned(&self, rows: &[u64], body: u64) -> u64 {
        (0..self.m.n)
            .filter(|&w| self.ob_true(body, rows[w]) && !subset(rows[w], body))
            .fold(0, |acc, w| acc | 1 << w)
    }

    fn ext(&self, f: &Formula) -> Result<u64, OracleError> {
        use Formula::*;
        let all = self.all();
        Ok(match f {
            True => all,
            False => 0,
            Prop(a) => {
                let i = self
                    .atoms
                    .iter()
                    .position(|b| b == a)
                    .ok_or_else(|| OracleError::Unsupported(f.clone()))?;
                self.m.val[i]
            }
            Not(g) => all & !self.ext(g)?,
            And(a, b) => self.ext(a)? & self.ext(b)?,
            Or(a, b) => self.ext(a)? | self.ext(b)?,
            Implies(a, b) => (all & !self.ext(a)?) | self.ext(b)?,
            Iff(a, b) => all & !(self.ext(a)? ^ self.ext(b)?),
            Nec(g) if self.dyadic => self.everywhere(self.ext(g)? == all),
            Poss(g) if self.dyadic => self.everywhere(self.ext(g)? != 0),
            AvNec(g) if self.dyadic => self.boxed(&self.m.av, self.ext(g)?),
            PvNec(g) if self.dyadic => self.boxed(&self.m.pv, self.ext(g)?),
            Ob(g) => self.monadic(self.ext(g)?),
            Forb(g) => self.monadic(all & !self.ext(g)?),
            Perm(g) => all & !self.monadic(all & !self.ext(g)?),
            CondOb { body, context } if self.dyadic => {
                self.everywhere(self.ob_true(self.ext(body)?, self.ext(context)?))
            }
            ActualOb(g) if self.dyadic => self.versioned(&self.m.av, self.ext(g)?),
            PrimaryOb(g) if self.dyadic => self.versioned(&self.m.pv, self.ext(g)?),
            _ => return Err(OracleError::Unsupported(f.clone())),
        })
    }

    fn monadic(&self, body: u64) -> u64 {
        if self.dyadic {
            self.everywhere(self.ob_true(body, self.all()))
        } else {
            self.boxed(&self.m.r, body)
        }
    }
}

/// Truth set of `f` in `m` over the signature atoms `atoms`.
pub fn naive_ext(
    m: &NaiveModel,
    theory: TheoryId,
    atoms: &[deon::Atom],
    f: &Formula,
) -> Result<u64, OracleError> {
    let dyadic = match theory {
        TheoryId::Sdl => false,
        TheoryId::Cjddl => true,
        other => return Err(OracleError::Theory(other)),
    };
    Ctx { m, atoms, dyadic }.ext(f)
}

/// Calls `visit` on every model of `theory` over `atoms` with exactly `n`
/// worlds until it returns false.
pub fn for_each_model(
    theory: TheoryId,
    atoms: usize,
    n: usize,
    mut visit: impl FnMut(&NaiveModel) -> bool,
) -> Result<(), OracleError> {
    let limit = match theory {
        TheoryId::Sdl => MAX_SDL,
        TheoryId::Cjddl => MAX_DYADIC,
        other => return Err(OracleError::Theory(other)),
    };
    if n == 0 || n > limit {
        return Err(OracleError::TooLarge(n));
    }
    let all = full(n);
    let worlds_choice = |choices: &[Vec<u64>]| -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for options in choices {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |&o| {
                        let mut v = prefix.clone();
                        v.push(o);
                        v
                    })
                })
                .collect();
        }
        out
    };
    let vals = worlds_choice(&vec![(0..=all).collect(); atoms]);
    let (rs, versions, obs) = match theory {
        TheoryId::Sdl => {
            let rows: Vec<u64> = (1..=all).collect();
            (worlds_choice(&vec![rows; n]), vec![(vec![0; n], vec![0; n])], vec![vec![0; 1 << n]])
        }
        _ => {
            // per world: w in pv(w), av(w) nonempty inside pv(w)
            let per_world: Vec<Vec<u64>> = (0..n)
                .map(|w| {
                    let mut pairs = Vec::new();
                    for pv in (0..=all).filter(|pv| pv >> w & 1 == 1) {
                        for av in (1..=all).filter(|&av| subset(av, pv)) {
                            pairs.push(pv << 32 | av);
                        }
                    }
                    pairs
                })
                .collect();
            let versions = worlds_choice(&per_world)
                .into_iter()
                .map(|row| {
                    let pv = row.iter().map(|c| c >> 32).collect();
                    let av = row.iter().map(|c| c & 0xffff_ffff).collect();
                    (av, pv)
                })
                .collect();
            (vec![vec![0; n]], versions, cj_ob_tables(n)?)
        }
    };
    for r in &rs {
        for (av, pv) in &versions {
            for ob in &obs {
                for val in &vals {
                    let m = NaiveModel {
                        n,
                        val: val.clone(),
                        r: r.clone(),
                        av: av.clone(),
                        pv: pv.clone(),
                        ob: ob.clone(),
                    };
                    if !visit(&m) {
                        return Ok(());
                    }
                }
            }
        }
    }
    Ok(())
}

/// Counts models of `p` (all structure decided, actual world 0) with exactly
/// `n` worlds, where `goal`, if given, fails at the actual world.
pub fn count_models(p: &Problem, goal: Option<&Formula>, n: usize) -> Result<usize, OracleError> {
    let mut count = 0;
    let mut err = None;
    scan(
        p,
        goal,
        n,
        |_| {
            count += 1;
            true
        },
        &mut err,
    )?;
    err.map_or(Ok(count), Err)
}

/// Whether `p` has a model with exactly `n` worlds in which `goal`, if
/// given, fails at the actual world.
pub fn exists_model(p: &Problem, goal: Option<&Formula>, n: usize) -> Result<bool, OracleError> {
    let mut found = false;
    let mut err = None;
    scan(
        p,
        goal,
        n,
        |_| {
            found = true;
            false
        },
        &mut err,
    )?;
    err.map_or(Ok(found), Err)
}

/// Satisfiability of a query at exactly `n` worlds: a model for
/// consistency queries, a countermodel for entailments.
pub fn query_witness_exists(p: &Problem, label: &str, n: usize) -> Result<bool, OracleError> {
    let q = p.query(label).expect("query exists");
    let pq = p.for_query(q);
    match &q.kind {
        QueryKind::Consistent => exists_model(&pq, None, n),
        QueryKind::Entails(g) => exists_model(&pq, Some(g), n),
    }
}

fn scan(
    p: &Problem,
    goal: Option<&Formula>,
    n: usize,
    mut on_model: impl FnMut(&NaiveModel) -> bool,
    err: &mut Option<OracleError>,
) -> Result<(), OracleError> {
    let theory = p.theory();
    let atoms = p.signature.atoms();
    for_each_model(theory, atoms.len(), n, |m| {
        let holds = |f: &Formula| naive_ext(m, theory, atoms, f);
        let check = || -> Result<bool, OracleError> {
            for a in &p.globals {
                if holds(&a.formula)? != full(n) {
                    return Ok(false);
                }
            }
            for a in &p.locals {
                if holds(&a.formula)? & 1 == 0 {
                    return Ok(false);
                }
            }
            match goal {
                Some(g) => Ok(holds(g)? & 1 == 0),
                None => Ok(true),
            }
        };
        match check() {
            Ok(true) => on_model(m),
            Ok(false) => true,
            Err(e) => {
                *err = Some(e);
                false
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_world_cj_tables() {
        // ob({0}) may or may not contain {0}; nothing else is possible
        assert_eq!(cj_ob_tables(1).unwrap().len(), 2);
    }

    #[test]
    fn sdl_one_world_one_atom() {
        let mut count = 0;
        for_each_model(TheoryId::Sdl, 1, 1, |_| {
            count += 1;
            true
        })
        .unwrap();
        assert_eq!(count, 2);
    }

    #[test]
    fn rejects_tables_breaking_inheritance() {
        // {0} obligatory in {0,1} but not in {0}
        let mut ob = vec![0u64; 4];
        ob[0b11] = 1 << 0b01;
        assert!(!cj_ob_ok(2, &ob));
    }
}
