//! Partial ob functions in core form, closed under ob3/ob4/ob5.
//!
//! For a context `X` (a bit set over at most six worlds) the known cores
//! and known non-cores are each a 64-bit mask indexed by the core's bits.

use crate::semantics::WorldSet;

/// Contexts and cores are bit sets over at most this many worlds.
pub const MAX_OB_WORLDS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ObState {
    all: u64,
    trues: Vec<u64>,
    falses: Vec<u64>,
}

impl ObState {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_OB_WORLDS);
        ObState { all: WorldSet::full(n).bits(), trues: vec![0; 1 << n], falses: vec![0; 1 << n] }
    }

    /// `Some(true)` if `core` is known to be a core of `context`, `Some(false)`
    /// if known not to be. The empty set is never a core.
    pub fn status(&self, context: WorldSet, core: WorldSet) -> Option<bool> {
        let (x, c) = (context.bits() as usize, core.bits());
        debug_assert!(core.is_subset(context));
        let bit = 1u64 << c;
        if c == 0 || self.falses[x] & bit != 0 {
            Some(false)
        } else if self.trues[x] & bit != 0 {
            Some(true)
        } else {
            None
        }
    }

    /// Records a core and everything ob3/ob4/ob5 derive from it. Returns
    /// false when that contradicts a recorded non-core or ob1.
    pub fn assert_true(&mut self, context: WorldSet, core: WorldSet) -> bool {
        let mut work = vec![(context.bits(), core.bits())];
        while let Some((x, c)) = work.pop() {
            if c == 0 {
                return false;
            }
            let (xi, bit) = (x as usize, 1u64 << c);
            if self.trues[xi] & bit != 0 {
                continue;
            }
            if self.falses[xi] & bit != 0 {
                return false;
            }
            self.trues[xi] |= bit;
            // ob3: overlapping cores of one context
            let mut others = self.trues[xi] & !bit;
            while others != 0 {
                let c2 = others.trailing_zeros() as u64;
                others &= others - 1;
                if c & c2 != 0 {
                    work.push((x, c & c2));
                }
            }
            // ob4: lift to every strict superset
            for extra in WorldSet(self.all & !x).subsets().skip(1) {
                work.push((x | extra.bits(), extra.bits() | c));
            }
            // ob5: restrict to every subset meeting the core
            for y in WorldSet(x).subsets() {
                let y = y.bits();
                if y != x && y & c != 0 {
                    work.push((y, y & c));
                }
            }
        }
        true
    }

    /// Records a non-core. Returns false if it is already a core.
    pub fn assert_false(&mut self, context: WorldSet, core: WorldSet) -> bool {
        let (x, bit) = (context.bits() as usize, 1u64 << core.bits());
        if self.trues[x] & bit != 0 {
            return false;
        }
        self.falses[x] |= bit;
        true
    }

    pub fn cores(&self, context: WorldSet) -> impl Iterator<Item = WorldSet> {
        let mut mask = self.trues[context.bits() as usize];
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let c = mask.trailing_zeros() as u64;
                mask &= mask - 1;
                Some(WorldSet(c))
            }
        })
    }

    pub fn contexts(&self) -> impl Iterator<Item = WorldSet> + '_ {
        (0..self.trues.len()).map(|x| WorldSet(x as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::TheoryId;
    use crate::semantics::{check_frame, AgentTag, FiniteModel};
    use crate::theories::builtin_theory;

    fn ws(worlds: &[usize]) -> WorldSet {
        WorldSet::from_worlds(worlds.iter().copied())
    }

    fn to_model(ob: &ObState, n: usize) -> FiniteModel {
        let th = builtin_theory(TheoryId::Cjddl);
        let mut m = FiniteModel::skeleton(&th, n);
        for x in ob.contexts() {
            for c in ob.cores(x) {
                m.add_core(&AgentTag::Default, x, c);
            }
        }
        m
    }

    #[test]
    fn closure_satisfies_the_conditions() {
        let th = builtin_theory(TheoryId::Cjddl);
        let mut ob = ObState::new(3);
        assert!(ob.assert_true(ws(&[0, 1]), ws(&[0])));
        assert!(ob.assert_true(ws(&[0, 1, 2]), ws(&[1, 2])));
        assert_eq!(ob.status(ws(&[0, 1, 2]), ws(&[0, 2])), Some(true));
        assert_eq!(ob.status(ws(&[1]), ws(&[1])), Some(true));
        assert!(check_frame(&to_model(&ob, 3), &th).is_empty());
    }

    #[test]
    fn conflicts_are_detected() {
        let mut ob = ObState::new(2);
        assert!(ob.assert_false(ws(&[0, 1]), ws(&[0, 1])));
        // {0} core of {0} lifts to {0,1} in {0,1}
        assert!(!ob.assert_true(ws(&[0]), ws(&[0])));
        let mut ob = ObState::new(2);
        // disjoint cores of one context
        assert!(ob.assert_true(ws(&[0, 1]), ws(&[0])));
        assert!(ob.assert_true(ws(&[0, 1]), ws(&[1])));
        assert!(!ob.assert_false(ws(&[1]), ws(&[1])));
        assert_eq!(ob.status(ws(&[0, 1]), WorldSet::EMPTY), Some(false));
    }
}
