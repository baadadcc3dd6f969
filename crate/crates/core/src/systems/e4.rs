//! E4: the puzzle lives in the one candidate `0 ∥ puz ∥ 0`, assignments in
//! candidates `10 ∥ puz ∥ 01 ∥ counter`. Voters are ignored.

use std::collections::BTreeSet;

use crate::bd::{BdSet, CnfFormula};
use crate::election::{CandidateName, Election, ElectionSystem, Preference};

use super::names::{parse_e4_style, satisfies_either_way, PairSet};

#[derive(Clone, Debug, Default)]
pub struct E4 {
    pub bd: BdSet,
}

/// A candidate set made of `0puz0` for an accepted puzzle plus any
/// assignment candidates for that puzzle.
#[derive(Clone, Debug)]
pub(crate) struct E4Shape {
    pub z: CandidateName,
    pub formula: CnfFormula,
    pub pairs: PairSet,
}

impl E4Shape {
    /// Exactly one value per variable, solving the puzzle directly or
    /// complemented.
    pub(crate) fn is_solved(&self) -> bool {
        self.pairs
            .single_assignment(self.formula.var_count())
            .is_some_and(|a| satisfies_either_way(&self.formula, &a))
    }

    pub(crate) fn is_full(&self) -> bool {
        self.pairs.is_full(self.formula.var_count())
    }
}

impl E4 {
    pub(crate) fn shape(&self, candidates: &BTreeSet<CandidateName>) -> Option<E4Shape> {
        let mut zeros = candidates.iter().filter(|c| !c.is_empty() && !c.bit(0));
        let z = zeros.next()?;
        if zeros.next().is_some() || z.len() < 2 || z.last_bit() != Some(false) {
            return None;
        }
        let puz = z.slice(1, z.len() - 1);
        let formula = self.bd.member_formula(&puz)?;
        let d = formula.var_count();
        let mut pairs = PairSet::default();
        for c in candidates.iter().filter(|c| *c != z) {
            let (p, var, value) = parse_e4_style(c)?;
            if p != puz || var > d {
                return None;
            }
            pairs.insert(var, value);
        }
        Some(E4Shape {
            z: z.clone(),
            formula,
            pairs,
        })
    }
}

impl ElectionSystem for E4 {
    fn id(&self) -> String {
        "e4".into()
    }

    fn winners(&self, e: &Election) -> BTreeSet<CandidateName> {
        let c = e.candidates();
        match self.shape(c) {
            None => c.clone(),
            Some(shape) if shape.is_solved() => BTreeSet::from([shape.z]),
            Some(shape) => c.iter().filter(|x| **x != shape.z).cloned().collect(),
        }
    }

    fn ballot_representatives(&self, c: &BTreeSet<CandidateName>) -> Option<Vec<Preference>> {
        Some(vec![super::shortlex_ballot(c)])
    }
}
