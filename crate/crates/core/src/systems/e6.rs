//! E6: puzzle candidates `x ∥ 0` and `x ∥ 1`, assignment candidates are
//! bare counters of width `5|x|`. At most one candidate ever wins and
//! voters are ignored.

use std::collections::BTreeSet;

use crate::bd::{satisfies, Assignment, BdSet, CnfFormula};
use crate::election::{BitString, CandidateName, Election, ElectionSystem, Preference};

use super::names::{parse_e6_style, PairSet};

#[derive(Clone, Debug, Default)]
pub struct E6 {
    pub bd: BdSet,
}

/// The shortlex-first candidate read as `x ∥ bit` with `x` accepted.
pub(crate) struct E6Head {
    pub x: BitString,
    pub bit: bool,
    pub formula: CnfFormula,
}

impl E6 {
    pub(crate) fn head(&self, smallest: &CandidateName) -> Option<E6Head> {
        let bit = smallest.last_bit()?;
        let x = smallest.slice(0, smallest.len() - 1);
        let formula = self.bd.member_formula(&x)?;
        Some(E6Head { x, bit, formula })
    }

    /// Assignment candidates among `rest`, or `None` if some member is not one.
    pub(crate) fn pairs<'a>(
        &self,
        head: &E6Head,
        rest: impl IntoIterator<Item = &'a CandidateName>,
    ) -> Option<PairSet> {
        let mut pairs = PairSet::default();
        for c in rest {
            let (var, value) = parse_e6_style(c, head.x.len())?;
            pairs.insert(var, value);
        }
        Some(pairs)
    }

    fn rest_assignment(&self, head: &E6Head, c: &BTreeSet<CandidateName>) -> Option<Assignment> {
        let d = head.formula.var_count();
        if c.len() != d + 1 {
            return None;
        }
        self.pairs(head, c.iter().skip(1))?.single_assignment(d)
    }
}

impl ElectionSystem for E6 {
    fn id(&self) -> String {
        "e6".into()
    }

    fn winners(&self, e: &Election) -> BTreeSet<CandidateName> {
        let c = e.candidates();
        let Some(smallest) = e.first() else {
            return BTreeSet::new();
        };
        let Some(head) = self.head(smallest) else {
            return BTreeSet::new();
        };
        let win = BTreeSet::from([smallest.clone()]);
        if let Some(alpha) = self.rest_assignment(&head, c) {
            if head.bit || satisfies(&head.formula, &alpha).expect("lengths match") {
                return win;
            }
        }
        if !head.bit && c.len() == 2 {
            let mut x1 = head.x.clone();
            x1.push(true);
            if c.contains(&x1) {
                return win;
            }
        }
        BTreeSet::new()
    }

    fn ballot_representatives(&self, c: &BTreeSet<CandidateName>) -> Option<Vec<Preference>> {
        Some(vec![super::shortlex_ballot(c)])
    }
}
