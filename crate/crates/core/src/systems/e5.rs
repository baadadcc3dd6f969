//! E5: three special candidates `a = 0`, `b = 01`, `c = 10` next to
//! assignment candidates in the E4 naming scheme. Only `a`, `b` and `c`
//! ever win, and `a` wins alone only beside a satisfying assignment.
//! Voters are ignored.

use std::collections::{BTreeMap, BTreeSet};

use crate::bd::{satisfies, BdSet, CnfFormula};
use crate::election::{name, BitString, CandidateName, Election, ElectionSystem, Preference};

use super::names::{parse_e4_style, PairSet};

pub fn special_a() -> CandidateName {
    name("0")
}
pub fn special_b() -> CandidateName {
    name("01")
}
pub fn special_c() -> CandidateName {
    name("10")
}

#[derive(Clone, Debug, Default)]
pub struct E5 {
    pub bd: BdSet,
}

/// Assignment candidates grouped by the puzzle they name, or `None` if
/// some candidate is not an assignment candidate.
pub(crate) fn group_by_puzzle<'a>(
    others: impl IntoIterator<Item = &'a CandidateName>,
) -> Option<BTreeMap<BitString, PairSet>> {
    let mut groups: BTreeMap<BitString, PairSet> = BTreeMap::new();
    for c in others {
        let (puz, var, value) = parse_e4_style(c)?;
        groups.entry(puz).or_default().insert(var, value);
    }
    Some(groups)
}

impl E5 {
    pub(crate) fn formula(&self, puz: &BitString) -> Option<CnfFormula> {
        self.bd.member_formula(puz)
    }

    /// When `others` is exactly one assignment for one accepted puzzle,
    /// whether that assignment satisfies it.
    pub(crate) fn assignment_verdict(&self, others: &BTreeSet<CandidateName>) -> Option<bool> {
        let groups = group_by_puzzle(others)?;
        if groups.len() != 1 {
            return None;
        }
        let (puz, pairs) = groups.into_iter().next()?;
        let f = self.formula(&puz)?;
        let alpha = pairs.single_assignment(f.var_count())?;
        Some(satisfies(&f, &alpha).expect("lengths match"))
    }
}

impl ElectionSystem for E5 {
    fn id(&self) -> String {
        "e5".into()
    }

    fn winners(&self, e: &Election) -> BTreeSet<CandidateName> {
        let c = e.candidates();
        let (a, b, cc) = (special_a(), special_b(), special_c());
        let (has_a, has_b, has_c) = (c.contains(&a), c.contains(&b), c.contains(&cc));
        let others = || -> BTreeSet<CandidateName> {
            c.iter().filter(|x| **x != a && **x != b && **x != cc).cloned().collect()
        };
        match (has_a, has_b, has_c) {
            (_, true, true) => BTreeSet::from([b, cc]),
            (false, true, false) if c.len() >= 2 => BTreeSet::from([b]),
            (false, false, true) if c.len() >= 2 => BTreeSet::from([cc]),
            (true, true, false) => match self.assignment_verdict(&others()) {
                Some(true) => BTreeSet::from([a]),
                Some(false) => BTreeSet::from([a, b]),
                None => BTreeSet::new(),
            },
            (true, false, true) => match self.assignment_verdict(&others()) {
                Some(true) => BTreeSet::from([a]),
                Some(false) => BTreeSet::from([a, cc]),
                None => BTreeSet::new(),
            },
            _ => BTreeSet::new(),
        }
    }

    fn ballot_representatives(&self, c: &BTreeSet<CandidateName>) -> Option<Vec<Preference>> {
        Some(vec![super::shortlex_ballot(c)])
    }
}
