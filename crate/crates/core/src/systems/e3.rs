//! E3: always exactly one winner, the shortlex-first or shortlex-last
//! candidate. The first candidate wins when the voters' distinct top
//! choices pick one of each pair `c_{2i-1}, c_{2i}` among the first `2d`
//! candidates and the picks, read as an assignment, solve the puzzle
//! directly or after flipping every bit.

use std::collections::BTreeSet;

use crate::bd::{puzzle, Assignment, BdSet, CnfFormula};
use crate::election::{CandidateName, Election, ElectionSystem, Preference, Voter};

use super::names::satisfies_either_way;

#[derive(Clone, Debug)]
pub struct E3 {
    pub bd: BdSet,
}

impl Default for E3 {
    fn default() -> Self {
        E3 {
            bd: BdSet::two_or_more(),
        }
    }
}

/// Top choices of `voters`, or `None` if two voters share one.
pub(crate) fn distinct_tops<'a>(voters: impl IntoIterator<Item = &'a Voter>) -> Option<BTreeSet<CandidateName>> {
    let mut tops = BTreeSet::new();
    for v in voters {
        if !tops.insert(v.pref.top()?.clone()) {
            return None;
        }
    }
    Some(tops)
}

/// The assignment a set of top choices spells over the first `2d`
/// candidates: `α_i = 1` iff `c_{2i}` is picked.
pub(crate) fn top_pattern(
    candidates: &BTreeSet<CandidateName>,
    tops: &BTreeSet<CandidateName>,
    d: usize,
) -> Option<Assignment> {
    if tops.len() != d || candidates.len() < 2 * d {
        return None;
    }
    let first: Vec<&CandidateName> = candidates.iter().take(2 * d).collect();
    let mut alpha = Vec::with_capacity(d);
    for pair in first.chunks(2) {
        match (tops.contains(pair[0]), tops.contains(pair[1])) {
            (true, false) => alpha.push(false),
            (false, true) => alpha.push(true),
            _ => return None,
        }
    }
    Some(Assignment(alpha))
}

impl E3 {
    pub(crate) fn formula(&self, candidates: &BTreeSet<CandidateName>) -> Option<CnfFormula> {
        self.bd.member_formula(&puzzle(candidates))
    }

    /// Whether `voters` (all with distinct tops) spell an assignment that
    /// solves the puzzle directly or complemented.
    pub(crate) fn pattern_solves(&self, candidates: &BTreeSet<CandidateName>, tops: &BTreeSet<CandidateName>) -> bool {
        self.formula(candidates).is_some_and(|f| {
            top_pattern(candidates, tops, f.var_count()).is_some_and(|a| satisfies_either_way(&f, &a))
        })
    }
}

impl ElectionSystem for E3 {
    fn id(&self) -> String {
        "e3".into()
    }

    fn winners(&self, e: &Election) -> BTreeSet<CandidateName> {
        let c = e.candidates();
        let (Some(first), Some(last)) = (e.first(), e.last()) else {
            return BTreeSet::new();
        };
        if c.len() <= 2 {
            return BTreeSet::from([last.clone()]);
        }
        let first_wins = match distinct_tops(e.voters()) {
            _ if e.voters().is_empty() => true,
            None => true,
            Some(tops) => self.pattern_solves(c, &tops),
        };
        BTreeSet::from([if first_wins { first.clone() } else { last.clone() }])
    }

    /// Only top choices matter.
    fn ballot_representatives(&self, c: &BTreeSet<CandidateName>) -> Option<Vec<Preference>> {
        Some(super::top_only_ballots(c))
    }
}
