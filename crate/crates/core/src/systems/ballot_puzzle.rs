//! E1 and E2: the candidate names spell a formula and every ballot carries
//! an attempted assignment in its least-preferred positions.

use std::collections::{BTreeMap, BTreeSet};

use crate::bd::{craft_vote, puzzle, satisfies, vote_bit_len, Assignment, BdSet, CnfFormula};
use crate::election::{BitString, CandidateName, Election, ElectionSystem, Preference};

/// Reads the first `d` vote bits of ballots over a fixed candidate set.
pub(crate) struct BallotReader<'a> {
    bits: BTreeMap<&'a CandidateName, bool>,
    carried: usize,
}

impl<'a> BallotReader<'a> {
    pub(crate) fn new(candidates: &'a BTreeSet<CandidateName>) -> Self {
        BallotReader {
            bits: candidates.iter().enumerate().map(|(i, c)| (c, i % 2 == 0)).collect(),
            carried: vote_bit_len(candidates.len()),
        }
    }

    /// The assignment to `d` variables a ballot encodes, if it carries
    /// enough bits.
    pub(crate) fn assignment(&self, pref: &Preference, d: usize) -> Option<Assignment> {
        (d <= self.carried).then(|| {
            Assignment(pref.as_slice().iter().rev().take(d).map(|c| self.bits[c]).collect())
        })
    }

    pub(crate) fn solves(&self, f: &CnfFormula, pref: &Preference) -> bool {
        self.assignment(pref, f.var_count())
            .is_some_and(|a| satisfies(f, &a).unwrap_or(false))
    }
}

/// Ballots that cover every (favorite, encoded assignment) combination,
/// padding unused vote bits with zeros.
fn representatives(
    bd: &BdSet,
    candidates: &BTreeSet<CandidateName>,
    favorites: &mut dyn Iterator<Item = &CandidateName>,
) -> Option<Vec<Preference>> {
    let carried = vote_bit_len(candidates.len());
    let d = bd
        .member_formula(&puzzle(candidates))
        .map_or(0, |f| f.var_count())
        .min(carried);
    if d >= 32 {
        return None;
    }
    let mut reps = Vec::new();
    for fav in favorites {
        for alpha in 0..(1u64 << d) {
            let mut target = BitString::from_uint(alpha, d);
            for _ in d..carried {
                target.push(false);
            }
            reps.push(craft_vote(candidates, fav, &target).expect("valid target"));
        }
    }
    Some(reps)
}

/// Winners are the top choices of the voters whose ballots solve the
/// puzzle; nobody wins when the puzzle is not accepted.
#[derive(Clone, Debug, Default)]
pub struct E1 {
    pub bd: BdSet,
}

impl ElectionSystem for E1 {
    fn id(&self) -> String {
        "e1".into()
    }

    fn winners(&self, e: &Election) -> BTreeSet<CandidateName> {
        let Some(f) = self.bd.member_formula(&puzzle(e.candidates())) else {
            return BTreeSet::new();
        };
        let reader = BallotReader::new(e.candidates());
        e.voters()
            .iter()
            .filter(|v| reader.solves(&f, &v.pref))
            .filter_map(|v| v.pref.top().cloned())
            .collect()
    }

    /// A voter's effect depends only on their top choice and on the first
    /// `d` vote bits.
    fn ballot_representatives(&self, c: &BTreeSet<CandidateName>) -> Option<Vec<Preference>> {
        representatives(&self.bd, c, &mut c.iter())
    }
}

/// Everybody wins unless some ballot solves the accepted puzzle, in which
/// case nobody does. Nobody wins when the puzzle is not accepted.
#[derive(Clone, Debug, Default)]
pub struct E2 {
    pub bd: BdSet,
}

impl ElectionSystem for E2 {
    fn id(&self) -> String {
        "e2".into()
    }

    fn winners(&self, e: &Election) -> BTreeSet<CandidateName> {
        let Some(f) = self.bd.member_formula(&puzzle(e.candidates())) else {
            return BTreeSet::new();
        };
        let reader = BallotReader::new(e.candidates());
        if e.voters().iter().any(|v| reader.solves(&f, &v.pref)) {
            BTreeSet::new()
        } else {
            e.candidates().clone()
        }
    }

    /// Only the first `d` vote bits matter.
    fn ballot_representatives(&self, c: &BTreeSet<CandidateName>) -> Option<Vec<Preference>> {
        representatives(&self.bd, c, &mut c.iter().take(1))
    }
}
