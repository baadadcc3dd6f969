//! Small reference systems: the three-candidate counterexample system,
//! plurality, and seeded random winner tables.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::election::{canonical_encode, name, CandidateName, Election, ElectionSystem, Preference};

/// Ignores voters. A lone candidate wins. With two candidates the
/// distinguished one wins if present, otherwise nobody. With three
/// candidates including the distinguished one, it wins together with the
/// shortlex-smaller of the other two; any other election has no winners.
#[derive(Clone, Debug)]
pub struct AliceSystem {
    pub alice: CandidateName,
}

impl AliceSystem {
    pub fn bob() -> CandidateName {
        name("10")
    }
    pub fn carol() -> CandidateName {
        name("11")
    }
}

impl Default for AliceSystem {
    fn default() -> Self {
        AliceSystem { alice: name("0") }
    }
}

impl ElectionSystem for AliceSystem {
    fn id(&self) -> String {
        "alice".into()
    }

    fn winners(&self, e: &Election) -> BTreeSet<CandidateName> {
        let c = e.candidates();
        let has_alice = c.contains(&self.alice);
        match c.len() {
            1 => c.clone(),
            2 if has_alice => BTreeSet::from([self.alice.clone()]),
            3 if has_alice => {
                let other = c.iter().find(|x| **x != self.alice).expect("three candidates");
                BTreeSet::from([self.alice.clone(), other.clone()])
            }
            _ => BTreeSet::new(),
        }
    }

    fn ballot_representatives(&self, c: &BTreeSet<CandidateName>) -> Option<Vec<Preference>> {
        Some(vec![super::shortlex_ballot(c)])
    }
}

/// Candidates with the most first-place votes; everyone when nobody votes.
#[derive(Clone, Debug, Default)]
pub struct Plurality;

impl ElectionSystem for Plurality {
    fn id(&self) -> String {
        "plurality".into()
    }

    fn winners(&self, e: &Election) -> BTreeSet<CandidateName> {
        let mut tally: BTreeMap<&CandidateName, usize> = e.candidates().iter().map(|c| (c, 0)).collect();
        for v in e.voters() {
            if let Some(top) = v.pref.top() {
                *tally.get_mut(top).expect("top is a candidate") += 1;
            }
        }
        let best = tally.values().copied().max().unwrap_or(0);
        tally
            .into_iter()
            .filter(|&(_, n)| n == best)
            .map(|(c, _)| c.clone())
            .collect()
    }

    fn ballot_representatives(&self, c: &BTreeSet<CandidateName>) -> Option<Vec<Preference>> {
        Some(super::top_only_ballots(c))
    }
}

/// An arbitrary anonymous system: each candidate's membership in the
/// winner set is a coin flip keyed by the seed and the election's
/// canonical encoding.
#[derive(Clone, Debug)]
pub struct RandomTableSystem {
    pub seed: u64,
}

impl RandomTableSystem {
    pub fn new(seed: u64) -> Self {
        RandomTableSystem { seed }
    }
}

impl ElectionSystem for RandomTableSystem {
    fn id(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn winners(&self, e: &Election) -> BTreeSet<CandidateName> {
        let mut hasher = Sha256::new();
        hasher.update(self.seed.to_le_bytes());
        hasher.update(canonical_encode(e));
        let key: [u8; 32] = hasher.finalize().into();
        let mut rng = ChaCha8Rng::from_seed(key);
        e.candidates()
            .iter()
            .filter(|_| rng.random::<bool>())
            .cloned()
            .collect()
    }
}
