//! Election systems: the constructed puzzle systems E1 to E6, the
//! three-candidate counterexample system, plurality, and seeded random
//! systems. [`hardness`] builds the instances whose solutions carry
//! satisfying assignments and reads those assignments back out.

mod ballot_puzzle;
mod e3;
mod e4;
mod e5;
mod e6;
pub mod hardness;
pub mod names;
mod simple;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use ballot_puzzle::{E1, E2};
pub(crate) use ballot_puzzle::BallotReader;
pub use e3::E3;
pub(crate) use e3::{distinct_tops, top_pattern};
pub use e4::E4;
pub(crate) use e4::E4Shape;
pub use e5::{special_a, special_b, special_c, E5};
pub(crate) use e5::group_by_puzzle;
pub use e6::E6;
pub use simple::{AliceSystem, Plurality, RandomTableSystem};

use crate::election::{CandidateName, ElectionSystem, Preference};
use crate::error::{Error, Result};

/// The candidates in shortlex order.
pub(crate) fn shortlex_ballot(c: &BTreeSet<CandidateName>) -> Preference {
    Preference::new(c.iter().cloned().collect())
}

/// One ballot per possible top choice, the rest in shortlex order.
pub(crate) fn top_only_ballots(c: &BTreeSet<CandidateName>) -> Vec<Preference> {
    c.iter()
        .map(|top| {
            let mut order = vec![top.clone()];
            order.extend(c.iter().filter(|x| *x != top).cloned());
            Preference::new(order)
        })
        .collect()
}

/// A system chosen by name: `e1`..`e6`, `alice`, `plurality`, `random:<seed>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    Alice,
    Plurality,
    Random(u64),
}

impl Selector {
    pub fn build(self) -> Box<dyn ElectionSystem> {
        match self {
            Selector::E1 => Box::new(E1::default()),
            Selector::E2 => Box::new(E2::default()),
            Selector::E3 => Box::new(E3::default()),
            Selector::E4 => Box::new(E4::default()),
            Selector::E5 => Box::new(E5::default()),
            Selector::E6 => Box::new(E6::default()),
            Selector::Alice => Box::new(AliceSystem::default()),
            Selector::Plurality => Box::new(Plurality),
            Selector::Random(seed) => Box::new(RandomTableSystem::new(seed)),
        }
    }

    pub fn named() -> [Selector; 8] {
        use Selector::*;
        [E1, E2, E3, E4, E5, E6, Alice, Plurality]
    }
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "e1" => Selector::E1,
            "e2" => Selector::E2,
            "e3" => Selector::E3,
            "e4" => Selector::E4,
            "e5" => Selector::E5,
            "e6" => Selector::E6,
            "alice" => Selector::Alice,
            "plurality" => Selector::Plurality,
            other => match other.strip_prefix("random:").map(str::parse) {
                Some(Ok(seed)) => Selector::Random(seed),
                _ => return Err(Error::UnknownSystem(s.to_owned())),
            },
        })
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Random(seed) => write!(f, "random:{seed}"),
            other => f.write_str(&format!("{other:?}").to_ascii_lowercase()),
        }
    }
}
