//! Name grammars for candidates that carry a puzzle or one variable of an
//! assignment.
//!
//! An assignment candidate for variable `i` with value `α` ends in a
//! counter: the big-endian binary value `2i + α` in a field `5k` bits wide,
//! `k` being the puzzle length.

use std::collections::{BTreeMap, BTreeSet};

use crate::bd::{satisfies, Assignment, CnfFormula};
use crate::election::{BitString, CandidateName};

pub(crate) fn counter(k: usize, var: usize, value: bool) -> BitString {
    BitString::from_uint(2 * var as u64 + u64::from(value), 5 * k)
}

fn parse_counter(ctr: &BitString) -> Option<(usize, bool)> {
    let v = ctr.to_uint()?;
    (v >= 2).then_some(((v / 2) as usize, v % 2 == 1))
}

/// `10 ∥ puz ∥ 01 ∥ counter`.
pub fn e4_style(puz: &BitString, var: usize, value: bool) -> CandidateName {
    let mut s = String::from("10");
    s.push_str(puz.as_str());
    s.push_str("01");
    s.push_str(counter(puz.len(), var, value).as_str());
    s.parse().expect("bit characters only")
}

/// Inverse of [`e4_style`]; the puzzle length is recovered from the name
/// length `6k + 4`. Returns `(puz, i, α)` with `i >= 1`.
pub fn parse_e4_style(name: &CandidateName) -> Option<(BitString, usize, bool)> {
    let n = name.len();
    if n < 4 || !(n - 4).is_multiple_of(6) {
        return None;
    }
    let k = (n - 4) / 6;
    let s = name.as_str();
    if &s[..2] != "10" || &s[2 + k..4 + k] != "01" {
        return None;
    }
    let (var, value) = parse_counter(&name.slice(4 + k, n))?;
    Some((name.slice(2, 2 + k), var, value))
}

/// A bare counter of width `5k`.
pub fn e6_style(k: usize, var: usize, value: bool) -> CandidateName {
    counter(k, var, value)
}

pub fn parse_e6_style(name: &CandidateName, k: usize) -> Option<(usize, bool)> {
    if name.len() != 5 * k {
        return None;
    }
    parse_counter(name)
}

/// Which `(variable, value)` pairs a group of assignment candidates holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairSet {
    values: BTreeMap<usize, BTreeSet<bool>>,
}

impl PairSet {
    pub fn insert(&mut self, var: usize, value: bool) {
        self.values.entry(var).or_default().insert(value);
    }

    /// Every entry refers to a variable in `1..=d`.
    pub fn within(&self, d: usize) -> bool {
        self.values.keys().all(|&i| 1 <= i && i <= d)
    }

    /// Exactly one value for each variable `1..=d`.
    pub fn single_assignment(&self, d: usize) -> Option<Assignment> {
        if self.values.len() != d || !self.within(d) {
            return None;
        }
        self.values
            .values()
            .map(|vals| (vals.len() == 1).then(|| *vals.iter().next().expect("nonempty")))
            .collect::<Option<Vec<bool>>>()
            .map(Assignment)
    }

    /// Both values for each variable `1..=d`.
    pub fn is_full(&self, d: usize) -> bool {
        self.values.len() == d && self.within(d) && self.values.values().all(|v| v.len() == 2)
    }

    /// At least one value for each variable `1..=d`.
    pub fn covers(&self, d: usize) -> bool {
        self.values.len() == d && self.within(d)
    }

    /// One present value per variable `1..=d` (preferring `false`),
    /// ignoring entries beyond `d`.
    pub fn pick(&self, d: usize) -> Option<Assignment> {
        (1..=d)
            .map(|i| self.values.get(&i).and_then(|v| v.iter().next().copied()))
            .collect::<Option<Vec<bool>>>()
            .map(Assignment)
    }

    /// Every `(variable, value)` entry.
    pub fn entries(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.values.iter().flat_map(|(&i, vals)| vals.iter().map(move |&v| (i, v)))
    }
}

pub(crate) fn satisfies_either_way(f: &CnfFormula, a: &Assignment) -> bool {
    satisfies(f, a).unwrap_or(false) || satisfies(f, &a.complement()).unwrap_or(false)
}
