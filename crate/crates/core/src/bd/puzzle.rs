//! Reading a formula out of candidate names and an assignment out of a vote.

use std::collections::{BTreeMap, BTreeSet};

use crate::election::{BitString, CandidateName, Preference};
use crate::error::{Error, Result};

/// Last bits of the non-empty names, in shortlex order.
pub fn puzzle(candidates: &BTreeSet<CandidateName>) -> BitString {
    BitString::from_bits(candidates.iter().filter_map(|c| c.last_bit()))
}

/// `true` iff `c` has odd 1-based shortlex rank in `candidates`.
pub fn candidate_bit(candidates: &BTreeSet<CandidateName>, c: &CandidateName) -> Result<bool> {
    candidates
        .iter()
        .position(|x| x == c)
        .map(|i| i % 2 == 0)
        .ok_or_else(|| Error::InvalidInstance(format!("candidate `{c}` is not in the set")))
}

/// Number of bits a vote over `k` candidates carries.
pub fn vote_bit_len(k: usize) -> usize {
    (k / 2).saturating_sub(1)
}

fn bit_table(candidates: &BTreeSet<CandidateName>) -> BTreeMap<&CandidateName, bool> {
    candidates.iter().enumerate().map(|(i, c)| (c, i % 2 == 0)).collect()
}

/// Bits of the least-preferred `vote_bit_len(k)` candidates, starting with
/// the very last one and moving up the ballot.
pub fn vote_bits(candidates: &BTreeSet<CandidateName>, pref: &Preference) -> Result<BitString> {
    if !pref.ranks_exactly(candidates) {
        return Err(Error::InvalidInstance(
            "preference does not rank exactly the candidates".into(),
        ));
    }
    let table = bit_table(candidates);
    let len = vote_bit_len(candidates.len());
    Ok(BitString::from_bits(
        pref.as_slice().iter().rev().take(len).map(|c| table[c]),
    ))
}

/// A ballot with `favorite` on top whose vote bits equal `target`.
///
/// Tail slots take the shortlex-smallest unused candidate of the needed
/// bit; the remaining candidates sit between favorite and tail in shortlex
/// order.
pub fn craft_vote(
    candidates: &BTreeSet<CandidateName>,
    favorite: &CandidateName,
    target: &BitString,
) -> Result<Preference> {
    let k = candidates.len();
    if !candidates.contains(favorite) {
        return Err(Error::InvalidInstance(format!("favorite `{favorite}` is not a candidate")));
    }
    if target.len() != vote_bit_len(k) {
        return Err(Error::InvalidInstance(format!(
            "target has {} bits, a vote over {k} candidates carries {}",
            target.len(),
            vote_bit_len(k)
        )));
    }
    let mut ones = Vec::new();
    let mut zeros = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        if c != favorite {
            if i % 2 == 0 {
                ones.push(c);
            } else {
                zeros.push(c);
            }
        }
    }
    let (mut next_one, mut next_zero) = (0, 0);
    let mut tail = Vec::with_capacity(target.len());
    for bit in target.bits() {
        let pick = if bit {
            next_one += 1;
            ones.get(next_one - 1)
        } else {
            next_zero += 1;
            zeros.get(next_zero - 1)
        };
        tail.push(*pick.expect("a vote carries fewer bits than either bit class has members"));
    }
    let used: BTreeSet<&CandidateName> = tail.iter().copied().collect();
    let mut order = Vec::with_capacity(k);
    order.push(favorite.clone());
    order.extend(
        candidates
            .iter()
            .filter(|c| *c != favorite && !used.contains(c))
            .cloned(),
    );
    order.extend(tail.into_iter().rev().cloned());
    Ok(Preference::new(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::name;

    fn set(names: &[&str]) -> BTreeSet<CandidateName> {
        names.iter().map(|s| name(s)).collect()
    }

    #[test]
    fn puzzle_examples() {
        assert_eq!(puzzle(&set(&["", "00", "11", "101"])).as_str(), "011");
        assert_eq!(puzzle(&BTreeSet::new()).as_str(), "");
        assert_eq!(puzzle(&set(&[""])).as_str(), "");
    }

    #[test]
    fn candidate_bits_by_rank() {
        let c = set(&["00", "01", "10", "11"]);
        assert!(candidate_bit(&c, &name("00")).unwrap());
        assert!(!candidate_bit(&c, &name("01")).unwrap());
        assert!(candidate_bit(&c, &name("10")).unwrap());
        assert!(!candidate_bit(&c, &name("11")).unwrap());
        assert!(candidate_bit(&set(&["1"]), &name("1")).unwrap());
        assert!(candidate_bit(&c, &name("1")).is_err());
    }

    #[test]
    fn vote_bits_examples() {
        let three = set(&["0", "1", "10"]);
        let p = Preference::new(vec![name("10"), name("0"), name("1")]);
        assert_eq!(vote_bits(&three, &p).unwrap().as_str(), "");
        // k = 4: one bit, from the least preferred candidate.
        let four = set(&["00", "01", "10", "11"]);
        let p = Preference::new(vec![name("01"), name("11"), name("00"), name("10")]);
        assert_eq!(vote_bits(&four, &p).unwrap().as_str(), "1");
        let p = Preference::new(vec![name("00"), name("10"), name("11"), name("01")]);
        assert_eq!(vote_bits(&four, &p).unwrap().as_str(), "0");
    }

    #[test]
    fn craft_small_and_six() {
        let three = set(&["0", "1", "10"]);
        let p = craft_vote(&three, &name("1"), &BitString::empty()).unwrap();
        assert_eq!(p, Preference::new(vec![name("1"), name("0"), name("10")]));
        let six = set(&["000", "001", "010", "011", "100", "101"]);
        // "000" is rank 1, a one; the other ones are "010" and "100".
        let p = craft_vote(&six, &name("000"), &name("11")).unwrap();
        assert_eq!(p.top(), Some(&name("000")));
        assert_eq!(vote_bits(&six, &p).unwrap().as_str(), "11");
        assert_eq!(&p.as_slice()[4..], &[name("100"), name("010")]);
    }

    #[test]
    fn craft_rejects_bad_input() {
        let four = set(&["00", "01", "10", "11"]);
        assert!(craft_vote(&four, &name("0"), &name("1")).is_err());
        assert!(craft_vote(&four, &name("00"), &name("11")).is_err());
    }

    #[test]
    fn craft_round_trip_exhaustive_up_to_eight() {
        for k in 0..=8usize {
            let c: BTreeSet<CandidateName> = (0..k as u64).map(|i| BitString::from_uint(i, 3)).collect();
            let len = vote_bit_len(k);
            for fav in &c {
                for t in 0..(1u64 << len) {
                    let target = BitString::from_uint(t, len);
                    let p = craft_vote(&c, fav, &target).unwrap();
                    assert!(p.ranks_exactly(&c));
                    assert_eq!(p.top(), Some(fav));
                    assert_eq!(vote_bits(&c, &p).unwrap(), target);
                }
            }
        }
    }
}
