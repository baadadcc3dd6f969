//! Election data model: bitstring candidate names, strict preferences,
//! vote restriction and the two-stage partition evaluator.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite string over `{0, 1}`, possibly empty.
///
/// Ordering is shortlex: shorter strings come first, strings of equal
/// length compare bitwise with `0 < 1`. Every "first", "last" and "sorted"
/// in this crate refers to this order.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BitString(String);

/// Candidates are identified by their bitstring names.
pub type CandidateName = BitString;

impl BitString {
    pub const fn empty() -> Self {
        BitString(String::new())
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        BitString(bits.into_iter().map(|b| if b { '1' } else { '0' }).collect())
    }

    /// Fixed-width big-endian binary rendering of `value`.
    ///
    /// Panics if `value` does not fit in `width` bits.
    pub fn from_uint(value: u64, width: usize) -> Self {
        assert!(
            width >= 64 || value < (1u64 << width),
            "{value} does not fit in {width} bits"
        );
        BitString(
            (0..width)
                .rev()
                .map(|i| if i < 64 && (value >> i) & 1 == 1 { '1' } else { '0' })
                .collect(),
        )
    }

    /// Big-endian value of the string, or `None` if it does not fit in a `u64`.
    pub fn to_uint(&self) -> Option<u64> {
        let bytes = self.0.as_bytes();
        let (high, low) = bytes.split_at(bytes.len().saturating_sub(64));
        if high.iter().fold(0u8, |acc, &b| acc | (b ^ b'0')) != 0 {
            return None;
        }
        Some(low.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b == b'1')))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn bit(&self, index: usize) -> bool {
        self.0.as_bytes()[index] == b'1'
    }

    pub fn last_bit(&self) -> Option<bool> {
        self.0.as_bytes().last().map(|&b| b == b'1')
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.bytes().map(|b| b == b'1')
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(if bit { '1' } else { '0' });
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut s = String::with_capacity(self.len() + other.len());
        s.push_str(&self.0);
        s.push_str(&other.0);
        BitString(s)
    }

    /// The substring `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString(self.0[start..end].to_owned())
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        self.0.starts_with(prefix.as_str())
    }
}

/// Shortlex comparison of two names.
pub fn shortlex_compare(a: &BitString, b: &BitString) -> Ordering {
    a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0))
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex_compare(self, other)
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.bytes().all(|b| b == b'0' || b == b'1') {
            Ok(BitString(s.to_owned()))
        } else {
            Err(Error::InvalidName(s.to_owned()))
        }
    }
}

impl TryFrom<String> for BitString {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        if s.bytes().all(|b| b == b'0' || b == b'1') {
            Ok(BitString(s))
        } else {
            Err(Error::InvalidName(s))
        }
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> String {
        b.0
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&self.0)
        }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self.0)
    }
}

/// Parses a literal name; for tests and fixed constants.
///
/// Panics on characters other than `0`/`1`.
pub fn name(s: &str) -> CandidateName {
    s.parse().expect("literal candidate name")
}

/// A strict linear order over candidates, most preferred first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Preference(Vec<CandidateName>);

impl Preference {
    pub fn new(order: Vec<CandidateName>) -> Self {
        Preference(order)
    }

    pub fn top(&self) -> Option<&CandidateName> {
        self.0.first()
    }

    pub fn as_slice(&self) -> &[CandidateName] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<CandidateName> {
        self.0
    }

    /// Whether this is a permutation of exactly `candidates`.
    pub fn ranks_exactly(&self, candidates: &BTreeSet<CandidateName>) -> bool {
        self.0.len() == candidates.len()
            && self.0.iter().all(|c| candidates.contains(c))
            && self.0.iter().collect::<BTreeSet<_>>().len() == self.0.len()
    }
}

impl fmt::Debug for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(" > "))
    }
}

/// The subsequence of `pref` consisting of exactly `subset`, order preserved.
pub fn restrict_vote(pref: &Preference, subset: &BTreeSet<CandidateName>) -> Result<Preference> {
    let present: BTreeSet<&CandidateName> = pref.0.iter().collect();
    if let Some(missing) = subset.iter().find(|c| !present.contains(c)) {
        return Err(Error::InvalidRestriction(missing.as_str().to_owned()));
    }
    Ok(Preference(
        pref.0.iter().filter(|c| subset.contains(*c)).cloned().collect(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Voter {
    pub name: String,
    #[serde(rename = "prefs")]
    pub pref: Preference,
}

impl Voter {
    pub fn new(name: impl Into<String>, pref: Preference) -> Self {
        Voter {
            name: name.into(),
            pref,
        }
    }
}

/// A candidate set together with a list of voters ranking exactly those
/// candidates. Voter names are unique.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ElectionRepr", into = "ElectionRepr")]
pub struct Election {
    candidates: BTreeSet<CandidateName>,
    voters: Vec<Voter>,
}

#[derive(Serialize, Deserialize)]
struct ElectionRepr {
    candidates: Vec<CandidateName>,
    voters: Vec<Voter>,
}

impl TryFrom<ElectionRepr> for Election {
    type Error = Error;

    fn try_from(repr: ElectionRepr) -> Result<Self> {
        Election::new(repr.candidates, repr.voters)
    }
}

impl From<Election> for ElectionRepr {
    fn from(e: Election) -> Self {
        ElectionRepr {
            candidates: e.candidates.into_iter().collect(),
            voters: e.voters,
        }
    }
}

/// Collects `items` into a set, rejecting duplicates.
pub(crate) fn distinct_set<T: Ord + Clone + fmt::Display>(
    items: impl IntoIterator<Item = T>,
    what: &str,
) -> Result<BTreeSet<T>> {
    let mut set = BTreeSet::new();
    for item in items {
        if !set.insert(item.clone()) {
            return Err(Error::InvalidElection(format!("duplicate {what} `{item}`")));
        }
    }
    Ok(set)
}

pub(crate) fn check_voters(candidates: &BTreeSet<CandidateName>, voters: &[Voter]) -> Result<()> {
    distinct_set(voters.iter().map(|v| v.name.clone()), "voter name")?;
    for v in voters {
        if !v.pref.ranks_exactly(candidates) {
            return Err(Error::InvalidElection(format!(
                "voter `{}`: preference {:?} is not a strict order over the candidates",
                v.name, v.pref
            )));
        }
    }
    Ok(())
}

impl Election {
    pub fn new(
        candidates: impl IntoIterator<Item = CandidateName>,
        voters: Vec<Voter>,
    ) -> Result<Self> {
        let candidates = distinct_set(candidates, "candidate")?;
        check_voters(&candidates, &voters)?;
        Ok(Election { candidates, voters })
    }

    pub fn empty() -> Self {
        Election {
            candidates: BTreeSet::new(),
            voters: Vec::new(),
        }
    }

    /// An election with no voters.
    pub fn without_voters(candidates: BTreeSet<CandidateName>) -> Self {
        Election {
            candidates,
            voters: Vec::new(),
        }
    }

    pub fn candidates(&self) -> &BTreeSet<CandidateName> {
        &self.candidates
    }

    pub fn voters(&self) -> &[Voter] {
        &self.voters
    }

    pub fn into_parts(self) -> (BTreeSet<CandidateName>, Vec<Voter>) {
        (self.candidates, self.voters)
    }

    /// The election on `subset` with every vote restricted to it.
    pub fn restrict(&self, subset: &BTreeSet<CandidateName>) -> Result<Election> {
        if let Some(c) = subset.iter().find(|c| !self.candidates.contains(*c)) {
            return Err(Error::InvalidRestriction(c.as_str().to_owned()));
        }
        let voters = self
            .voters
            .iter()
            .map(|v| Ok(Voter::new(v.name.clone(), restrict_vote(&v.pref, subset)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Election {
            candidates: subset.clone(),
            voters,
        })
    }

    /// Same candidates, voters replaced.
    pub fn with_voters(&self, voters: Vec<Voter>) -> Result<Election> {
        check_voters(&self.candidates, &voters)?;
        Ok(Election {
            candidates: self.candidates.clone(),
            voters,
        })
    }

    /// Same candidates, keeping only the voters accepted by `keep`.
    pub fn filter_voters(&self, mut keep: impl FnMut(&Voter) -> bool) -> Election {
        Election {
            candidates: self.candidates.clone(),
            voters: self.voters.iter().filter(|v| keep(v)).cloned().collect(),
        }
    }

    pub fn first(&self) -> Option<&CandidateName> {
        self.candidates.iter().next()
    }

    pub fn last(&self) -> Option<&CandidateName> {
        self.candidates.iter().next_back()
    }
}

/// Winner determination. Implementations must be total and deterministic
/// and must only return members of the election's candidate set.
pub trait ElectionSystem: Send + Sync {
    /// Stable identifier, e.g. `e4` or `random:17`.
    fn id(&self) -> String;

    fn winners(&self, election: &Election) -> BTreeSet<CandidateName>;

    /// Optional finite ballot quotient over `candidates`.
    ///
    /// When `Some(reps)`, every strict order over `candidates` is
    /// interchangeable with some ballot in `reps`: replacing it by that
    /// representative never changes the winner set of any election over
    /// exactly `candidates`. Exhaustive search over ballots may then
    /// enumerate `reps` instead of all `|C|!` orders.
    fn ballot_representatives(
        &self,
        _candidates: &BTreeSet<CandidateName>,
    ) -> Option<Vec<Preference>> {
        None
    }
}

impl<S: ElectionSystem + ?Sized> ElectionSystem for &S {
    fn id(&self) -> String {
        (**self).id()
    }
    fn winners(&self, election: &Election) -> BTreeSet<CandidateName> {
        (**self).winners(election)
    }
    fn ballot_representatives(&self, c: &BTreeSet<CandidateName>) -> Option<Vec<Preference>> {
        (**self).ballot_representatives(c)
    }
}

impl<S: ElectionSystem + ?Sized> ElectionSystem for Box<S> {
    fn id(&self) -> String {
        (**self).id()
    }
    fn winners(&self, election: &Election) -> BTreeSet<CandidateName> {
        (**self).winners(election)
    }
    fn ballot_representatives(&self, c: &BTreeSet<CandidateName>) -> Option<Vec<Preference>> {
        (**self).ballot_representatives(c)
    }
}

/// Runs `system` on `election`. An election without candidates has no
/// winners; anything outside the candidate set is dropped.
pub fn evaluate<S: ElectionSystem + ?Sized>(system: &S, election: &Election) -> BTreeSet<CandidateName> {
    if election.candidates.is_empty() {
        return BTreeSet::new();
    }
    let winners = system.winners(election);
    debug_assert!(
        winners.is_subset(&election.candidates),
        "{} returned a non-candidate",
        system.id()
    );
    winners
        .into_iter()
        .filter(|w| election.candidates.contains(w))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TieRule {
    /// Every first-round winner moves on.
    #[serde(rename = "TP")]
    TiesPromote,
    /// Only a unique first-round winner moves on.
    #[serde(rename = "TE")]
    TiesEliminate,
}

impl TieRule {
    pub const ALL: [TieRule; 2] = [TieRule::TiesPromote, TieRule::TiesEliminate];

    pub fn code(self) -> &'static str {
        match self {
            TieRule::TiesPromote => "TP",
            TieRule::TiesEliminate => "TE",
        }
    }
}

impl FromStr for TieRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TP" => Ok(TieRule::TiesPromote),
            "TE" => Ok(TieRule::TiesEliminate),
            _ => Err(Error::InvalidInstance(format!(
                "unknown tie rule `{s}` (expected TP|TE)"
            ))),
        }
    }
}

pub fn apply_tie_rule(winners: BTreeSet<CandidateName>, rule: TieRule) -> BTreeSet<CandidateName> {
    match rule {
        TieRule::TiesPromote => winners,
        TieRule::TiesEliminate if winners.len() == 1 => winners,
        TieRule::TiesEliminate => BTreeSet::new(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartitionKind {
    /// Partition of voters.
    #[serde(rename = "PV")]
    Voters,
    /// Run-off partition of candidates: both halves hold a first round.
    #[serde(rename = "RPC")]
    RunoffCandidates,
    /// Partition of candidates: the first half holds a first round, the
    /// second half gets a bye.
    #[serde(rename = "PC")]
    Candidates,
}

impl PartitionKind {
    pub fn code(self) -> &'static str {
        match self {
            PartitionKind::Voters => "PV",
            PartitionKind::RunoffCandidates => "RPC",
            PartitionKind::Candidates => "PC",
        }
    }
}

impl FromStr for PartitionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "PV" => Ok(PartitionKind::Voters),
            "RPC" => Ok(PartitionKind::RunoffCandidates),
            "PC" => Ok(PartitionKind::Candidates),
            _ => Err(Error::InvalidInstance(format!(
                "unknown partition kind `{s}` (expected PV|RPC|PC)"
            ))),
        }
    }
}

/// An ordered two-way split, of voter names (PV) or candidates (RPC/PC).
/// For PC the first component holds the first-round election.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "of", rename_all = "snake_case")]
pub enum Parts {
    Voters {
        first: BTreeSet<String>,
        second: BTreeSet<String>,
    },
    Candidates {
        first: BTreeSet<CandidateName>,
        second: BTreeSet<CandidateName>,
    },
}

fn check_split<T: Ord + fmt::Display>(
    universe: &BTreeSet<&T>,
    first: &BTreeSet<T>,
    second: &BTreeSet<T>,
) -> Result<()> {
    if let Some(x) = first.intersection(second).next() {
        return Err(Error::InvalidPartition(format!("`{x}` is on both sides")));
    }
    if let Some(x) = first.iter().chain(second).find(|x| !universe.contains(x)) {
        return Err(Error::InvalidPartition(format!("unknown member `{x}`")));
    }
    if first.len() + second.len() != universe.len() {
        return Err(Error::InvalidPartition("the two sides do not cover the set".into()));
    }
    Ok(())
}

/// Final winner set of the two-stage election induced by `parts`.
///
/// Every subelection and the final round see votes restricted to their
/// own candidates. The returned set is the raw final-round winner set.
pub fn run_two_stage<S: ElectionSystem + ?Sized>(
    system: &S,
    election: &Election,
    kind: PartitionKind,
    parts: &Parts,
    rule: TieRule,
) -> Result<BTreeSet<CandidateName>> {
    let survivors = match (kind, parts) {
        (PartitionKind::Voters, Parts::Voters { first, second }) => {
            let names: BTreeSet<&String> = election.voters.iter().map(|v| &v.name).collect();
            check_split(&names, first, second)?;
            let mut survivors = BTreeSet::new();
            for side in [first, second] {
                let sub = election.filter_voters(|v| side.contains(&v.name));
                survivors.extend(apply_tie_rule(evaluate(system, &sub), rule));
            }
            survivors
        }
        (PartitionKind::RunoffCandidates, Parts::Candidates { first, second }) => {
            check_split(&election.candidates.iter().collect(), first, second)?;
            let mut survivors = BTreeSet::new();
            for side in [first, second] {
                let sub = election.restrict(side)?;
                survivors.extend(apply_tie_rule(evaluate(system, &sub), rule));
            }
            survivors
        }
        (PartitionKind::Candidates, Parts::Candidates { first, second }) => {
            check_split(&election.candidates.iter().collect(), first, second)?;
            let sub = election.restrict(first)?;
            let mut survivors = apply_tie_rule(evaluate(system, &sub), rule);
            survivors.extend(second.iter().cloned());
            survivors
        }
        (kind, _) => {
            return Err(Error::InvalidPartition(format!(
                "{} needs a partition of {}",
                kind.code(),
                if kind == PartitionKind::Voters { "voters" } else { "candidates" }
            )))
        }
    };
    let final_round = election.restrict(&survivors)?;
    Ok(evaluate(system, &final_round))
}

/// Byte encoding that forgets voter names and voter order.
///
/// Candidates are written in shortlex order, then the sorted multiset of
/// preferences as candidate indices.
pub fn canonical_encode(election: &Election) -> Vec<u8> {
    let index: BTreeMap<&CandidateName, u32> = election
        .candidates
        .iter()
        .enumerate()
        .map(|(i, c)| (c, i as u32))
        .collect();
    let mut out = Vec::with_capacity(16 + 8 * election.candidates.len());
    out.extend_from_slice(b"ELEC");
    out.extend_from_slice(&(election.candidates.len() as u32).to_le_bytes());
    for c in &election.candidates {
        out.extend_from_slice(&(c.len() as u32).to_le_bytes());
        out.extend_from_slice(c.as_str().as_bytes());
    }
    let mut ballots: Vec<Vec<u32>> = election
        .voters
        .iter()
        .map(|v| v.pref.0.iter().map(|c| index[c]).collect())
        .collect();
    ballots.sort_unstable();
    out.extend_from_slice(&(ballots.len() as u32).to_le_bytes());
    for ballot in ballots {
        for i in ballot {
            out.extend_from_slice(&i.to_le_bytes());
        }
    }
    out
}
