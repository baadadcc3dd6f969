//! Manipulative actions: instance types, solution witnesses, and replay.
//!
//! A solution is successful exactly when [`apply_solution`] followed by
//! [`goal_met`] says so; every other module defers to that check.

mod json;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use json::{validate_instance, RawInstance, SolutionReport};

use crate::election::{
    check_voters, distinct_set, evaluate, run_two_stage, CandidateName, Election, ElectionSystem,
    PartitionKind, Parts, Preference, TieRule, Voter,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Constructive,
    Destructive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GoalMode {
    #[serde(rename = "nonunique")]
    NonuniqueWinner,
    #[serde(rename = "unique")]
    UniqueWinner,
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "constructive" | "cc" => Ok(Direction::Constructive),
            "destructive" | "dc" => Ok(Direction::Destructive),
            _ => Err(Error::InvalidInstance(format!(
                "unknown direction `{s}` (expected constructive|destructive)"
            ))),
        }
    }
}

impl FromStr for GoalMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nonunique" => Ok(GoalMode::NonuniqueWinner),
            "unique" => Ok(GoalMode::UniqueWinner),
            _ => Err(Error::InvalidInstance(format!(
                "unknown goal `{s}` (expected nonunique|unique)"
            ))),
        }
    }
}

/// Whether `winners` meets the goal for `p`.
pub fn goal_met(winners: &BTreeSet<CandidateName>, p: &CandidateName, direction: Direction, goal: GoalMode) -> bool {
    let p_is_unique = winners.len() == 1 && winners.contains(p);
    match (direction, goal) {
        (Direction::Constructive, GoalMode::NonuniqueWinner) => winners.contains(p),
        (Direction::Destructive, GoalMode::NonuniqueWinner) => !winners.contains(p),
        (Direction::Constructive, GoalMode::UniqueWinner) => p_is_unique,
        (Direction::Destructive, GoalMode::UniqueWinner) => !p_is_unique,
    }
}

/// The distinguished candidate and what should happen to it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Objective {
    pub p: CandidateName,
    pub direction: Direction,
    pub goal: GoalMode,
}

impl Objective {
    pub fn new(p: CandidateName, direction: Direction, goal: GoalMode) -> Self {
        Objective { p, direction, goal }
    }

    pub fn constructive(p: CandidateName) -> Self {
        Self::new(p, Direction::Constructive, GoalMode::NonuniqueWinner)
    }

    pub fn destructive(p: CandidateName) -> Self {
        Self::new(p, Direction::Destructive, GoalMode::NonuniqueWinner)
    }

    pub fn met_by(&self, winners: &BTreeSet<CandidateName>) -> bool {
        goal_met(winners, &self.p, self.direction, self.goal)
    }

    fn check_in(&self, candidates: &BTreeSet<CandidateName>) -> Result<()> {
        if candidates.contains(&self.p) {
            Ok(())
        } else {
            Err(Error::InvalidInstance(format!("p = `{}` is not a candidate", self.p)))
        }
    }
}

fn voters_sorted(mut voters: Vec<Voter>) -> Vec<Voter> {
    voters.sort_by(|a, b| a.name.cmp(&b.name));
    voters
}

/// Strategic voters choose ballots on top of fixed ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationInstance {
    fixed: Election,
    manipulators: BTreeSet<String>,
    pub objective: Objective,
}

impl ManipulationInstance {
    pub fn new(fixed: Election, manipulators: BTreeSet<String>, objective: Objective) -> Result<Self> {
        objective.check_in(fixed.candidates())?;
        if let Some(v) = fixed.voters().iter().find(|v| manipulators.contains(&v.name)) {
            return Err(Error::InvalidInstance(format!(
                "`{}` is both a fixed voter and a manipulator",
                v.name
            )));
        }
        Ok(ManipulationInstance {
            fixed,
            manipulators,
            objective,
        })
    }

    pub fn fixed(&self) -> &Election {
        &self.fixed
    }

    pub fn candidates(&self) -> &BTreeSet<CandidateName> {
        self.fixed.candidates()
    }

    pub fn manipulators(&self) -> &BTreeSet<String> {
        &self.manipulators
    }
}

/// Up to `budget` existing voters may have their ballots replaced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BriberyInstance {
    election: Election,
    budget: usize,
    pub objective: Objective,
}

impl BriberyInstance {
    pub fn new(election: Election, budget: usize, objective: Objective) -> Result<Self> {
        objective.check_in(election.candidates())?;
        Ok(BriberyInstance {
            election,
            budget,
            objective,
        })
    }

    pub fn election(&self) -> &Election {
        &self.election
    }

    pub fn budget(&self) -> usize {
        self.budget
    }
}

/// Up to `limit` voters from the pool may be added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddVotersInstance {
    election: Election,
    pool: Vec<Voter>,
    limit: usize,
    pub objective: Objective,
}

impl AddVotersInstance {
    pub fn new(election: Election, pool: Vec<Voter>, limit: usize, objective: Objective) -> Result<Self> {
        objective.check_in(election.candidates())?;
        check_voters(election.candidates(), &pool)?;
        if let Some(w) = pool.iter().find(|w| election.voters().iter().any(|v| v.name == w.name)) {
            return Err(Error::InvalidInstance(format!(
                "`{}` is both a registered voter and in the pool",
                w.name
            )));
        }
        Ok(AddVotersInstance {
            election,
            pool: voters_sorted(pool),
            limit,
            objective,
        })
    }

    pub fn election(&self) -> &Election {
        &self.election
    }

    /// Pool voters sorted by name.
    pub fn pool(&self) -> &[Voter] {
        &self.pool
    }

    pub fn limit(&self) -> usize {
        self.limit
    }
}

/// Up to `limit` voters may be removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeleteVotersInstance {
    election: Election,
    limit: usize,
    pub objective: Objective,
}

impl DeleteVotersInstance {
    pub fn new(election: Election, limit: usize, objective: Objective) -> Result<Self> {
        objective.check_in(election.candidates())?;
        Ok(DeleteVotersInstance {
            election,
            limit,
            objective,
        })
    }

    pub fn election(&self) -> &Election {
        &self.election
    }

    pub fn limit(&self) -> usize {
        self.limit
    }
}

/// Candidates from a spoiler pool may be added; `limit = None` allows any
/// number of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddCandidatesInstance {
    /// Voters ranking the base candidates and the pool together.
    full: Election,
    pool: BTreeSet<CandidateName>,
    limit: Option<usize>,
    pub objective: Objective,
}

impl AddCandidatesInstance {
    pub fn new(
        full: Election,
        pool: BTreeSet<CandidateName>,
        limit: Option<usize>,
        objective: Objective,
    ) -> Result<Self> {
        if let Some(a) = pool.iter().find(|a| !full.candidates().contains(*a)) {
            return Err(Error::InvalidInstance(format!("pool member `{a}` is not ranked by the voters")));
        }
        if pool.contains(&objective.p) {
            return Err(Error::InvalidInstance(format!(
                "p = `{}` must be a base candidate, not a pool member",
                objective.p
            )));
        }
        objective.check_in(full.candidates())?;
        Ok(AddCandidatesInstance {
            full,
            pool,
            limit,
            objective,
        })
    }

    /// The election over base and pool candidates.
    pub fn full(&self) -> &Election {
        &self.full
    }

    pub fn base(&self) -> BTreeSet<CandidateName> {
        self.full.candidates().difference(&self.pool).cloned().collect()
    }

    pub fn pool(&self) -> &BTreeSet<CandidateName> {
        &self.pool
    }

    pub fn limit(&self) -> Option<usize> {
        self.limit
    }

    /// The election over the base candidates only.
    pub fn base_election(&self) -> Election {
        self.full.restrict(&self.base()).expect("base is a subset")
    }
}

/// Up to `limit` candidates other than `p` may be removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeleteCandidatesInstance {
    election: Election,
    limit: usize,
    pub objective: Objective,
}

impl DeleteCandidatesInstance {
    pub fn new(election: Election, limit: usize, objective: Objective) -> Result<Self> {
        objective.check_in(election.candidates())?;
        Ok(DeleteCandidatesInstance {
            election,
            limit,
            objective,
        })
    }

    pub fn election(&self) -> &Election {
        &self.election
    }

    pub fn limit(&self) -> usize {
        self.limit
    }
}

/// The election may be split into two first-round contests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionInstance {
    election: Election,
    pub kind: PartitionKind,
    pub rule: TieRule,
    pub objective: Objective,
}

impl PartitionInstance {
    pub fn new(election: Election, kind: PartitionKind, rule: TieRule, objective: Objective) -> Result<Self> {
        objective.check_in(election.candidates())?;
        Ok(PartitionInstance {
            election,
            kind,
            rule,
            objective,
        })
    }

    pub fn election(&self) -> &Election {
        &self.election
    }
}

/// The action a problem instance belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    Manipulation,
    Bribery,
    AddVoters,
    DeleteVoters,
    AddCandidates,
    AddCandidatesUnlimited,
    DeleteCandidates,
    Partition,
}

impl ActionKind {
    pub const ALL: [ActionKind; 8] = [
        ActionKind::Manipulation,
        ActionKind::Bribery,
        ActionKind::AddVoters,
        ActionKind::DeleteVoters,
        ActionKind::AddCandidates,
        ActionKind::DeleteCandidates,
        ActionKind::AddCandidatesUnlimited,
        ActionKind::Partition,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ActionKind::Manipulation => "manipulation",
            ActionKind::Bribery => "bribery",
            ActionKind::AddVoters => "add_voters",
            ActionKind::DeleteVoters => "delete_voters",
            ActionKind::AddCandidates => "add_candidates",
            ActionKind::AddCandidatesUnlimited => "add_candidates_unlimited",
            ActionKind::DeleteCandidates => "delete_candidates",
            ActionKind::Partition => "partition",
        }
    }
}

impl FromStr for ActionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ActionKind::ALL
            .into_iter()
            .find(|k| k.code() == s)
            .ok_or_else(|| {
                let valid: Vec<&str> = ActionKind::ALL.iter().map(|k| k.code()).collect();
                Error::InvalidInstance(format!("unknown action `{s}` (expected one of {})", valid.join("|")))
            })
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Manipulation(ManipulationInstance),
    Bribery(BriberyInstance),
    AddVoters(AddVotersInstance),
    DeleteVoters(DeleteVotersInstance),
    AddCandidates(AddCandidatesInstance),
    DeleteCandidates(DeleteCandidatesInstance),
    Partition(PartitionInstance),
}

impl Instance {
    pub fn objective(&self) -> &Objective {
        match self {
            Instance::Manipulation(i) => &i.objective,
            Instance::Bribery(i) => &i.objective,
            Instance::AddVoters(i) => &i.objective,
            Instance::DeleteVoters(i) => &i.objective,
            Instance::AddCandidates(i) => &i.objective,
            Instance::DeleteCandidates(i) => &i.objective,
            Instance::Partition(i) => &i.objective,
        }
    }

    pub fn kind(&self) -> ActionKind {
        match self {
            Instance::Manipulation(_) => ActionKind::Manipulation,
            Instance::Bribery(_) => ActionKind::Bribery,
            Instance::AddVoters(_) => ActionKind::AddVoters,
            Instance::DeleteVoters(_) => ActionKind::DeleteVoters,
            Instance::AddCandidates(i) if i.limit.is_none() => ActionKind::AddCandidatesUnlimited,
            Instance::AddCandidates(_) => ActionKind::AddCandidates,
            Instance::DeleteCandidates(_) => ActionKind::DeleteCandidates,
            Instance::Partition(_) => ActionKind::Partition,
        }
    }

    /// Short problem label such as `DC-RPC-TE` or `CC-AV`.
    pub fn label(&self) -> String {
        let dir = match self.objective().direction {
            Direction::Constructive => "CC",
            Direction::Destructive => "DC",
        };
        let body = match self {
            Instance::Manipulation(_) => "manipulation".to_owned(),
            Instance::Bribery(_) => "bribery".to_owned(),
            Instance::AddVoters(_) => "AV".to_owned(),
            Instance::DeleteVoters(_) => "DV".to_owned(),
            Instance::AddCandidates(i) if i.limit.is_none() => "ACU".to_owned(),
            Instance::AddCandidates(_) => "AC".to_owned(),
            Instance::DeleteCandidates(_) => "DC".to_owned(),
            Instance::Partition(i) => format!("{}-{}", i.kind.code(), i.rule.code()),
        };
        let unique = if self.objective().goal == GoalMode::UniqueWinner { "-unique" } else { "" };
        format!("{dir}-{body}{unique}")
    }

    /// The election before any action is taken.
    pub fn current_election(&self) -> Election {
        match self {
            Instance::Manipulation(i) => i.fixed.clone(),
            Instance::Bribery(i) => i.election.clone(),
            Instance::AddVoters(i) => i.election.clone(),
            Instance::DeleteVoters(i) => i.election.clone(),
            Instance::AddCandidates(i) => i.base_election(),
            Instance::DeleteCandidates(i) => i.election.clone(),
            Instance::Partition(i) => i.election.clone(),
        }
    }
}

/// A witness for an instance, or the explicit statement that none exists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ActionSolution {
    ManipVotes { votes: BTreeMap<String, Preference> },
    Bribe { votes: BTreeMap<String, Preference> },
    AddedVoters { voters: BTreeSet<String> },
    DeletedVoters { voters: BTreeSet<String> },
    AddedCandidates { candidates: BTreeSet<CandidateName> },
    DeletedCandidates { candidates: BTreeSet<CandidateName> },
    Partition { parts: Parts },
    Impossible,
}

impl ActionSolution {
    pub fn is_impossible(&self) -> bool {
        matches!(self, ActionSolution::Impossible)
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidSolution(msg.into())
}

fn within_limit(n: usize, limit: usize, what: &str) -> Result<()> {
    if n > limit {
        Err(bad(format!("{n} {what}, the limit is {limit}")))
    } else {
        Ok(())
    }
}

/// The election an action leads to. Partitions have no single
/// post-action election and are replayed by [`apply_solution`].
pub fn post_action_election(instance: &Instance, sol: &ActionSolution) -> Result<Election> {
    match (instance, sol) {
        (Instance::Manipulation(i), ActionSolution::ManipVotes { votes }) => {
            let names: BTreeSet<&String> = votes.keys().collect();
            if names != i.manipulators.iter().collect() {
                return Err(bad("votes must be given for exactly the manipulators"));
            }
            let mut voters = i.fixed.voters().to_vec();
            voters.extend(votes.iter().map(|(n, p)| Voter::new(n.clone(), p.clone())));
            i.fixed.with_voters(voters).map_err(|e| bad(e.to_string()))
        }
        (Instance::Bribery(i), ActionSolution::Bribe { votes }) => {
            within_limit(votes.len(), i.budget, "bribed voters")?;
            if let Some(n) = votes.keys().find(|n| !i.election.voters().iter().any(|v| &v.name == *n)) {
                return Err(bad(format!("`{n}` is not a voter")));
            }
            let voters = i
                .election
                .voters()
                .iter()
                .map(|v| match votes.get(&v.name) {
                    Some(p) => Voter::new(v.name.clone(), p.clone()),
                    None => v.clone(),
                })
                .collect();
            i.election.with_voters(voters).map_err(|e| bad(e.to_string()))
        }
        (Instance::AddVoters(i), ActionSolution::AddedVoters { voters }) => {
            within_limit(voters.len(), i.limit, "added voters")?;
            if let Some(n) = voters.iter().find(|n| !i.pool.iter().any(|w| &w.name == *n)) {
                return Err(bad(format!("`{n}` is not in the pool")));
            }
            let mut all = i.election.voters().to_vec();
            all.extend(i.pool.iter().filter(|w| voters.contains(&w.name)).cloned());
            i.election.with_voters(all).map_err(|e| bad(e.to_string()))
        }
        (Instance::DeleteVoters(i), ActionSolution::DeletedVoters { voters }) => {
            within_limit(voters.len(), i.limit, "deleted voters")?;
            if let Some(n) = voters.iter().find(|n| !i.election.voters().iter().any(|v| &v.name == *n)) {
                return Err(bad(format!("`{n}` is not a voter")));
            }
            Ok(i.election.filter_voters(|v| !voters.contains(&v.name)))
        }
        (Instance::AddCandidates(i), ActionSolution::AddedCandidates { candidates }) => {
            if let Some(limit) = i.limit {
                within_limit(candidates.len(), limit, "added candidates")?;
            }
            if let Some(c) = candidates.iter().find(|c| !i.pool.contains(*c)) {
                return Err(bad(format!("`{c}` is not in the pool")));
            }
            let mut kept = i.base();
            kept.extend(candidates.iter().cloned());
            i.full.restrict(&kept).map_err(|e| bad(e.to_string()))
        }
        (Instance::DeleteCandidates(i), ActionSolution::DeletedCandidates { candidates }) => {
            within_limit(candidates.len(), i.limit, "deleted candidates")?;
            if candidates.contains(&i.objective.p) {
                return Err(bad("the distinguished candidate cannot be deleted"));
            }
            if let Some(c) = candidates.iter().find(|c| !i.election.candidates().contains(*c)) {
                return Err(bad(format!("`{c}` is not a candidate")));
            }
            let kept = i.election.candidates().difference(candidates).cloned().collect();
            i.election.restrict(&kept).map_err(|e| bad(e.to_string()))
        }
        (_, ActionSolution::Impossible) => Err(bad("Impossible has nothing to replay")),
        (Instance::Partition(_), ActionSolution::Partition { .. }) => {
            Err(bad("partitions are replayed as two-stage elections"))
        }
        (inst, _) => Err(bad(format!("solution does not match a {} instance", inst.kind()))),
    }
}

/// Final winner set after carrying out `sol`.
pub fn apply_solution<S: ElectionSystem + ?Sized>(
    instance: &Instance,
    sol: &ActionSolution,
    system: &S,
) -> Result<BTreeSet<CandidateName>> {
    if let (Instance::Partition(i), ActionSolution::Partition { parts }) = (instance, sol) {
        return run_two_stage(system, &i.election, i.kind, parts, i.rule).map_err(|e| bad(e.to_string()));
    }
    Ok(evaluate(system, &post_action_election(instance, sol)?))
}

/// `apply_solution` followed by the goal check.
pub fn is_successful<S: ElectionSystem + ?Sized>(instance: &Instance, sol: &ActionSolution, system: &S) -> Result<bool> {
    Ok(instance.objective().met_by(&apply_solution(instance, sol, system)?))
}

pub(crate) fn voter_names(voters: &[Voter]) -> Result<BTreeSet<String>> {
    distinct_set(voters.iter().map(|v| v.name.clone()), "voter name")
}
