//! The JSON instance format and its validation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    voter_names, ActionKind, ActionSolution, AddCandidatesInstance, AddVotersInstance,
    BriberyInstance, DeleteCandidatesInstance, DeleteVotersInstance, Direction, GoalMode, Instance,
    ManipulationInstance, Objective, PartitionInstance,
};
use crate::election::{distinct_set, CandidateName, Election, PartitionKind, TieRule, Voter};
use crate::error::{Error, Result};

/// An instance as it appears on disk, before validation.
///
/// `candidates` and `voters` describe the election (for `add_candidates`
/// the base candidates, with votes ranking base and pool together). `pool`
/// holds voter objects for `add_voters` and candidate names for
/// `add_candidates*`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub action: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<String>,
    pub p: String,
    pub candidates: Vec<String>,
    #[serde(default)]
    pub voters: Vec<Voter>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pool: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manipulators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tie_rule: Option<String>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInstance(msg.into())
}

fn nonnegative(v: Option<i64>, field: &str, action: ActionKind) -> Result<usize> {
    match v {
        None => Err(invalid(format!("`{field}` is required for {action}"))),
        Some(n) if n < 0 => Err(invalid(format!("`{field}` must be nonnegative, got {n}"))),
        Some(n) => Ok(n as usize),
    }
}

fn forbid<T>(v: &Option<T>, field: &str, action: ActionKind) -> Result<()> {
    match v {
        Some(_) => Err(invalid(format!("`{field}` does not apply to {action}"))),
        None => Ok(()),
    }
}

fn names(raw: &[String]) -> Result<Vec<CandidateName>> {
    raw.iter().map(|s| s.parse()).collect()
}

/// Checks every invariant of the instance type named by `action`.
pub fn validate_instance(raw: &RawInstance) -> Result<Instance> {
    let action: ActionKind = raw.action.parse()?;
    let direction = raw.direction.as_deref().map_or(Ok(Direction::Constructive), str::parse)?;
    let goal = raw.goal.as_deref().map_or(Ok(GoalMode::NonuniqueWinner), str::parse)?;
    let objective = Objective::new(raw.p.parse()?, direction, goal);
    let candidates = names(&raw.candidates)?;

    if action != ActionKind::Partition {
        forbid(&raw.kind, "kind", action)?;
        forbid(&raw.tie_rule, "tie_rule", action)?;
    }
    if action != ActionKind::Manipulation {
        forbid(&raw.manipulators, "manipulators", action)?;
    }
    if action != ActionKind::Bribery {
        forbid(&raw.b, "b", action)?;
    }
    if !matches!(
        action,
        ActionKind::AddVoters | ActionKind::AddCandidates | ActionKind::AddCandidatesUnlimited
    ) {
        forbid(&raw.pool, "pool", action)?;
    }
    if matches!(
        action,
        ActionKind::Manipulation | ActionKind::Bribery | ActionKind::Partition | ActionKind::AddCandidatesUnlimited
    ) {
        forbid(&raw.k, "K", action)?;
    }

    let election = || Election::new(candidates.clone(), raw.voters.clone());
    Ok(match action {
        ActionKind::Manipulation => {
            let list = raw.manipulators.clone().unwrap_or_default();
            let manipulators = distinct_set(list, "manipulator name")?;
            Instance::Manipulation(ManipulationInstance::new(election()?, manipulators, objective)?)
        }
        ActionKind::Bribery => {
            let b = nonnegative(raw.b, "b", action)?;
            Instance::Bribery(BriberyInstance::new(election()?, b, objective)?)
        }
        ActionKind::AddVoters => {
            let k = nonnegative(raw.k, "K", action)?;
            let pool: Vec<Voter> = match &raw.pool {
                None => Vec::new(),
                Some(v) => serde_json::from_value(v.clone())
                    .map_err(|e| invalid(format!("`pool` must list voters: {e}")))?,
            };
            let e = election()?;
            let mut all = e.voters().to_vec();
            all.extend(pool.iter().cloned());
            voter_names(&all)?;
            Instance::AddVoters(AddVotersInstance::new(e, pool, k, objective)?)
        }
        ActionKind::DeleteVoters => {
            let k = nonnegative(raw.k, "K", action)?;
            Instance::DeleteVoters(DeleteVotersInstance::new(election()?, k, objective)?)
        }
        ActionKind::AddCandidates | ActionKind::AddCandidatesUnlimited => {
            let limit = match action {
                ActionKind::AddCandidates => Some(nonnegative(raw.k, "K", action)?),
                _ => None,
            };
            let pool_names: Vec<String> = match &raw.pool {
                None => Vec::new(),
                Some(v) => serde_json::from_value(v.clone())
                    .map_err(|e| invalid(format!("`pool` must list candidate names: {e}")))?,
            };
            let pool = distinct_set(names(&pool_names)?, "pool candidate")?;
            let base = distinct_set(candidates.clone(), "candidate")?;
            if let Some(c) = base.intersection(&pool).next() {
                return Err(invalid(format!("`{c}` is both a candidate and in the pool")));
            }
            if !base.contains(&objective.p) {
                return Err(invalid(format!("p = `{}` is not a candidate", objective.p)));
            }
            let full = Election::new(base.into_iter().chain(pool.iter().cloned()), raw.voters.clone())?;
            Instance::AddCandidates(AddCandidatesInstance::new(full, pool, limit, objective)?)
        }
        ActionKind::DeleteCandidates => {
            let k = nonnegative(raw.k, "K", action)?;
            Instance::DeleteCandidates(DeleteCandidatesInstance::new(election()?, k, objective)?)
        }
        ActionKind::Partition => {
            let kind: PartitionKind = raw
                .kind
                .as_deref()
                .ok_or_else(|| invalid("`kind` (PV|RPC|PC) is required for partition"))?
                .parse()?;
            let rule = raw.tie_rule.as_deref().map_or(Ok(TieRule::TiesPromote), str::parse)?;
            Instance::Partition(PartitionInstance::new(election()?, kind, rule, objective)?)
        }
    })
}

impl RawInstance {
    pub fn from_instance(instance: &Instance, id: Option<String>) -> RawInstance {
        let o = instance.objective();
        let mut raw = RawInstance {
            id,
            action: instance.kind().code().to_owned(),
            direction: Some(
                match o.direction {
                    Direction::Constructive => "constructive",
                    Direction::Destructive => "destructive",
                }
                .to_owned(),
            ),
            goal: Some(
                match o.goal {
                    GoalMode::NonuniqueWinner => "nonunique",
                    GoalMode::UniqueWinner => "unique",
                }
                .to_owned(),
            ),
            p: o.p.as_str().to_owned(),
            ..RawInstance::default()
        };
        let set_election = |raw: &mut RawInstance, e: &Election, cands: &BTreeSet<CandidateName>| {
            raw.candidates = cands.iter().map(|c| c.as_str().to_owned()).collect();
            raw.voters = e.voters().to_vec();
        };
        match instance {
            Instance::Manipulation(i) => {
                set_election(&mut raw, i.fixed(), i.candidates());
                raw.manipulators = Some(i.manipulators().iter().cloned().collect());
            }
            Instance::Bribery(i) => {
                set_election(&mut raw, i.election(), i.election().candidates());
                raw.b = Some(i.budget() as i64);
            }
            Instance::AddVoters(i) => {
                set_election(&mut raw, i.election(), i.election().candidates());
                raw.k = Some(i.limit() as i64);
                raw.pool = Some(serde_json::to_value(i.pool()).expect("voters serialize"));
            }
            Instance::DeleteVoters(i) => {
                set_election(&mut raw, i.election(), i.election().candidates());
                raw.k = Some(i.limit() as i64);
            }
            Instance::AddCandidates(i) => {
                set_election(&mut raw, i.full(), &i.base());
                raw.k = i.limit().map(|k| k as i64);
                raw.pool = Some(serde_json::to_value(i.pool()).expect("names serialize"));
            }
            Instance::DeleteCandidates(i) => {
                set_election(&mut raw, i.election(), i.election().candidates());
                raw.k = Some(i.limit() as i64);
            }
            Instance::Partition(i) => {
                set_election(&mut raw, i.election(), i.election().candidates());
                raw.kind = Some(i.kind.code().to_owned());
                raw.tie_rule = Some(i.rule.code().to_owned());
            }
        }
        raw
    }
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Instance> {
        let raw: RawInstance = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        validate_instance(&raw)
    }

    pub fn to_json(&self, id: Option<String>) -> String {
        serde_json::to_string_pretty(&RawInstance::from_instance(self, id)).expect("instances serialize")
    }
}

/// A solution echoed with the instance it answers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub problem: String,
    pub solution: ActionSolution,
}
