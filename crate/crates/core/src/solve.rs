//! Deciding and searching with the cheapest available method: the
//! polynomial procedures for the puzzle systems where they apply, brute
//! force everywhere else.

use serde::Serialize;

use crate::actions::{ActionKind, ActionSolution, Direction, Instance};
use crate::bruteforce::{bf_decide, bf_search, SearchBudget};
use crate::election::PartitionKind;
use crate::error::{Error, Result};
use crate::fastpaths::{fast_decide, slow_search};
use crate::systems::hardness::HardnessTarget;
use crate::systems::Selector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Fastpath,
    BruteForce,
}

/// The puzzle-system problem an instance belongs to, judged by its shape
/// alone. The procedures themselves still check goal model and tie rule.
pub fn target_for(selector: Selector, instance: &Instance) -> Option<HardnessTarget> {
    use HardnessTarget::*;
    let direction = instance.objective().direction;
    let partition = match instance {
        Instance::Partition(i) => Some(i.kind),
        _ => None,
    };
    Some(match (selector, instance.kind(), partition) {
        (Selector::E1, ActionKind::Manipulation, _) => E1Manip,
        (Selector::E1, ActionKind::Bribery, _) => E1Bribery,
        (Selector::E2, ActionKind::Manipulation, _) => E2Manip,
        (Selector::E2, ActionKind::Bribery, _) => E2Bribery,
        (Selector::E3, _, Some(PartitionKind::Voters)) => match direction {
            Direction::Constructive => E3CcPv,
            Direction::Destructive => E3DcPv,
        },
        (Selector::E4, _, Some(PartitionKind::Candidates)) => E4PcTp,
        (Selector::E5, _, Some(PartitionKind::Candidates)) => E5PcTe,
        (Selector::E6, _, Some(PartitionKind::RunoffCandidates)) => E6Rpc,
        _ => return None,
    })
}

fn fast<T>(attempt: Result<T>) -> Result<Option<T>> {
    match attempt {
        Ok(v) => Ok(Some(v)),
        Err(Error::Unsupported(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn decide(selector: Selector, instance: &Instance, budget: &SearchBudget) -> Result<(bool, Method)> {
    if let Some(answer) = fast(fast_decide(selector, instance))? {
        return Ok((answer, Method::Fastpath));
    }
    Ok((bf_decide(instance, &selector.build(), budget)?, Method::BruteForce))
}

pub fn search(selector: Selector, instance: &Instance, budget: &SearchBudget) -> Result<(ActionSolution, Method)> {
    if let Some(target) = target_for(selector, instance) {
        if let Some(sol) = fast(slow_search(target, instance))? {
            return Ok((sol, Method::Fastpath));
        }
    }
    Ok((bf_search(instance, &selector.build(), budget)?, Method::BruteForce))
}
