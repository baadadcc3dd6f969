//! Ground truth by exhaustive enumeration of each action's solution space.
//!
//! Candidate solutions are tried in a fixed canonical order (subsets by
//! increasing size, then by position in shortlex or voter-name order;
//! ballots in lexicographic order of candidate ranks), so the first
//! success is deterministic.

use std::collections::BTreeSet;
use std::rc::Rc;

use itertools::Itertools;

use crate::actions::{is_successful, ActionSolution, Instance};
use crate::election::{CandidateName, ElectionSystem, PartitionKind, Parts, Preference};
use crate::error::{Error, Result};

/// Bounds on exhaustive enumeration. Exceeding one is a [`Error::Budget`],
/// never a "no".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_candidates: usize,
    pub max_voters: usize,
    pub max_pool: usize,
    /// Cap on the number of ballot tuples tried for manipulation and bribery.
    pub max_ballot_tuples: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_candidates: 5,
            max_voters: 5,
            max_pool: 4,
            max_ballot_tuples: 20_000,
        }
    }
}

impl SearchBudget {
    /// Bounds generous enough for the hardness instances of small formulas.
    pub fn wide() -> Self {
        SearchBudget {
            max_candidates: 12,
            max_voters: 10,
            max_pool: 10,
            max_ballot_tuples: 200_000,
        }
    }
}

fn check(n: usize, max: usize, what: &str) -> Result<()> {
    if n > max {
        Err(Error::Budget(format!("{n} {what} (limit {max})")))
    } else {
        Ok(())
    }
}

/// All strict orders over `candidates`, lexicographic in shortlex ranks.
pub fn enumerate_preferences(candidates: &BTreeSet<CandidateName>, budget: &SearchBudget) -> Result<Vec<Preference>> {
    check(candidates.len(), budget.max_candidates, "candidates to order")?;
    Ok(candidates
        .iter()
        .cloned()
        .permutations(candidates.len())
        .map(Preference::new)
        .collect())
}

/// Ballots worth trying over `candidates`: the system's declared quotient
/// if it has one, otherwise every strict order.
pub fn ballot_universe<S: ElectionSystem + ?Sized>(
    system: &S,
    candidates: &BTreeSet<CandidateName>,
    budget: &SearchBudget,
) -> Result<Vec<Preference>> {
    match system.ballot_representatives(candidates) {
        Some(reps) => Ok(reps),
        None => enumerate_preferences(candidates, budget),
    }
}

/// Subsets of `items` of size at most `max_size`, by increasing size.
pub(crate) fn subsets_by_size<T: Clone>(items: &[T], max_size: usize) -> impl Iterator<Item = Vec<T>> + '_ {
    (0..=max_size.min(items.len())).flat_map(move |k| items.iter().cloned().combinations(k))
}

fn tuples(count: usize, ballots: u64, budget: &SearchBudget) -> Result<u64> {
    let total = (0..count).try_fold(1u64, |acc, _| acc.checked_mul(ballots));
    match total {
        Some(t) if t <= budget.max_ballot_tuples => Ok(t),
        _ => Err(Error::Budget(format!(
            "{ballots}^{count} ballot tuples (limit {})",
            budget.max_ballot_tuples
        ))),
    }
}

/// All `len`-tuples over `0..base`, lexicographically, first position most
/// significant. One empty tuple when `len == 0`.
fn index_tuples(len: usize, base: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = (len == 0 || base > 0).then(|| vec![0; len]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for pos in (0..len).rev() {
            succ[pos] += 1;
            if succ[pos] < base {
                next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(current)
    })
}

/// Every solution candidate for `instance` in canonical order.
fn solution_space<'a, S: ElectionSystem + ?Sized>(
    instance: &'a Instance,
    system: &S,
    budget: &SearchBudget,
) -> Result<Box<dyn Iterator<Item = ActionSolution> + 'a>> {
    Ok(match instance {
        Instance::Manipulation(i) => {
            let m: Vec<String> = i.manipulators().iter().cloned().collect();
            check(m.len(), budget.max_voters, "manipulators")?;
            let ballots = ballot_universe(system, i.candidates(), budget)?;
            tuples(m.len(), ballots.len() as u64, budget)?;
            Box::new(index_tuples(m.len(), ballots.len()).map(move |pick| ActionSolution::ManipVotes {
                votes: m.iter().cloned().zip(pick.iter().map(|&j| ballots[j].clone())).collect(),
            }))
        }
        Instance::Bribery(i) => {
            let mut names: Vec<String> = i.election().voters().iter().map(|v| v.name.clone()).collect();
            names.sort();
            check(names.len(), budget.max_voters, "voters")?;
            let ballots = ballot_universe(system, i.election().candidates(), budget)?;
            let max = i.budget().min(names.len());
            let mut total = 0u64;
            for k in 0..=max {
                let subsets = (0..k).fold(1u64, |acc, j| acc * (names.len() - j) as u64 / (j as u64 + 1));
                total = total.saturating_add(subsets.saturating_mul(tuples(k, ballots.len() as u64, budget)?));
            }
            tuples(1, total, budget)?;
            let ballots = Rc::new(ballots);
            Box::new((0..=max).flat_map(move |k| {
                let ballots = Rc::clone(&ballots);
                names.clone().into_iter().combinations(k).flat_map(move |subset| {
                    let ballots = Rc::clone(&ballots);
                    index_tuples(k, ballots.len()).map(move |pick| ActionSolution::Bribe {
                        votes: subset.iter().cloned().zip(pick.iter().map(|&j| ballots[j].clone())).collect(),
                    })
                })
            }))
        }
        Instance::AddVoters(i) => {
            check(i.pool().len(), budget.max_pool, "pool voters")?;
            let names: Vec<String> = i.pool().iter().map(|w| w.name.clone()).collect();
            Box::new(
                subsets_by_size(&names, i.limit())
                    .map(|s| ActionSolution::AddedVoters { voters: s.into_iter().collect() })
                    .collect::<Vec<_>>()
                    .into_iter(),
            )
        }
        Instance::DeleteVoters(i) => {
            let mut names: Vec<String> = i.election().voters().iter().map(|v| v.name.clone()).collect();
            names.sort();
            check(names.len(), budget.max_voters, "voters")?;
            Box::new(
                subsets_by_size(&names, i.limit())
                    .map(|s| ActionSolution::DeletedVoters { voters: s.into_iter().collect() })
                    .collect::<Vec<_>>()
                    .into_iter(),
            )
        }
        Instance::AddCandidates(i) => {
            check(i.pool().len(), budget.max_pool, "pool candidates")?;
            let pool: Vec<CandidateName> = i.pool().iter().cloned().collect();
            let limit = i.limit().unwrap_or(pool.len());
            Box::new(
                subsets_by_size(&pool, limit)
                    .map(|s| ActionSolution::AddedCandidates { candidates: s.into_iter().collect() })
                    .collect::<Vec<_>>()
                    .into_iter(),
            )
        }
        Instance::DeleteCandidates(i) => {
            check(i.election().candidates().len(), budget.max_candidates, "candidates")?;
            let others: Vec<CandidateName> = i
                .election()
                .candidates()
                .iter()
                .filter(|c| **c != i.objective.p)
                .cloned()
                .collect();
            Box::new(
                subsets_by_size(&others, i.limit())
                    .map(|s| ActionSolution::DeletedCandidates { candidates: s.into_iter().collect() })
                    .collect::<Vec<_>>()
                    .into_iter(),
            )
        }
        Instance::Partition(i) => match i.kind {
            PartitionKind::Voters => {
                let mut names: Vec<String> = i.election().voters().iter().map(|v| v.name.clone()).collect();
                names.sort();
                check(names.len(), budget.max_voters, "voters")?;
                let all: BTreeSet<String> = names.iter().cloned().collect();
                Box::new(subsets_by_size(&names, names.len()).collect::<Vec<_>>().into_iter().map(move |first| {
                    let first: BTreeSet<String> = first.into_iter().collect();
                    let second = all.difference(&first).cloned().collect();
                    ActionSolution::Partition { parts: Parts::Voters { first, second } }
                }))
            }
            PartitionKind::RunoffCandidates | PartitionKind::Candidates => {
                let c = i.election().candidates();
                check(c.len(), budget.max_candidates, "candidates")?;
                let all = c.clone();
                let items: Vec<CandidateName> = c.iter().cloned().collect();
                Box::new(subsets_by_size(&items, items.len()).collect::<Vec<_>>().into_iter().map(move |first| {
                    let first: BTreeSet<CandidateName> = first.into_iter().collect();
                    let second = all.difference(&first).cloned().collect();
                    ActionSolution::Partition { parts: Parts::Candidates { first, second } }
                }))
            }
        },
    })
}

/// The first successful solution in canonical order, or `Impossible`.
pub fn bf_search<S: ElectionSystem + ?Sized>(
    instance: &Instance,
    system: &S,
    budget: &SearchBudget,
) -> Result<ActionSolution> {
    for sol in solution_space(instance, system, budget)? {
        if is_successful(instance, &sol, system)? {
            return Ok(sol);
        }
    }
    Ok(ActionSolution::Impossible)
}

pub fn bf_decide<S: ElectionSystem + ?Sized>(instance: &Instance, system: &S, budget: &SearchBudget) -> Result<bool> {
    Ok(!bf_search(instance, system, budget)?.is_impossible())
}
