//! Search from decision: each reducer finds a successful action using only
//! a decision oracle for the same problem, with a linear number of calls.
//!
//! The reducers never see the election system. They rely on
//! self-reducibility: an instance is solvable iff it is solvable with a
//! given element committed or with it discarded.

use std::collections::BTreeSet;

use crate::actions::{
    ActionSolution, AddCandidatesInstance, AddVotersInstance, DeleteCandidatesInstance,
    DeleteVotersInstance, Direction, GoalMode, Instance, PartitionInstance,
};
use crate::bruteforce::{bf_decide, SearchBudget};
use crate::election::{CandidateName, ElectionSystem, PartitionKind, Parts, TieRule};
use crate::error::{Error, Result};

/// Answers whether an instance has a successful action.
pub trait DecisionOracle {
    fn decide(&mut self, instance: &Instance) -> Result<bool>;
}

impl<F: FnMut(&Instance) -> Result<bool>> DecisionOracle for F {
    fn decide(&mut self, instance: &Instance) -> Result<bool> {
        self(instance)
    }
}

/// An oracle backed by exhaustive search over `system`.
pub struct BruteForceOracle<'a, S: ElectionSystem + ?Sized> {
    pub system: &'a S,
    pub budget: SearchBudget,
}

impl<'a, S: ElectionSystem + ?Sized> BruteForceOracle<'a, S> {
    pub fn new(system: &'a S, budget: SearchBudget) -> Self {
        BruteForceOracle { system, budget }
    }
}

impl<S: ElectionSystem + ?Sized> DecisionOracle for BruteForceOracle<'_, S> {
    fn decide(&mut self, instance: &Instance) -> Result<bool> {
        bf_decide(instance, self.system, &self.budget)
    }
}

/// Wraps an oracle and records every query.
pub struct CountingOracle<O> {
    pub inner: O,
    pub queries: Vec<Instance>,
}

impl<O> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        CountingOracle {
            inner,
            queries: Vec::new(),
        }
    }

    pub fn calls(&self) -> usize {
        self.queries.len()
    }
}

impl<O: DecisionOracle> DecisionOracle for CountingOracle<O> {
    fn decide(&mut self, instance: &Instance) -> Result<bool> {
        self.queries.push(instance.clone());
        self.inner.decide(instance)
    }
}

pub fn reduce_add_voters(instance: &AddVotersInstance, oracle: &mut dyn DecisionOracle) -> Result<ActionSolution> {
    if !oracle.decide(&Instance::AddVoters(instance.clone()))? {
        return Ok(ActionSolution::Impossible);
    }
    let mut current = instance.clone();
    let mut added = BTreeSet::new();
    for w in instance.pool() {
        if current.limit() == 0 {
            break;
        }
        let mut voters = current.election().voters().to_vec();
        voters.push(w.clone());
        let rest = current.pool().iter().filter(|x| x.name != w.name).cloned().collect();
        let with_w = AddVotersInstance::new(
            current.election().with_voters(voters)?,
            rest,
            current.limit() - 1,
            current.objective.clone(),
        )?;
        if oracle.decide(&Instance::AddVoters(with_w.clone()))? {
            added.insert(w.name.clone());
            current = with_w;
        } else {
            let rest = current.pool().iter().filter(|x| x.name != w.name).cloned().collect();
            current = AddVotersInstance::new(current.election().clone(), rest, current.limit(), current.objective.clone())?;
        }
    }
    Ok(ActionSolution::AddedVoters { voters: added })
}

pub fn reduce_delete_voters(instance: &DeleteVotersInstance, oracle: &mut dyn DecisionOracle) -> Result<ActionSolution> {
    if !oracle.decide(&Instance::DeleteVoters(instance.clone()))? {
        return Ok(ActionSolution::Impossible);
    }
    let mut order: Vec<String> = instance.election().voters().iter().map(|v| v.name.clone()).collect();
    order.sort();
    let mut current = instance.clone();
    let mut deleted = BTreeSet::new();
    for v in order {
        if current.limit() == 0 {
            break;
        }
        let without_v = DeleteVotersInstance::new(
            current.election().filter_voters(|x| x.name != v),
            current.limit() - 1,
            current.objective.clone(),
        )?;
        if oracle.decide(&Instance::DeleteVoters(without_v.clone()))? {
            deleted.insert(v);
            current = without_v;
        }
    }
    Ok(ActionSolution::DeletedVoters { voters: deleted })
}

/// Handles both the bounded form and the unlimited form (`limit = None`).
pub fn reduce_add_candidates(
    instance: &AddCandidatesInstance,
    oracle: &mut dyn DecisionOracle,
) -> Result<ActionSolution> {
    if !oracle.decide(&Instance::AddCandidates(instance.clone()))? {
        return Ok(ActionSolution::Impossible);
    }
    let mut current = instance.clone();
    let mut added = BTreeSet::new();
    for a in instance.pool() {
        if current.limit() == Some(0) {
            break;
        }
        let rest: BTreeSet<CandidateName> = current.pool().iter().filter(|x| *x != a).cloned().collect();
        let with_a = AddCandidatesInstance::new(
            current.full().clone(),
            rest.clone(),
            current.limit().map(|k| k - 1),
            current.objective.clone(),
        )?;
        if oracle.decide(&Instance::AddCandidates(with_a.clone()))? {
            added.insert(a.clone());
            current = with_a;
        } else {
            let kept: BTreeSet<CandidateName> = current.full().candidates().iter().filter(|x| *x != a).cloned().collect();
            current = AddCandidatesInstance::new(
                current.full().restrict(&kept)?,
                rest,
                current.limit(),
                current.objective.clone(),
            )?;
        }
    }
    Ok(ActionSolution::AddedCandidates { candidates: added })
}

pub fn reduce_delete_candidates(
    instance: &DeleteCandidatesInstance,
    oracle: &mut dyn DecisionOracle,
) -> Result<ActionSolution> {
    if !oracle.decide(&Instance::DeleteCandidates(instance.clone()))? {
        return Ok(ActionSolution::Impossible);
    }
    let p = instance.objective.p.clone();
    let mut current = instance.clone();
    let mut deleted = BTreeSet::new();
    for c in instance.election().candidates().iter().filter(|c| **c != p) {
        if current.limit() == 0 {
            break;
        }
        let kept: BTreeSet<CandidateName> = current.election().candidates().iter().filter(|x| *x != c).cloned().collect();
        let without_c = DeleteCandidatesInstance::new(
            current.election().restrict(&kept)?,
            current.limit() - 1,
            current.objective.clone(),
        )?;
        if oracle.decide(&Instance::DeleteCandidates(without_c.clone()))? {
            deleted.insert(c.clone());
            current = without_c;
        }
    }
    Ok(ActionSolution::DeletedCandidates { candidates: deleted })
}

/// Destructive candidate partitions (RPC or PC). Shrinks the candidate set
/// one candidate at a time while the oracle still reports success; the
/// result `C'` is inclusion-minimal and `p` already fails in `(C', V)`, so
/// `(C', C - C')` eliminates `p` in the first round.
///
/// A candidate rejected once stays rejected: the oracle's answer is
/// monotone in the candidate set, so one pass reaches minimality.
pub fn reduce_destructive_partition(
    instance: &PartitionInstance,
    oracle: &mut dyn DecisionOracle,
) -> Result<ActionSolution> {
    check_destructive_partition(instance)?;
    if !oracle.decide(&Instance::Partition(instance.clone()))? {
        return Ok(ActionSolution::Impossible);
    }
    let all = instance.election().candidates().clone();
    let p = &instance.objective.p;
    let mut kept = all.clone();
    for c in all.iter().filter(|c| *c != p) {
        let mut smaller = kept.clone();
        smaller.remove(c);
        let query = PartitionInstance::new(
            instance.election().restrict(&smaller)?,
            instance.kind,
            instance.rule,
            instance.objective.clone(),
        )?;
        if oracle.decide(&Instance::Partition(query))? {
            kept = smaller;
        }
    }
    let second = all.difference(&kept).cloned().collect();
    Ok(ActionSolution::Partition {
        parts: Parts::Candidates { first: kept, second },
    })
}

fn check_destructive_partition(instance: &PartitionInstance) -> Result<()> {
    if instance.objective.direction != Direction::Destructive {
        return Err(Error::Unsupported(
            "search does not reduce to decision for constructive partition control in general".into(),
        ));
    }
    if instance.kind == PartitionKind::Voters {
        return Err(Error::Unsupported(
            "search does not reduce to decision for partition of voters in general".into(),
        ));
    }
    if instance.rule == TieRule::TiesPromote && instance.objective.goal == GoalMode::UniqueWinner {
        return Err(Error::Unsupported(
            "destructive candidate partition with ties promote in the unique-winner model".into(),
        ));
    }
    Ok(())
}

/// Dispatches to the reducer for the instance's action, refusing actions
/// for which no general reduction exists.
pub fn reduce(instance: &Instance, oracle: &mut dyn DecisionOracle) -> Result<ActionSolution> {
    match instance {
        Instance::AddVoters(i) => reduce_add_voters(i, oracle),
        Instance::DeleteVoters(i) => reduce_delete_voters(i, oracle),
        Instance::AddCandidates(i) => reduce_add_candidates(i, oracle),
        Instance::DeleteCandidates(i) => reduce_delete_candidates(i, oracle),
        Instance::Partition(i) => reduce_destructive_partition(i, oracle),
        Instance::Manipulation(_) | Instance::Bribery(_) => Err(Error::Unsupported(format!(
            "search does not reduce to decision for {} in general: there are systems with \
             polynomial-time decision whose search problem is as hard as finding satisfying \
             assignments",
            instance.kind()
        ))),
    }
}
