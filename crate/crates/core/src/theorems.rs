//! Exhaustive consistency checks for how the destructive partition-control
//! problems relate.
//!
//! In the nonunique-winner model, destructive control by runoff partition
//! and by partition of candidates (ties promote) both hold exactly when
//! some `C' ∋ p` has `p` losing `(C', V)`. With ties eliminate the same
//! holds for "not the unique winner", and the goal model makes no
//! difference. With ties promote in the unique-winner model the two
//! partition problems differ, witnessed by [`AliceSystem`].

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::{Direction, GoalMode, Instance, Objective, PartitionInstance};
use crate::bruteforce::{bf_decide, enumerate_preferences, subsets_by_size, SearchBudget};
use crate::election::{
    canonical_encode, evaluate, name, CandidateName, Election, ElectionSystem, PartitionKind, TieRule, Voter,
};
use crate::error::{Error, Result};
use crate::systems::{AliceSystem, RandomTableSystem, Selector};

/// One disagreement between two quantities that should coincide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub system: String,
    pub instance: String,
    pub relation: String,
    pub left: bool,
    pub right: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub systems_checked: usize,
    pub instances_checked: usize,
    pub discrepancies: Vec<Discrepancy>,
    /// Named values the check computed, for reports that record results
    /// rather than only compare them.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub observations: BTreeMap<String, bool>,
}

impl VerificationReport {
    pub fn verified(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        self.systems_checked += other.systems_checked;
        self.instances_checked += other.instances_checked;
        self.discrepancies.extend(other.discrepancies);
        self.observations.extend(other.observations);
        self
    }
}

/// Whether some `C'` with `{p} ⊆ C' ⊆ C` defeats `p`: `p` is not a winner
/// of `(C', V)` under ties promote, not the unique winner under ties
/// eliminate.
pub fn characterization_decide<S: ElectionSystem + ?Sized>(
    system: &S,
    e: &Election,
    p: &CandidateName,
    rule: TieRule,
    budget: &SearchBudget,
) -> Result<bool> {
    if !e.candidates().contains(p) {
        return Err(Error::InvalidInstance(format!("p = `{p}` is not a candidate")));
    }
    let n = e.candidates().len();
    if n > budget.max_candidates {
        return Err(Error::Budget(format!("{n} candidates (limit {})", budget.max_candidates)));
    }
    let others: Vec<CandidateName> = e.candidates().iter().filter(|c| *c != p).cloned().collect();
    for extra in subsets_by_size(&others, others.len()) {
        let sub: BTreeSet<CandidateName> = std::iter::once(p.clone()).chain(extra).collect();
        let w = evaluate(system, &e.restrict(&sub)?);
        let defeated = match rule {
            TieRule::TiesPromote => !w.contains(p),
            TieRule::TiesEliminate => !(w.len() == 1 && w.contains(p)),
        };
        if defeated {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The elections a collapse sweep visits.
#[derive(Clone, Debug)]
pub struct ElectionSpace {
    pub names: Vec<CandidateName>,
    pub max_candidates: usize,
    pub max_voters: usize,
}

impl Default for ElectionSpace {
    /// Candidate sets of one to three names drawn from `0, 1, 10, 11`
    /// (which include the three [`AliceSystem`] names), with up to two voters.
    fn default() -> Self {
        ElectionSpace {
            names: ["0", "1", "10", "11"].iter().map(|s| name(s)).collect(),
            max_candidates: 3,
            max_voters: 2,
        }
    }
}

impl ElectionSpace {
    /// Every election in the space: each candidate set with every multiset
    /// of up to `max_voters` strict orders, deduplicated by canonical
    /// encoding.
    pub fn elections(&self) -> Result<Vec<Election>> {
        let budget = SearchBudget {
            max_candidates: self.max_candidates,
            ..SearchBudget::default()
        };
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for size in 1..=self.max_candidates.min(self.names.len()) {
            for c in self.names.iter().cloned().combinations(size) {
                let c: BTreeSet<CandidateName> = c.into_iter().collect();
                let orders = enumerate_preferences(&c, &budget)?;
                for n in 0..=self.max_voters {
                    for ballots in orders.iter().combinations_with_replacement(n) {
                        let voters = ballots
                            .into_iter()
                            .enumerate()
                            .map(|(i, pref)| Voter::new(format!("v{}", i + 1), pref.clone()))
                            .collect();
                        let e = Election::new(c.clone(), voters)?;
                        if seen.insert(canonical_encode(&e)) {
                            out.push(e);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The named systems followed by `random_seeds` seeded random systems.
pub fn sweep_systems(random_seeds: u64) -> Vec<Box<dyn ElectionSystem>> {
    let mut out: Vec<Box<dyn ElectionSystem>> = Selector::named().into_iter().map(Selector::build).collect();
    out.extend((0..random_seeds).map(|s| Box::new(RandomTableSystem::new(s)) as Box<dyn ElectionSystem>));
    out
}

fn dc_partition(e: &Election, p: &CandidateName, kind: PartitionKind, rule: TieRule, goal: GoalMode) -> Result<Instance> {
    let o = Objective::new(p.clone(), Direction::Destructive, goal);
    Ok(Instance::Partition(PartitionInstance::new(e.clone(), kind, rule, o)?))
}

fn describe(e: &Election, p: &CandidateName) -> String {
    let cands: Vec<String> = e.candidates().iter().map(|c| c.to_string()).collect();
    let votes: Vec<String> = e
        .voters()
        .iter()
        .map(|v| v.pref.as_slice().iter().map(|c| c.to_string()).join(">"))
        .collect();
    format!("C={{{}}} V=[{}] p={p}", cands.join(","), votes.join("; "))
}

fn check_one<S: ElectionSystem + ?Sized>(
    system: &S,
    e: &Election,
    p: &CandidateName,
    budget: &SearchBudget,
    out: &mut Vec<Discrepancy>,
) -> Result<()> {
    use GoalMode::{NonuniqueWinner as Nonunique, UniqueWinner as Unique};
    use PartitionKind::{Candidates as Pc, RunoffCandidates as Rpc};
    use TieRule::{TiesEliminate as Te, TiesPromote as Tp};

    let decide = |kind, rule, goal| bf_decide(&dc_partition(e, p, kind, rule, goal)?, system, budget);
    let tp = [
        ("DC-RPC-TP", decide(Rpc, Tp, Nonunique)?),
        ("DC-PC-TP", decide(Pc, Tp, Nonunique)?),
        ("exists-C'-TP", characterization_decide(system, e, p, Tp, budget)?),
    ];
    let te = [
        ("DC-RPC-TE", decide(Rpc, Te, Nonunique)?),
        ("DC-PC-TE", decide(Pc, Te, Nonunique)?),
        ("DC-RPC-TE-unique", decide(Rpc, Te, Unique)?),
        ("DC-PC-TE-unique", decide(Pc, Te, Unique)?),
        ("exists-C'-TE", characterization_decide(system, e, p, Te, budget)?),
    ];
    for group in [&tp[..], &te[..]] {
        let (first_name, first) = group[0];
        for &(other_name, other) in &group[1..] {
            if other != first {
                out.push(Discrepancy {
                    system: system.id(),
                    instance: describe(e, p),
                    relation: format!("{first_name} = {other_name}"),
                    left: first,
                    right: other,
                });
            }
        }
    }
    Ok(())
}

/// Checks, for every system, election in `space` and candidate `p`, that
/// the ties-promote quantities agree with each other and with the
/// characterization, and likewise for the ties-eliminate quantities in
/// both goal models. Systems are checked in parallel.
pub fn verify_collapse(systems: &[Box<dyn ElectionSystem>], space: &ElectionSpace) -> Result<VerificationReport> {
    let elections = space.elections()?;
    let budget = SearchBudget {
        max_candidates: space.max_candidates.max(1),
        max_voters: space.max_voters,
        ..SearchBudget::default()
    };
    let reports: Vec<Result<VerificationReport>> = systems
        .par_iter()
        .map(|system| {
            let mut report = VerificationReport {
                systems_checked: 1,
                ..VerificationReport::default()
            };
            for e in &elections {
                for p in e.candidates() {
                    check_one(system.as_ref(), e, p, &budget, &mut report.discrepancies)?;
                    report.instances_checked += 1;
                }
            }
            Ok(report)
        })
        .collect();
    reports
        .into_iter()
        .try_fold(VerificationReport::default(), |acc, r| Ok(acc.merge(r?)))
}

/// The separation instance: [`AliceSystem`] on Alice, Bob and Carol with
/// no voters, asking to stop Alice from being the unique winner.
pub fn separation_instance(kind: PartitionKind, goal: GoalMode) -> Instance {
    let c = [AliceSystem::default().alice, AliceSystem::bob(), AliceSystem::carol()];
    let e = Election::new(c.clone(), Vec::new()).expect("distinct names");
    dc_partition(&e, &c[0], kind, TieRule::TiesPromote, goal).expect("alice is a candidate")
}

/// Runs the separation witness and records its values. The report has a
/// discrepancy if the unique-winner values are not exactly
/// (partition of candidates: yes, runoff partition: no), or if the
/// nonunique values differ.
pub fn verify_separation() -> Result<VerificationReport> {
    let system = AliceSystem::default();
    let budget = SearchBudget::default();
    let mut report = VerificationReport {
        systems_checked: 1,
        ..VerificationReport::default()
    };
    let mut value = |label: &str, kind, goal| -> Result<bool> {
        let v = bf_decide(&separation_instance(kind, goal), &system, &budget)?;
        report.observations.insert(label.to_owned(), v);
        report.instances_checked += 1;
        Ok(v)
    };
    let pc_unique = value("DC-PC-TP-unique", PartitionKind::Candidates, GoalMode::UniqueWinner)?;
    let rpc_unique = value("DC-RPC-TP-unique", PartitionKind::RunoffCandidates, GoalMode::UniqueWinner)?;
    let pc = value("DC-PC-TP", PartitionKind::Candidates, GoalMode::NonuniqueWinner)?;
    let rpc = value("DC-RPC-TP", PartitionKind::RunoffCandidates, GoalMode::NonuniqueWinner)?;
    let witness = separation_instance(PartitionKind::Candidates, GoalMode::UniqueWinner).current_election();
    let instance = describe(&witness, &system.alice);
    let mut expect = |relation: &str, left: bool, right: bool| {
        if left != right {
            report.discrepancies.push(Discrepancy {
                system: system.id(),
                instance: instance.clone(),
                relation: relation.to_owned(),
                left,
                right,
            });
        }
    };
    expect("DC-PC-TP-unique = yes", pc_unique, true);
    expect("DC-RPC-TP-unique = no", rpc_unique, false);
    expect("DC-PC-TP = DC-RPC-TP", pc, rpc);
    Ok(report)
}
