//! Instances whose successful actions carry satisfying assignments.
//!
//! For each puzzle system there is a problem that is trivial to decide
//! (the instance is built from an accepted, hence satisfiable, formula) but
//! whose witnesses spell out an assignment for that formula. Building an
//! instance and reading the assignment back out of any successful solution
//! are both cheap; finding the solution is the hard part.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::actions::{
    is_successful, post_action_election, ActionSolution, BriberyInstance, Direction, GoalMode, Instance,
    ManipulationInstance, Objective, PartitionInstance,
};
use crate::bd::{encode_formula, puzzle, satisfies, Assignment, BdSet, CnfFormula};
use crate::election::{
    BitString, CandidateName, Election, ElectionSystem, PartitionKind, Parts, Preference, TieRule, Voter,
};
use crate::error::{Error, Result};

use super::names::{e4_style, e6_style, parse_e4_style, parse_e6_style};
use super::{shortlex_ballot, special_a, special_b, special_c, top_pattern, BallotReader, Selector, E3};

/// A (system, problem) pair with an easy decision and a hard search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HardnessTarget {
    /// Constructive manipulation of E1.
    E1Manip,
    /// Constructive bribery of E1.
    E1Bribery,
    /// Destructive manipulation of E2.
    E2Manip,
    /// Destructive bribery of E2.
    E2Bribery,
    /// Constructive control by partition of voters in E3.
    E3CcPv,
    /// Destructive control by partition of voters in E3.
    E3DcPv,
    /// Constructive partition of candidates in E4, ties promote.
    E4PcTp,
    /// Constructive partition of candidates in E5, ties eliminate.
    E5PcTe,
    /// Constructive runoff partition of candidates in E6.
    E6Rpc,
}

impl HardnessTarget {
    pub const ALL: [HardnessTarget; 9] = [
        HardnessTarget::E1Manip,
        HardnessTarget::E1Bribery,
        HardnessTarget::E2Manip,
        HardnessTarget::E2Bribery,
        HardnessTarget::E3CcPv,
        HardnessTarget::E3DcPv,
        HardnessTarget::E4PcTp,
        HardnessTarget::E5PcTe,
        HardnessTarget::E6Rpc,
    ];

    pub fn code(self) -> &'static str {
        match self {
            HardnessTarget::E1Manip => "e1-manipulation",
            HardnessTarget::E1Bribery => "e1-bribery",
            HardnessTarget::E2Manip => "e2-manipulation",
            HardnessTarget::E2Bribery => "e2-bribery",
            HardnessTarget::E3CcPv => "e3-cc-pv",
            HardnessTarget::E3DcPv => "e3-dc-pv",
            HardnessTarget::E4PcTp => "e4-pc-tp",
            HardnessTarget::E5PcTe => "e5-pc-te",
            HardnessTarget::E6Rpc => "e6-rpc",
        }
    }

    pub fn selector(self) -> Selector {
        match self {
            HardnessTarget::E1Manip | HardnessTarget::E1Bribery => Selector::E1,
            HardnessTarget::E2Manip | HardnessTarget::E2Bribery => Selector::E2,
            HardnessTarget::E3CcPv | HardnessTarget::E3DcPv => Selector::E3,
            HardnessTarget::E4PcTp => Selector::E4,
            HardnessTarget::E5PcTe => Selector::E5,
            HardnessTarget::E6Rpc => Selector::E6,
        }
    }

    pub fn system(self) -> Box<dyn ElectionSystem> {
        self.selector().build()
    }

    /// The puzzle set the target's system accepts.
    pub fn bd(self) -> BdSet {
        match self.selector() {
            Selector::E3 => E3::default().bd,
            _ => BdSet::default(),
        }
    }

    /// Smallest variable count the target accepts.
    pub fn min_vars(self) -> usize {
        self.bd().min_vars
    }
}

impl serde::Serialize for HardnessTarget {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

impl FromStr for HardnessTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        let short = match s.as_str() {
            "e1" => Some(HardnessTarget::E1Manip),
            "e2" => Some(HardnessTarget::E2Manip),
            "e3" => Some(HardnessTarget::E3CcPv),
            "e4" => Some(HardnessTarget::E4PcTp),
            "e5" => Some(HardnessTarget::E5PcTe),
            "e6" => Some(HardnessTarget::E6Rpc),
            _ => None,
        };
        short
            .or_else(|| HardnessTarget::ALL.into_iter().find(|t| t.code() == s))
            .ok_or_else(|| {
                let valid: Vec<&str> = HardnessTarget::ALL.iter().map(|t| t.code()).collect();
                Error::Unsupported(format!("unknown target `{s}` (expected e1..e6 or one of {})", valid.join("|")))
            })
    }
}

impl fmt::Display for HardnessTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// `bin_w(j) ∥ x_j` for every position of `x`, so the puzzle of the set is `x`.
fn spelling_candidates(x: &BitString) -> BTreeSet<CandidateName> {
    let n = x.len();
    let width = (usize::BITS - (n.max(2) - 1).leading_zeros()) as usize;
    x.bits()
        .enumerate()
        .map(|(j, bit)| {
            let mut c = BitString::from_uint(j as u64, width);
            c.push(bit);
            c
        })
        .collect()
}

fn full_pairs(d: usize, mut name: impl FnMut(usize, bool) -> CandidateName) -> impl Iterator<Item = CandidateName> {
    (1..=d).flat_map(move |i| [name(i, false), name(i, true)])
}

/// The instance for `target` built from `formula`, which must be accepted
/// by the target's puzzle set.
pub fn build_hardness_instance(target: HardnessTarget, formula: &CnfFormula) -> Result<Instance> {
    let x = encode_formula(formula);
    if !target.bd().contains(&x) {
        return Err(Error::NotInPuzzleSet(format!(
            "formula with {} variables is unsatisfiable or outside {}..={} variables",
            formula.var_count(),
            target.bd().min_vars,
            target.bd().max_vars
        )));
    }
    let d = formula.var_count();
    match target {
        HardnessTarget::E1Manip | HardnessTarget::E2Manip | HardnessTarget::E1Bribery | HardnessTarget::E2Bribery => {
            let c = spelling_candidates(&x);
            let p = c.first().expect("nonempty").clone();
            let objective = match target {
                HardnessTarget::E1Manip | HardnessTarget::E1Bribery => Objective::constructive(p),
                _ => Objective::destructive(p),
            };
            if matches!(target, HardnessTarget::E1Manip | HardnessTarget::E2Manip) {
                let e = Election::new(c, Vec::new())?;
                Ok(Instance::Manipulation(ManipulationInstance::new(
                    e,
                    BTreeSet::from(["m1".to_owned()]),
                    objective,
                )?))
            } else {
                let v = Voter::new("v1", shortlex_ballot(&c));
                let e = Election::new(c, vec![v])?;
                Ok(Instance::Bribery(BriberyInstance::new(e, 1, objective)?))
            }
        }
        HardnessTarget::E3CcPv | HardnessTarget::E3DcPv => {
            let c = spelling_candidates(&x);
            let width = (2 * d).to_string().len();
            let voters = c
                .iter()
                .take(2 * d)
                .enumerate()
                .map(|(i, top)| {
                    let mut order = vec![top.clone()];
                    order.extend(c.iter().filter(|o| *o != top).cloned());
                    Voter::new(format!("v{:0width$}", i + 1), Preference::new(order))
                })
                .collect();
            let objective = if target == HardnessTarget::E3CcPv {
                Objective::constructive(c.first().expect("nonempty").clone())
            } else {
                Objective::destructive(c.last().expect("nonempty").clone())
            };
            let e = Election::new(c, voters)?;
            Ok(Instance::Partition(PartitionInstance::new(
                e,
                PartitionKind::Voters,
                TieRule::TiesPromote,
                objective,
            )?))
        }
        HardnessTarget::E4PcTp => {
            let mut z = BitString::from_bits([false]).concat(&x);
            z.push(false);
            let c: BTreeSet<CandidateName> = std::iter::once(z.clone()).chain(full_pairs(d, |i, a| e4_style(&x, i, a))).collect();
            let e = Election::new(c, Vec::new())?;
            Ok(Instance::Partition(PartitionInstance::new(
                e,
                PartitionKind::Candidates,
                TieRule::TiesPromote,
                Objective::constructive(z),
            )?))
        }
        HardnessTarget::E5PcTe => {
            let c: BTreeSet<CandidateName> = [special_a(), special_b(), special_c()]
                .into_iter()
                .chain(full_pairs(d, |i, a| e4_style(&x, i, a)))
                .collect();
            let e = Election::new(c, Vec::new())?;
            Ok(Instance::Partition(PartitionInstance::new(
                e,
                PartitionKind::Candidates,
                TieRule::TiesEliminate,
                Objective::constructive(special_a()),
            )?))
        }
        HardnessTarget::E6Rpc => {
            let (x0, x1) = extended(&x);
            let c: BTreeSet<CandidateName> = [x0.clone(), x1]
                .into_iter()
                .chain(full_pairs(d, |i, a| e6_style(x.len(), i, a)))
                .collect();
            let e = Election::new(c, Vec::new())?;
            Ok(Instance::Partition(PartitionInstance::new(
                e,
                PartitionKind::RunoffCandidates,
                TieRule::TiesPromote,
                Objective::constructive(x0),
            )?))
        }
    }
}

fn extended(x: &BitString) -> (CandidateName, CandidateName) {
    let (mut x0, mut x1) = (x.clone(), x.clone());
    x0.push(false);
    x1.push(true);
    (x0, x1)
}

fn not_a_witness(msg: impl Into<String>) -> Error {
    Error::InvalidSolution(msg.into())
}

/// `a` or its complement, whichever satisfies `f`.
fn oriented(f: &CnfFormula, a: Assignment) -> Option<Assignment> {
    if satisfies(f, &a).ok()? {
        return Some(a);
    }
    let flipped = a.complement();
    satisfies(f, &flipped).ok()?.then_some(flipped)
}

/// The formula an instance for `target` was built from.
pub fn hidden_formula(target: HardnessTarget, instance: &Instance) -> Result<CnfFormula> {
    let c = instance.current_election().candidates().clone();
    let bd = target.bd();
    let found = match target {
        HardnessTarget::E1Manip
        | HardnessTarget::E1Bribery
        | HardnessTarget::E2Manip
        | HardnessTarget::E2Bribery
        | HardnessTarget::E3CcPv
        | HardnessTarget::E3DcPv => bd.member_formula(&puzzle(&c)),
        HardnessTarget::E4PcTp => c
            .iter()
            .find(|z| z.len() >= 2 && !z.bit(0))
            .and_then(|z| bd.member_formula(&z.slice(1, z.len() - 1))),
        HardnessTarget::E5PcTe => c.iter().find_map(parse_e4_style).and_then(|(puz, _, _)| bd.member_formula(&puz)),
        HardnessTarget::E6Rpc => c.first().and_then(|h| bd.member_formula(&h.slice(0, h.len() - 1))),
    };
    found.ok_or_else(|| Error::NotInPuzzleSet(format!("no accepted puzzle in a {target} instance")))
}

fn side_of<'a>(parts: &'a Parts, p: &CandidateName) -> Result<&'a BTreeSet<CandidateName>> {
    match parts {
        Parts::Candidates { first, second } => Ok(if first.contains(p) { first } else { second }),
        Parts::Voters { .. } => Err(not_a_witness("expected a partition of candidates")),
    }
}

/// Reads a satisfying assignment for the hidden formula out of a
/// successful solution of an instance built by [`build_hardness_instance`].
pub fn extract_assignment(target: HardnessTarget, instance: &Instance, sol: &ActionSolution) -> Result<Assignment> {
    let system = target.system();
    if !is_successful(instance, sol, &system)? {
        return Err(not_a_witness("the solution does not reach the goal"));
    }
    let f = hidden_formula(target, instance)?;
    let d = f.var_count();
    let found = match target {
        HardnessTarget::E1Manip | HardnessTarget::E1Bribery | HardnessTarget::E2Manip | HardnessTarget::E2Bribery => {
            let e = post_action_election(instance, sol)?;
            let reader = BallotReader::new(e.candidates());
            e.voters()
                .iter()
                .filter_map(|v| reader.assignment(&v.pref, d))
                .find(|a| satisfies(&f, a).unwrap_or(false))
        }
        HardnessTarget::E3CcPv | HardnessTarget::E3DcPv => {
            let (Instance::Partition(i), ActionSolution::Partition { parts: Parts::Voters { first, second } }) =
                (instance, sol)
            else {
                return Err(not_a_witness("expected a partition of voters"));
            };
            let c = i.election().candidates();
            [first, second].into_iter().find_map(|side| {
                let tops: BTreeSet<CandidateName> = i
                    .election()
                    .voters()
                    .iter()
                    .filter(|v| side.contains(&v.name))
                    .filter_map(|v| v.pref.top().cloned())
                    .collect();
                top_pattern(c, &tops, d).and_then(|a| oriented(&f, a))
            })
        }
        HardnessTarget::E4PcTp | HardnessTarget::E5PcTe | HardnessTarget::E6Rpc => {
            let ActionSolution::Partition { parts } = sol else {
                return Err(not_a_witness("expected a partition"));
            };
            let side = side_of(parts, &instance.objective().p)?;
            let k = encode_formula(&f).len();
            let mut values = vec![None; d];
            let mut consistent = true;
            for c in side {
                let parsed = match target {
                    HardnessTarget::E6Rpc => parse_e6_style(c, k),
                    _ => parse_e4_style(c).map(|(_, i, a)| (i, a)),
                };
                if let Some((i, a)) = parsed.filter(|(i, _)| (1..=d).contains(i)) {
                    consistent &= values[i - 1].is_none_or(|v| v == a);
                    values[i - 1] = Some(a);
                }
            }
            let alpha: Option<Vec<bool>> = values.into_iter().collect();
            alpha.filter(|_| consistent).and_then(|a| oriented(&f, Assignment(a)))
        }
    };
    let a = found.ok_or_else(|| not_a_witness("no satisfying assignment is encoded in the solution"))?;
    debug_assert!(satisfies(&f, &a)?);
    Ok(a)
}

/// Direction and goal of every target's instances.
pub fn target_objective(target: HardnessTarget) -> (Direction, GoalMode) {
    let direction = match target {
        HardnessTarget::E2Manip | HardnessTarget::E2Bribery | HardnessTarget::E3DcPv => Direction::Destructive,
        _ => Direction::Constructive,
    };
    (direction, GoalMode::NonuniqueWinner)
}
