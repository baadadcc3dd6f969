//! Polynomial-time decision procedures for the puzzle systems, and the
//! exponential search that assembles witnesses by solving the puzzle.
//!
//! Each procedure covers one problem shape; anything else is
//! [`Error::Unsupported`], never a "no".

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::Serialize;

use crate::actions::{ActionSolution, Direction, GoalMode, Instance, PartitionInstance};
use crate::bd::{craft_vote, find_satisfying, puzzle, satisfies, vote_bit_len, Assignment, BdSet, CnfFormula};
use crate::election::{evaluate, BitString, CandidateName, Election, PartitionKind, Parts, Preference, TieRule};
use crate::error::{Error, Result};
use crate::systems::hardness::{build_hardness_instance, extract_assignment, HardnessTarget};
use crate::systems::names::{e4_style, e6_style, parse_e4_style, PairSet};
use crate::systems::{
    distinct_tops, group_by_puzzle, special_a, special_b, special_c, E4Shape, Selector, E1, E2, E3,
    E4, E5, E6,
};

fn unsupported(what: &str, instance: &Instance) -> Error {
    Error::Unsupported(format!("{what} does not cover {}", instance.label()))
}

fn require(ok: bool, what: &str, instance: &Instance) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(unsupported(what, instance))
    }
}

fn nonunique(instance: &Instance, direction: Direction) -> bool {
    let o = instance.objective();
    o.direction == direction && o.goal == GoalMode::NonuniqueWinner
}

/// The election, and whether the instance lets at least one ballot be cast
/// or replaced.
fn ballot_action(instance: &Instance) -> Option<(&Election, bool)> {
    match instance {
        Instance::Manipulation(i) => Some((i.fixed(), !i.manipulators().is_empty())),
        Instance::Bribery(i) => Some((i.election(), !i.election().voters().is_empty() && i.budget() >= 1)),
        _ => None,
    }
}

/// Constructive manipulation and bribery of E1.
pub fn e1_decide(system: &E1, instance: &Instance) -> Result<bool> {
    const WHAT: &str = "the E1 procedure (constructive nonunique manipulation or bribery)";
    require(nonunique(instance, Direction::Constructive), WHAT, instance)?;
    let (e, can_act) = ballot_action(instance).ok_or_else(|| unsupported(WHAT, instance))?;
    if !system.bd.contains(&puzzle(e.candidates())) {
        return Ok(false);
    }
    Ok(can_act || evaluate(system, e).contains(&instance.objective().p))
}

/// Destructive manipulation and bribery of E2.
pub fn e2_decide(system: &E2, instance: &Instance) -> Result<bool> {
    const WHAT: &str = "the E2 procedure (destructive nonunique manipulation or bribery)";
    require(nonunique(instance, Direction::Destructive), WHAT, instance)?;
    let (e, can_act) = ballot_action(instance).ok_or_else(|| unsupported(WHAT, instance))?;
    if !system.bd.contains(&puzzle(e.candidates())) {
        return Ok(true);
    }
    Ok(can_act || !evaluate(system, e).contains(&instance.objective().p))
}

fn pv_instance<'a>(instance: &'a Instance, what: &str) -> Result<&'a PartitionInstance> {
    match instance {
        Instance::Partition(i) if i.kind == PartitionKind::Voters => Ok(i),
        _ => Err(unsupported(what, instance)),
    }
}

/// Voters alone already elect the first candidate.
fn e3_first_by_all(system: &E3, e: &Election) -> bool {
    e.voters().is_empty()
        || match distinct_tops(e.voters()) {
            None => true,
            Some(tops) => system.pattern_solves(e.candidates(), &tops),
        }
}

/// The voters' top choices are exactly the first `2d` candidates, one
/// voter each, so they split into an assignment and its complement.
fn e3_first_by_split(system: &E3, e: &Election) -> Option<CnfFormula> {
    let f = system.formula(e.candidates())?;
    let d = f.var_count();
    let tops = distinct_tops(e.voters())?;
    let first: BTreeSet<CandidateName> = e.candidates().iter().take(2 * d).cloned().collect();
    (e.voters().len() == 2 * d && tops == first).then_some(f)
}

/// Whether some partition of voters makes `q` the winner of E3.
fn e3_can_elect(system: &E3, e: &Election, q: &CandidateName) -> bool {
    if e.candidates().len() <= 2 {
        return e.last() == Some(q);
    }
    if e.last() == Some(q) {
        return !e.voters().is_empty();
    }
    e.first() == Some(q) && (e3_first_by_all(system, e) || e3_first_by_split(system, e).is_some())
}

/// The candidate a partition of voters should elect, if any.
fn e3_goal(system: &E3, instance: &PartitionInstance) -> Option<CandidateName> {
    let e = instance.election();
    let p = &instance.objective.p;
    match instance.objective.direction {
        Direction::Constructive => e3_can_elect(system, e, p).then(|| p.clone()),
        Direction::Destructive => [e.last(), e.first()]
            .into_iter()
            .flatten()
            .find(|q| *q != p && e3_can_elect(system, e, q))
            .cloned(),
    }
}

const E3_WHAT: &str = "the E3 procedure (nonunique partition of voters)";

/// Partition of voters in E3, either tie rule, either direction.
pub fn e3_pv_decide(system: &E3, instance: &Instance) -> Result<bool> {
    let i = pv_instance(instance, E3_WHAT)?;
    require(i.objective.goal == GoalMode::NonuniqueWinner, E3_WHAT, instance)?;
    Ok(e3_goal(system, i).is_some())
}

fn pc_instance<'a>(
    instance: &'a Instance,
    kind: PartitionKind,
    rule: Option<TieRule>,
    what: &str,
) -> Result<&'a PartitionInstance> {
    match instance {
        Instance::Partition(i)
            if i.kind == kind
                && rule.is_none_or(|r| r == i.rule)
                && nonunique(instance, Direction::Constructive) =>
        {
            Ok(i)
        }
        _ => Err(unsupported(what, instance)),
    }
}

enum E4Plan {
    /// Everyone wins when nobody fights in the first round.
    Everyone,
    /// `0puz0` alone loses its first round, leaving everyone else.
    SacrificeZ(CandidateName),
    /// The whole set already elects `0puz0`, so it gets a bye with everyone.
    AsIs,
    /// Split the full pair set into an assignment and its complement.
    Split(E4Shape),
}

fn e4_plan(system: &E4, i: &PartitionInstance) -> Option<E4Plan> {
    let p = &i.objective.p;
    match system.shape(i.election().candidates()) {
        None => Some(E4Plan::Everyone),
        Some(s) if s.z != *p => Some(E4Plan::SacrificeZ(s.z)),
        Some(s) if s.is_solved() => Some(E4Plan::AsIs),
        Some(s) if s.is_full() => Some(E4Plan::Split(s)),
        Some(_) => None,
    }
}

const E4_WHAT: &str = "the E4 procedure (constructive nonunique partition of candidates, ties promote)";

/// Constructive partition of candidates with ties promote in E4.
pub fn e4_decide(system: &E4, instance: &Instance) -> Result<bool> {
    let i = pc_instance(instance, PartitionKind::Candidates, Some(TieRule::TiesPromote), E4_WHAT)?;
    Ok(e4_plan(system, i).is_some())
}

enum E5Plan {
    /// `p` is `b` or `c` with a companion other than `a`.
    Companion,
    /// Exactly one of `b`, `c` is present: give `a` and it a bye together
    /// with one assignment for `puz`.
    ByeWithAssignment { puz: BitString, alpha: Assignment },
    /// Both `b` and `c` are present and the rest is one assignment: `b`
    /// alone in the first round drops out.
    ByeAlone,
    /// Both present and the rest is a full pair set for an accepted puzzle.
    Full { puz: BitString, formula: CnfFormula },
    /// Both present and the rest is two assignments for two accepted
    /// puzzles; `winner` names the puzzle its assignment satisfies.
    TwoGroups { winner: BitString },
}

fn e5_plan(system: &E5, i: &PartitionInstance) -> Option<E5Plan> {
    let c = i.election().candidates();
    let p = &i.objective.p;
    let (a, b, cc) = (special_a(), special_b(), special_c());
    if *p == b || *p == cc {
        return c.iter().any(|y| *y != a && y != p).then_some(E5Plan::Companion);
    }
    if *p != a {
        return None;
    }
    let rest: Vec<&CandidateName> = c.iter().filter(|y| **y != a && **y != b && **y != cc).collect();
    match (c.contains(&b), c.contains(&cc)) {
        (false, false) => None,
        (true, true) => {
            let groups = group_by_puzzle(rest.iter().copied())?;
            let accepted: Vec<(BitString, CnfFormula, PairSet)> = groups
                .into_iter()
                .map(|(puz, pairs)| system.formula(&puz).map(|f| (puz, f, pairs)))
                .collect::<Option<_>>()?;
            match accepted.as_slice() {
                [(puz, f, pairs)] => {
                    let d = f.var_count();
                    if pairs.single_assignment(d).is_some() {
                        Some(E5Plan::ByeAlone)
                    } else if pairs.is_full(d) {
                        Some(E5Plan::Full { puz: puz.clone(), formula: f.clone() })
                    } else {
                        None
                    }
                }
                [_, _] => {
                    let alphas: Vec<Assignment> = accepted
                        .iter()
                        .map(|(_, f, pairs)| pairs.single_assignment(f.var_count()))
                        .collect::<Option<_>>()?;
                    accepted
                        .iter()
                        .zip(&alphas)
                        .find(|((_, f, _), alpha)| satisfies(f, alpha).unwrap_or(false))
                        .map(|((puz, _, _), _)| E5Plan::TwoGroups { winner: puz.clone() })
                }
                _ => None,
            }
        }
        _ => {
            let mut groups: BTreeMap<BitString, PairSet> = BTreeMap::new();
            for (puz, var, value) in rest.iter().filter_map(|y| parse_e4_style(y)) {
                groups.entry(puz).or_default().insert(var, value);
            }
            groups.into_iter().find_map(|(puz, pairs)| {
                let f = system.formula(&puz)?;
                let alpha = pairs.pick(f.var_count())?;
                Some(E5Plan::ByeWithAssignment { puz, alpha })
            })
        }
    }
}

const E5_WHAT: &str = "the E5 procedure (constructive nonunique partition of candidates, ties eliminate)";

/// Constructive partition of candidates with ties eliminate in E5.
pub fn e5_decide(system: &E5, instance: &Instance) -> Result<bool> {
    let i = pc_instance(instance, PartitionKind::Candidates, Some(TieRule::TiesEliminate), E5_WHAT)?;
    Ok(e5_plan(system, i).is_some())
}

struct E6Plan {
    x0: CandidateName,
    x1: CandidateName,
    formula: CnfFormula,
}

fn e6_plan(system: &E6, i: &PartitionInstance) -> Option<E6Plan> {
    let c = i.election().candidates();
    let x0 = c.first()?;
    let head = system.head(x0)?;
    if head.bit || *x0 != i.objective.p {
        return None;
    }
    let mut x1 = head.x.clone();
    x1.push(true);
    if !c.contains(&x1) {
        return None;
    }
    let pairs = system.pairs(&head, c.iter().filter(|y| *y != x0 && **y != x1))?;
    pairs.is_full(head.formula.var_count()).then(|| E6Plan {
        x0: x0.clone(),
        x1,
        formula: head.formula,
    })
}

const E6_WHAT: &str = "the E6 procedure (constructive nonunique runoff partition of candidates)";

/// Constructive runoff partition of candidates in E6, either tie rule.
pub fn e6_decide(system: &E6, instance: &Instance) -> Result<bool> {
    let i = pc_instance(instance, PartitionKind::RunoffCandidates, None, E6_WHAT)?;
    Ok(e6_plan(system, i).is_some())
}

/// The polynomial decision for the named puzzle system.
pub fn fast_decide(selector: Selector, instance: &Instance) -> Result<bool> {
    match selector {
        Selector::E1 => e1_decide(&E1::default(), instance),
        Selector::E2 => e2_decide(&E2::default(), instance),
        Selector::E3 => e3_pv_decide(&E3::default(), instance),
        Selector::E4 => e4_decide(&E4::default(), instance),
        Selector::E5 => e5_decide(&E5::default(), instance),
        Selector::E6 => e6_decide(&E6::default(), instance),
        other => Err(Error::Unsupported(format!("no polynomial decision procedure for `{other}`"))),
    }
}

fn solve(f: &CnfFormula) -> Result<Assignment> {
    find_satisfying(f)?.ok_or_else(|| Error::NotInPuzzleSet("the accepted puzzle has no satisfying assignment".into()))
}

/// Ballots that carry a satisfying assignment, with `favorite` on top.
fn ballot_witness(bd: &BdSet, instance: &Instance, favorite: impl Fn(&Election) -> CandidateName) -> Result<ActionSolution> {
    let (e, can_act) = ballot_action(instance).expect("checked by the decision");
    let c = e.candidates();
    let crafted = match bd.member_formula(&puzzle(c)) {
        Some(f) if can_act => {
            let mut target = solve(&f)?.to_bitstring();
            for _ in f.var_count()..vote_bit_len(c.len()) {
                target.push(false);
            }
            Some(craft_vote(c, &favorite(e), &target)?)
        }
        _ => None,
    };
    Ok(match instance {
        Instance::Manipulation(i) => ActionSolution::ManipVotes {
            votes: i
                .manipulators()
                .iter()
                .map(|m| (m.clone(), crafted.clone().unwrap_or_else(|| Preference::new(c.iter().cloned().collect()))))
                .collect(),
        },
        Instance::Bribery(i) => {
            let first = i.election().voters().iter().map(|v| v.name.clone()).min();
            ActionSolution::Bribe {
                votes: first.into_iter().zip(crafted).collect(),
            }
        }
        _ => unreachable!("ballot actions only"),
    })
}

fn e3_witness(system: &E3, i: &PartitionInstance, q: &CandidateName) -> Result<Parts> {
    let e = i.election();
    let all: BTreeSet<String> = e.voters().iter().map(|v| v.name.clone()).collect();
    let split = |first: BTreeSet<String>| {
        let second = all.difference(&first).cloned().collect();
        Parts::Voters { first, second }
    };
    if e.candidates().len() <= 2 || (e.first() == Some(q) && e3_first_by_all(system, e)) {
        return Ok(split(all.clone()));
    }
    if e.last() == Some(q) {
        return Ok(split(all.iter().take(1).cloned().collect()));
    }
    let f = e3_first_by_split(system, e).expect("checked by the decision");
    let alpha = solve(&f)?;
    let firsts: Vec<&CandidateName> = e.candidates().iter().take(2 * f.var_count()).collect();
    let picked: BTreeSet<&CandidateName> = alpha.0.iter().enumerate().map(|(j, &v)| firsts[2 * j + usize::from(v)]).collect();
    Ok(split(
        e.voters()
            .iter()
            .filter(|v| v.pref.top().is_some_and(|t| picked.contains(t)))
            .map(|v| v.name.clone())
            .collect(),
    ))
}

fn candidate_parts(c: &BTreeSet<CandidateName>, first: BTreeSet<CandidateName>) -> Parts {
    let second = c.difference(&first).cloned().collect();
    Parts::Candidates { first, second }
}

/// Finds a successful action for a puzzle-system instance by solving the
/// puzzle exhaustively where the witness needs an assignment.
/// `Impossible` when the polynomial decision says no.
pub fn slow_search(target: HardnessTarget, instance: &Instance) -> Result<ActionSolution> {
    let selector = target.selector();
    if matches!(selector, Selector::E1 | Selector::E2 | Selector::E3) && !fast_decide(selector, instance)? {
        return Ok(ActionSolution::Impossible);
    }
    let parts = match selector {
        Selector::E1 => {
            let p = instance.objective().p.clone();
            return ballot_witness(&E1::default().bd, instance, move |_| p.clone());
        }
        Selector::E2 => {
            return ballot_witness(&E2::default().bd, instance, |e| e.first().expect("p is a candidate").clone());
        }
        Selector::E3 => {
            let system = E3::default();
            let i = pv_instance(instance, E3_WHAT)?;
            let q = e3_goal(&system, i).expect("checked by the decision");
            e3_witness(&system, i, &q)?
        }
        Selector::E4 => {
            let i = pc_instance(instance, PartitionKind::Candidates, Some(TieRule::TiesPromote), E4_WHAT)?;
            let c = i.election().candidates();
            let Some(plan) = e4_plan(&E4::default(), i) else {
                return Ok(ActionSolution::Impossible);
            };
            match plan {
                E4Plan::Everyone => candidate_parts(c, BTreeSet::new()),
                E4Plan::SacrificeZ(z) => candidate_parts(c, BTreeSet::from([z])),
                E4Plan::AsIs => candidate_parts(c, BTreeSet::new()),
                E4Plan::Split(shape) => {
                    let alpha = solve(&shape.formula)?;
                    let puz = shape.z.slice(1, shape.z.len() - 1);
                    let mut first: BTreeSet<CandidateName> =
                        alpha.0.iter().enumerate().map(|(j, &v)| e4_style(&puz, j + 1, v)).collect();
                    first.insert(shape.z);
                    candidate_parts(c, first)
                }
            }
        }
        Selector::E5 => {
            let i = pc_instance(instance, PartitionKind::Candidates, Some(TieRule::TiesEliminate), E5_WHAT)?;
            let c = i.election().candidates();
            let (a, b, cc) = (special_a(), special_b(), special_c());
            let Some(plan) = e5_plan(&E5::default(), i) else {
                return Ok(ActionSolution::Impossible);
            };
            match plan {
                E5Plan::Companion => {
                    let first = if c.contains(&a) { BTreeSet::from([a]) } else { BTreeSet::new() };
                    candidate_parts(c, first)
                }
                E5Plan::ByeWithAssignment { puz, alpha } => {
                    let keep: BTreeSet<CandidateName> = [a, b, cc]
                        .into_iter()
                        .chain(alpha.0.iter().enumerate().map(|(j, &v)| e4_style(&puz, j + 1, v)))
                        .collect();
                    candidate_parts(c, c.difference(&keep).cloned().collect())
                }
                E5Plan::ByeAlone => candidate_parts(c, BTreeSet::from([b])),
                E5Plan::Full { puz, formula } => {
                    let alpha = solve(&formula)?;
                    let first = [a, b]
                        .into_iter()
                        .chain(alpha.0.iter().enumerate().map(|(j, &v)| e4_style(&puz, j + 1, v)))
                        .collect();
                    candidate_parts(c, first)
                }
                E5Plan::TwoGroups { winner } => {
                    let first = [a, b]
                        .into_iter()
                        .chain(c.iter().filter(|y| parse_e4_style(y).is_some_and(|(puz, _, _)| puz == winner)).cloned())
                        .collect();
                    candidate_parts(c, first)
                }
            }
        }
        Selector::E6 => {
            let i = pc_instance(instance, PartitionKind::RunoffCandidates, None, E6_WHAT)?;
            let Some(plan) = e6_plan(&E6::default(), i) else {
                return Ok(ActionSolution::Impossible);
            };
            let alpha = solve(&plan.formula)?;
            let k = plan.x1.len() - 1;
            let first = std::iter::once(plan.x0)
                .chain(alpha.0.iter().enumerate().map(|(j, &v)| e6_style(k, j + 1, v)))
                .collect();
            candidate_parts(i.election().candidates(), first)
        }
        other => return Err(Error::Unsupported(format!("no witness construction for `{other}`"))),
    };
    Ok(ActionSolution::Partition { parts })
}

/// Timings of the polynomial decision against the exponential search on
/// one hardness instance.
#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub target: HardnessTarget,
    pub vars: usize,
    pub decision: bool,
    pub solution: ActionSolution,
    /// The assignment read back out of `solution`.
    pub assignment: Option<Vec<bool>>,
    /// Slowest of the timed decision calls.
    pub fast_secs: f64,
    /// Fastest of the timed searches.
    pub slow_secs: f64,
}

impl GapReport {
    pub fn ratio(&self) -> f64 {
        self.slow_secs / self.fast_secs.max(f64::MIN_POSITIVE)
    }
}

/// Builds the hardness instance for `formula` and times `fast_decide` and
/// `slow_search` on it, `repeats` times each. The decision is charged its
/// worst call and the search its best, so the reported gap never
/// overstates.
pub fn demo_gap(target: HardnessTarget, formula: &CnfFormula, repeats: usize) -> Result<GapReport> {
    let instance = build_hardness_instance(target, formula)?;
    let repeats = repeats.max(1);
    let mut fast_secs: f64 = 0.0;
    let mut decision = false;
    for _ in 0..repeats {
        let start = Instant::now();
        decision = fast_decide(target.selector(), &instance)?;
        fast_secs = fast_secs.max(start.elapsed().as_secs_f64());
    }
    let mut slow_secs = f64::INFINITY;
    let mut solution = ActionSolution::Impossible;
    for _ in 0..repeats {
        let start = Instant::now();
        solution = slow_search(target, &instance)?;
        slow_secs = slow_secs.min(start.elapsed().as_secs_f64());
    }
    let assignment = if solution.is_impossible() {
        None
    } else {
        Some(extract_assignment(target, &instance, &solution)?.0)
    };
    Ok(GapReport {
        target,
        vars: formula.var_count(),
        decision,
        solution,
        assignment,
        fast_secs,
        slow_secs,
    })
}
