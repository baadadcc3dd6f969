//! Seeded generators: random formulas, elections and in-budget instances
//! for every action family, plus mutations of puzzle instances.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::actions::{
    AddCandidatesInstance, AddVotersInstance, DeleteCandidatesInstance, DeleteVotersInstance, Direction, GoalMode,
    Instance, ManipulationInstance, Objective, PartitionInstance, BriberyInstance,
};
use crate::bd::{encode_formula, CnfFormula};
use crate::systems::hardness::{build_hardness_instance, HardnessTarget};
use crate::systems::names::{e4_style, e6_style};
use crate::systems::{special_a, special_b, special_c};
use crate::election::{BitString, CandidateName, Election, PartitionKind, Preference, TieRule, Voter};
use crate::error::{Error, Result};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every formula over exactly `d` variables (for each `1 <= d <= max_vars`)
/// with between one and `max_clauses` distinct clauses, none containing a
/// variable and its negation.
pub fn all_small_formulas(max_vars: usize, max_clauses: usize) -> Vec<CnfFormula> {
    let mut out = Vec::new();
    for d in 1..=max_vars {
        let literals: Vec<i32> = (1..=d as i32).flat_map(|v| [v, -v]).collect();
        let clauses: Vec<Vec<i32>> = (1..=d)
            .flat_map(|size| literals.iter().copied().combinations(size))
            .filter(|c| c.iter().map(|l| l.abs()).all_unique())
            .collect();
        for m in 1..=max_clauses {
            for chosen in clauses.iter().cloned().combinations(m) {
                if let Ok(f) = CnfFormula::new(d, chosen) {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// A random formula over exactly `d` variables with `m` clauses of up to
/// three literals; every variable appears somewhere.
pub fn random_formula<R: Rng>(rng: &mut R, d: usize, m: usize) -> CnfFormula {
    loop {
        let mut clauses: Vec<Vec<i32>> = (0..m)
            .map(|_| {
                let width = rng.random_range(1..=d.min(3));
                let vars = rand::seq::index::sample(rng, d, width);
                vars.iter()
                    .map(|v| if rng.random_bool(0.5) { v as i32 + 1 } else { -(v as i32 + 1) })
                    .collect()
            })
            .collect();
        let used: BTreeSet<i32> = clauses.iter().flatten().map(|l| l.abs()).collect();
        let missing: Vec<i32> = (1..=d as i32).filter(|v| !used.contains(v)).collect();
        if !missing.is_empty() {
            clauses.push(missing);
        }
        if let Ok(f) = CnfFormula::new(d, clauses) {
            return f;
        }
    }
}

/// Up to `count` distinct random names of length `0..=max_len`.
pub fn random_names<R: Rng>(rng: &mut R, count: usize, max_len: usize) -> BTreeSet<CandidateName> {
    let mut universe: Vec<CandidateName> = (0..=max_len)
        .flat_map(|len| (0..1u64 << len).map(move |v| BitString::from_uint(v, len)))
        .collect();
    universe.shuffle(rng);
    universe.into_iter().take(count).collect()
}

pub fn random_preference<R: Rng>(rng: &mut R, candidates: &BTreeSet<CandidateName>) -> Preference {
    let mut order: Vec<CandidateName> = candidates.iter().cloned().collect();
    order.shuffle(rng);
    Preference::new(order)
}

pub fn random_voters<R: Rng>(rng: &mut R, candidates: &BTreeSet<CandidateName>, count: usize, prefix: &str) -> Vec<Voter> {
    (1..=count)
        .map(|i| Voter::new(format!("{prefix}{i}"), random_preference(rng, candidates)))
        .collect()
}

pub fn random_election<R: Rng>(rng: &mut R, candidates: usize, voters: usize) -> Election {
    let c = random_names(rng, candidates, 3);
    let v = random_voters(rng, &c, voters, "v");
    Election::new(c, v).expect("generated elections are valid")
}

/// The fourteen problem families the reducers cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    AddVoters(Direction),
    DeleteVoters(Direction),
    AddCandidates(Direction),
    AddCandidatesUnlimited(Direction),
    DeleteCandidates(Direction),
    DestructivePartition(PartitionKind, TieRule),
}

impl Family {
    pub fn all() -> Vec<Family> {
        let mut out = Vec::new();
        for d in [Direction::Constructive, Direction::Destructive] {
            out.extend([
                Family::AddVoters(d),
                Family::DeleteVoters(d),
                Family::AddCandidates(d),
                Family::AddCandidatesUnlimited(d),
                Family::DeleteCandidates(d),
            ]);
        }
        for kind in [PartitionKind::RunoffCandidates, PartitionKind::Candidates] {
            for rule in TieRule::ALL {
                out.push(Family::DestructivePartition(kind, rule));
            }
        }
        out
    }

    pub fn label(self) -> String {
        let dir = |d: Direction| if d == Direction::Constructive { "CC" } else { "DC" };
        match self {
            Family::AddVoters(d) => format!("{}-AV", dir(d)),
            Family::DeleteVoters(d) => format!("{}-DV", dir(d)),
            Family::AddCandidates(d) => format!("{}-AC", dir(d)),
            Family::AddCandidatesUnlimited(d) => format!("{}-ACU", dir(d)),
            Family::DeleteCandidates(d) => format!("{}-DC", dir(d)),
            Family::DestructivePartition(kind, rule) => format!("DC-{}-{}", kind.code(), rule.code()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        Family::all().into_iter().find(|f| f.label() == upper).ok_or_else(|| {
            let valid: Vec<String> = Family::all().iter().map(|f| f.label()).collect();
            Error::InvalidInstance(format!("unknown family `{s}` (expected one of {})", valid.join("|")))
        })
    }
}

fn random_goal<R: Rng>(rng: &mut R) -> GoalMode {
    if rng.random_bool(0.25) {
        GoalMode::UniqueWinner
    } else {
        GoalMode::NonuniqueWinner
    }
}

fn pick<R: Rng>(rng: &mut R, c: &BTreeSet<CandidateName>) -> CandidateName {
    c.iter().collect::<Vec<_>>().choose(rng).map(|p| (*p).clone()).expect("nonempty")
}

/// A random instance of `family` with at most five candidates, five
/// voters and four pool members.
pub fn random_instance<R: Rng>(rng: &mut R, family: Family) -> Instance {
    let goal = random_goal(rng);
    match family {
        Family::AddVoters(dir) => {
            let size = rng.random_range(1..=4);
            let c = random_names(rng, size, 3);
            let n = rng.random_range(0..=3);
            let v = random_voters(rng, &c, n, "v");
            let pool_size = rng.random_range(0..=4);
            let pool = random_voters(rng, &c, pool_size, "w");
            let k = rng.random_range(0..=pool_size + 1);
            let o = Objective::new(pick(rng, &c), dir, goal);
            Instance::AddVoters(AddVotersInstance::new(Election::new(c, v).expect("valid"), pool, k, o).expect("valid"))
        }
        Family::DeleteVoters(dir) => {
            let (cands, voters) = (rng.random_range(1..=4), rng.random_range(0..=5));
            let e = random_election(rng, cands, voters);
            let k = rng.random_range(0..=e.voters().len() + 1);
            let o = Objective::new(pick(rng, e.candidates()), dir, goal);
            Instance::DeleteVoters(DeleteVotersInstance::new(e, k, o).expect("valid"))
        }
        Family::AddCandidates(dir) | Family::AddCandidatesUnlimited(dir) => {
            let size = rng.random_range(1..=5);
            let all = random_names(rng, size, 3);
            let pool_size = rng.random_range(0..all.len().min(4));
            let mut order: Vec<CandidateName> = all.iter().cloned().collect();
            order.shuffle(rng);
            let pool: BTreeSet<CandidateName> = order.iter().take(pool_size).cloned().collect();
            let base: BTreeSet<CandidateName> = all.difference(&pool).cloned().collect();
            let n = rng.random_range(0..=4);
            let v = random_voters(rng, &all, n, "v");
            let limit = match family {
                Family::AddCandidates(_) => Some(rng.random_range(0..=pool_size + 1)),
                _ => None,
            };
            let o = Objective::new(pick(rng, &base), dir, goal);
            Instance::AddCandidates(
                AddCandidatesInstance::new(Election::new(all, v).expect("valid"), pool, limit, o).expect("valid"),
            )
        }
        Family::DeleteCandidates(dir) => {
            let (cands, voters) = (rng.random_range(1..=5), rng.random_range(0..=4));
            let e = random_election(rng, cands, voters);
            let k = rng.random_range(0..=e.candidates().len());
            let o = Objective::new(pick(rng, e.candidates()), dir, goal);
            Instance::DeleteCandidates(DeleteCandidatesInstance::new(e, k, o).expect("valid"))
        }
        Family::DestructivePartition(kind, rule) => {
            let (cands, voters) = (rng.random_range(1..=5), rng.random_range(0..=4));
            let e = random_election(rng, cands, voters);
            let goal = if rule == TieRule::TiesPromote { GoalMode::NonuniqueWinner } else { goal };
            let o = Objective::new(pick(rng, e.candidates()), Direction::Destructive, goal);
            Instance::Partition(PartitionInstance::new(e, kind, rule, o).expect("valid"))
        }
    }
}

/// A small, syntactically valid variation of `instance`: a candidate other
/// than `p` dropped, one bit of a candidate name flipped, or a decoy voter
/// added or removed. Falls back to the unchanged instance when the chosen
/// variation does not apply.
pub fn mutate_instance<R: Rng>(rng: &mut R, instance: &Instance) -> Instance {
    let e = instance.current_election();
    let p = instance.objective().p.clone();
    let c = e.candidates().clone();
    let renamed = |from: &CandidateName, to: &CandidateName| -> Option<Election> {
        if c.contains(to) {
            return None;
        }
        let map = |x: &CandidateName| if x == from { to.clone() } else { x.clone() };
        let voters = e
            .voters()
            .iter()
            .map(|v| Voter::new(v.name.clone(), Preference::new(v.pref.as_slice().iter().map(map).collect())))
            .collect();
        Election::new(c.iter().map(map), voters).ok()
    };
    let others: Vec<CandidateName> = c.iter().filter(|x| **x != p).cloned().collect();
    let (changed, new_p) = match rng.random_range(0..4) {
        0 if !others.is_empty() => {
            let drop = others.choose(rng).expect("nonempty");
            let kept = c.iter().filter(|x| *x != drop).cloned().collect();
            (e.restrict(&kept).ok(), p.clone())
        }
        1 => {
            let target = c.iter().collect::<Vec<_>>().choose(rng).map(|x| (*x).clone()).expect("nonempty");
            if target.is_empty() {
                (None, p.clone())
            } else {
                let i = rng.random_range(0..target.len());
                let flipped = BitString::from_bits(target.bits().enumerate().map(|(j, b)| if j == i { !b } else { b }));
                let new_p = if target == p { flipped.clone() } else { p.clone() };
                (renamed(&target, &flipped), new_p)
            }
        }
        2 => {
            let mut voters = e.voters().to_vec();
            voters.push(Voter::new(format!("decoy{}", voters.len() + 1), random_preference(rng, &c)));
            (e.with_voters(voters).ok(), p.clone())
        }
        _ if !e.voters().is_empty() => {
            let mut voters = e.voters().to_vec();
            voters.remove(rng.random_range(0..voters.len()));
            (e.with_voters(voters).ok(), p.clone())
        }
        _ => (None, p.clone()),
    };
    let Some(changed) = changed else {
        return instance.clone();
    };
    let o = Objective::new(new_p, instance.objective().direction, instance.objective().goal);
    let rebuilt = match instance {
        Instance::Manipulation(i) => {
            ManipulationInstance::new(changed, i.manipulators().clone(), o).map(Instance::Manipulation)
        }
        Instance::Bribery(i) => BriberyInstance::new(changed, i.budget(), o).map(Instance::Bribery),
        Instance::Partition(i) => PartitionInstance::new(changed, i.kind, i.rule, o).map(Instance::Partition),
        Instance::DeleteVoters(i) => DeleteVotersInstance::new(changed, i.limit(), o).map(Instance::DeleteVoters),
        Instance::DeleteCandidates(i) => {
            DeleteCandidatesInstance::new(changed, i.limit(), o).map(Instance::DeleteCandidates)
        }
        other => Ok(other.clone()),
    };
    rebuilt.unwrap_or_else(|_| instance.clone())
}

/// A random instance near the shape `target` is built for: a random
/// subset of the puzzle and assignment candidates for `f`, sometimes mixed
/// with assignment candidates for `g` or a junk candidate, with a random
/// distinguished candidate. Ballot and voter-partition targets get
/// mutated copies of their built instance instead.
pub fn adversarial_instance<R: Rng>(rng: &mut R, target: HardnessTarget, f: &CnfFormula, g: &CnfFormula) -> Instance {
    let x = encode_formula(f);
    let y = encode_formula(g);
    let chance = |rng: &mut R, p: f64| rng.random_bool(p);
    let mut c: BTreeSet<CandidateName> = BTreeSet::new();
    let mut preferred: Vec<CandidateName> = Vec::new();
    let pairs = |rng: &mut R, c: &mut BTreeSet<CandidateName>, puz: &BitString, d: usize, e6: bool, keep: f64| {
        for i in 1..=d {
            for v in [false, true] {
                if rng.random_bool(keep) {
                    c.insert(if e6 { e6_style(puz.len(), i, v) } else { e4_style(puz, i, v) });
                }
            }
        }
    };
    let (kind, rule) = match target {
        HardnessTarget::E4PcTp => {
            let mut z = BitString::from_bits([false]).concat(&x);
            z.push(false);
            if chance(rng, 0.9) {
                c.insert(z.clone());
            }
            preferred.push(z);
            pairs(rng, &mut c, &x, f.var_count(), false, 0.8);
            if chance(rng, 0.15) {
                pairs(rng, &mut c, &y, g.var_count(), false, 0.5);
            }
            (PartitionKind::Candidates, TieRule::TiesPromote)
        }
        HardnessTarget::E5PcTe => {
            for s in [special_a(), special_b(), special_c()] {
                if chance(rng, 0.8) {
                    c.insert(s);
                }
            }
            preferred.push(special_a());
            pairs(rng, &mut c, &x, f.var_count(), false, 0.7);
            if chance(rng, 0.3) {
                pairs(rng, &mut c, &y, g.var_count(), false, 0.6);
            }
            (PartitionKind::Candidates, TieRule::TiesEliminate)
        }
        HardnessTarget::E6Rpc => {
            let (mut x0, mut x1) = (x.clone(), x.clone());
            x0.push(false);
            x1.push(true);
            for s in [&x0, &x1] {
                if chance(rng, 0.85) {
                    c.insert(s.clone());
                }
            }
            preferred.push(x0);
            pairs(rng, &mut c, &x, f.var_count(), true, 0.8);
            let rule = if chance(rng, 0.5) { TieRule::TiesPromote } else { TieRule::TiesEliminate };
            (PartitionKind::RunoffCandidates, rule)
        }
        _ => {
            let mut inst = build_hardness_instance(target, f).expect("accepted formula");
            for _ in 0..rng.random_range(1..=3) {
                inst = mutate_instance(rng, &inst);
            }
            return inst;
        }
    };
    if chance(rng, 0.1) || c.is_empty() {
        c.insert(BitString::from_bits([true]));
    }
    let p = match preferred.into_iter().find(|p| c.contains(p)) {
        Some(p) if chance(rng, 0.6) => p,
        _ => pick(rng, &c),
    };
    let o = Objective::new(p, Direction::Constructive, GoalMode::NonuniqueWinner);
    let e = Election::new(c, Vec::new()).expect("distinct names");
    Instance::Partition(PartitionInstance::new(e, kind, rule, o).expect("p is a candidate"))
}
