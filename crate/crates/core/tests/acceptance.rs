//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fail.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use elecsearch_core::actions::PartitionInstance;
use elecsearch_core::bd::{
    craft_vote, decode_formula, encode_formula, is_satisfiable, puzzle, satisfies, vote_bit_len, vote_bits,
    CnfFormula,
};
use elecsearch_core::fastpaths::{demo_gap, fast_decide};
use elecsearch_core::gen::{
    adversarial_instance, all_small_formulas, mutate_instance, random_election, random_formula, random_instance,
    random_names, rng_from_seed, Family,
};
use elecsearch_core::reducers::{reduce, BruteForceOracle};
use elecsearch_core::systems::{AliceSystem, RandomTableSystem, Selector, E3, E6};
use elecsearch_core::theorems::{separation_instance, sweep_systems, verify_collapse, verify_separation, ElectionSpace};
use elecsearch_core::{
    apply_solution, bf_decide, bf_search, build_hardness_instance, evaluate, extract_assignment, is_successful,
    ActionSolution, BitString, Election, ElectionSystem, GoalMode, HardnessTarget, Instance, PartitionKind, Parts,
    SearchBudget, TieRule, Voter,
};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn run(id: &str, title: &str, check: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = match catch_unwind(AssertUnwindSafe(check)) {
        Ok(r) => r,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        }
    };
    let secs = start.elapsed().as_secs_f64();
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("{tag} {id} {title}: {detail} [{secs:.1}s]");
    outcome.is_ok()
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

fn c1_reducers() -> Outcome {
    const PER_SYSTEM: usize = 10;
    let systems = sweep_systems(100);
    let budget = SearchBudget::default();
    let mut rng = rng_from_seed(1001);
    let mut checked = 0usize;
    let mut yes = 0usize;
    let mut per_family = Vec::new();
    for family in Family::all() {
        let mut count = 0;
        for system in &systems {
            for _ in 0..PER_SYSTEM {
                let inst = random_instance(&mut rng, family);
                let expected = bf_decide(&inst, system.as_ref(), &budget).map_err(e)?;
                let mut oracle = BruteForceOracle::new(system.as_ref(), budget);
                let sol = reduce(&inst, &mut oracle).map_err(e)?;
                if sol.is_impossible() == expected {
                    return fail(format!("{family} on {}: oracle says {expected}, reducer gave {sol:?}", system.id()));
                }
                if expected && !is_successful(&inst, &sol, system.as_ref()).map_err(e)? {
                    return fail(format!("{family} on {}: {sol:?} does not replay", system.id()));
                }
                yes += usize::from(expected);
                count += 1;
            }
        }
        per_family.push(count);
        checked += count;
    }
    let min = per_family.iter().min().copied().unwrap_or(0);
    if min < 1000 {
        return fail(format!("only {min} instances in some family"));
    }
    Ok(format!(
        "{checked} instances, {} systems, {min} per family, {yes} solvable",
        systems.len()
    ))
}

fn c2_collapse() -> Outcome {
    let systems = sweep_systems(100);
    let report = verify_collapse(&systems, &ElectionSpace::default()).map_err(e)?;
    if !report.verified() {
        return fail(format!("{} discrepancies, first {:?}", report.discrepancies.len(), report.discrepancies[0]));
    }
    Ok(format!(
        "{} systems, {} (election, p) pairs, 0 discrepancies",
        report.systems_checked, report.instances_checked
    ))
}

fn c3_separation() -> Outcome {
    let report = verify_separation().map_err(e)?;
    let pc = report.observations["DC-PC-TP-unique"];
    let rpc = report.observations["DC-RPC-TP-unique"];
    if (pc, rpc) != (true, false) || !report.verified() {
        return fail(format!("(PC, RPC) = ({pc}, {rpc}), {:?}", report.discrepancies));
    }
    let alice = AliceSystem::default();
    let inst = separation_instance(PartitionKind::Candidates, GoalMode::UniqueWinner);
    let bye = ActionSolution::Partition {
        parts: Parts::Candidates {
            first: BTreeSet::new(),
            second: inst.current_election().candidates().clone(),
        },
    };
    let winners = apply_solution(&inst, &bye, &alice).map_err(e)?;
    let expected: BTreeSet<_> = [alice.alice.clone(), AliceSystem::bob()].into();
    if winners != expected {
        return fail(format!("bye for everyone gives {winners:?}"));
    }
    Ok("(DC-PC-TP-unique, DC-RPC-TP-unique) = (true, false); (∅, C) gives {Alice, Bob}".into())
}

fn with_rule(inst: &Instance, rule: TieRule) -> Instance {
    match inst {
        Instance::Partition(i) => Instance::Partition(
            PartitionInstance::new(i.election().clone(), i.kind, rule, i.objective.clone()).expect("valid already"),
        ),
        other => other.clone(),
    }
}

/// Each target with the tie rules its decision procedure covers.
fn fast_variants() -> Vec<(HardnessTarget, Option<TieRule>)> {
    use HardnessTarget::*;
    let both = [Some(TieRule::TiesPromote), Some(TieRule::TiesEliminate)];
    let mut out: Vec<_> = [E1Manip, E1Bribery, E2Manip, E2Bribery, E4PcTp, E5PcTe].map(|t| (t, None)).to_vec();
    for t in [E3CcPv, E3DcPv, E6Rpc] {
        out.extend(both.map(|r| (t, r)));
    }
    out
}

fn agree(target: HardnessTarget, inst: &Instance) -> Result<bool, String> {
    let fast = fast_decide(target.selector(), inst).map_err(e)?;
    let slow = bf_decide(inst, &target.system(), &SearchBudget::wide()).map_err(e)?;
    if fast != slow {
        return fail(format!("{target}: fast {fast}, brute force {slow} on {}", inst.to_json(None)));
    }
    Ok(fast)
}

fn c4_fastpaths() -> Outcome {
    let formulas: Vec<CnfFormula> = all_small_formulas(2, 3).into_iter().filter(is_satisfiable).collect();
    let mut built = 0usize;
    let mut perturbed = 0usize;
    let mut yes = 0usize;
    let mut rng = rng_from_seed(4004);
    for (target, rule) in fast_variants() {
        let pool: Vec<&CnfFormula> = formulas.iter().filter(|f| f.var_count() >= target.min_vars()).collect();
        let apply = |inst: Instance| rule.map_or(inst.clone(), |r| with_rule(&inst, r));
        for f in &pool {
            let inst = apply(build_hardness_instance(target, f).map_err(e)?);
            if !agree(target, &inst)? {
                return fail(format!("{target}: built instance for {f:?} decided no"));
            }
            built += 1;
        }
        for round in 0..60 {
            let f = pool[rng.random_range(0..pool.len())];
            let inst = if round % 2 == 0 {
                let g = pool[rng.random_range(0..pool.len())];
                adversarial_instance(&mut rng, target, f, g)
            } else {
                let mut inst = build_hardness_instance(target, f).map_err(e)?;
                for _ in 0..rng.random_range(1..=3) {
                    inst = mutate_instance(&mut rng, &inst);
                }
                inst
            };
            yes += usize::from(agree(target, &apply(inst))?);
            perturbed += 1;
        }
    }
    if perturbed < 500 {
        return fail(format!("only {perturbed} perturbed instances"));
    }
    Ok(format!(
        "{built} built instances (every satisfiable formula with d <= 2, up to 3 clauses), \
         {perturbed} perturbed ({yes} yes)"
    ))
}

fn corpus() -> Vec<CnfFormula> {
    let mut rng = rng_from_seed(5005);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut add = |f: CnfFormula, out: &mut Vec<CnfFormula>| {
        if is_satisfiable(&f) && seen.insert(encode_formula(&f)) {
            out.push(f);
        }
    };
    while out.len() < 200 {
        let d = rng.random_range(2..=4);
        let m = rng.random_range(1..=5);
        add(random_formula(&mut rng, d, m), &mut out);
    }
    for f in all_small_formulas(1, 2) {
        add(f, &mut out);
    }
    out
}

fn c5_extraction() -> Outcome {
    let formulas = corpus();
    let budget = SearchBudget::wide();
    let mut checked = 0usize;
    for target in HardnessTarget::ALL {
        let system = target.system();
        for f in formulas.iter().filter(|f| f.var_count() >= target.min_vars()) {
            let inst = build_hardness_instance(target, f).map_err(e)?;
            let sol = bf_search(&inst, &system, &budget).map_err(e)?;
            let a = extract_assignment(target, &inst, &sol).map_err(|err| format!("{target} on {f:?}: {err}"))?;
            if !satisfies(f, &a).map_err(e)? {
                return fail(format!("{target} on {f:?}: extracted {:?}", a.0));
            }
            checked += 1;
        }
    }
    Ok(format!("{} formulas with d <= 4, {checked} (target, formula) pairs", formulas.len()))
}

fn relabel<R: Rng>(rng: &mut R, e: &Election) -> Election {
    let mut voters: Vec<Voter> = e.voters().to_vec();
    voters.shuffle(rng);
    let voters = voters
        .into_iter()
        .enumerate()
        .map(|(i, v)| Voter::new(format!("r{i}-{}", rng.random_range(0..1000)), v.pref))
        .collect();
    e.with_voters(voters).expect("same candidates")
}

fn c6_cardinality() -> Outcome {
    let budget = SearchBudget::default();
    let mut rng = rng_from_seed(6006);
    let (e3, e6) = (E3::default(), E6::default());
    for n in 0..10_000 {
        let cands = rng.random_range(1..=budget.max_candidates);
        let voters = rng.random_range(0..=budget.max_voters);
        let e = random_election(&mut rng, cands, voters);
        let w3 = evaluate(&e3, &e).len();
        let w6 = evaluate(&e6, &e).len();
        if w3 != 1 || w6 > 1 {
            return fail(format!("election {n}: e3 has {w3} winners, e6 has {w6}"));
        }
    }
    let mut systems: Vec<Box<dyn ElectionSystem>> = Selector::named().into_iter().map(Selector::build).collect();
    systems.push(Box::new(RandomTableSystem::new(6)));
    for n in 0..1_000 {
        let cands = rng.random_range(0..=budget.max_candidates);
        let voters = rng.random_range(0..=budget.max_voters);
        let e = random_election(&mut rng, cands, voters);
        let r = relabel(&mut rng, &e);
        for s in &systems {
            if evaluate(s.as_ref(), &e) != evaluate(s.as_ref(), &r) {
                return fail(format!("pair {n}: {} depends on voter names or order", s.id()));
            }
        }
    }
    Ok(format!("10000 elections for e3/e6; 1000 relabeled pairs over {} systems", systems.len()))
}

fn c7_gap() -> Outcome {
    let mut lines = Vec::new();
    let mut slow = Vec::new();
    for d in [8, 12, 16] {
        let f = CnfFormula::all_true_units(d).map_err(e)?;
        let r = demo_gap(HardnessTarget::E6Rpc, &f, 20).map_err(e)?;
        if !r.decision || r.assignment != Some(vec![true; d]) {
            return fail(format!("d = {d}: decision {}, assignment {:?}", r.decision, r.assignment));
        }
        if r.fast_secs >= 0.010 {
            return fail(format!("d = {d}: decision took {:.3} ms", r.fast_secs * 1e3));
        }
        lines.push(format!("d={d} fast {:.3} ms slow {:.3} ms", r.fast_secs * 1e3, r.slow_secs * 1e3));
        slow.push(r.slow_secs);
    }
    let growth = slow[2] / slow[0];
    if growth < 8.0 {
        return fail(format!("search grew {growth:.1}x from d = 8 to 16; {}", lines.join(", ")));
    }
    Ok(format!("{}; search growth {growth:.0}x", lines.join(", ")))
}

fn c8_codecs() -> Outcome {
    let mut rng = rng_from_seed(8008);
    for n in 0..1_000 {
        let d = rng.random_range(1..=6);
        let m = rng.random_range(0..=6);
        let f = random_formula(&mut rng, d, m);
        if decode_formula(&encode_formula(&f)).as_ref() != Some(&f) {
            return fail(format!("formula {n} ({f:?}) does not round trip"));
        }
    }
    let mut crafted = 0usize;
    for k in 1..=8usize {
        let ranked: BTreeSet<_> = (0..k as u64).map(|i| BitString::from_uint(i, 3)).collect();
        let spread = random_names(&mut rng, k, 5);
        for c in [ranked, spread] {
            let len = vote_bit_len(c.len());
            for fav in &c {
                for t in 0..1u32 << len {
                    let target = BitString::from_bits((0..len).map(|i| t & (1 << i) != 0));
                    let pref = craft_vote(&c, fav, &target).map_err(e)?;
                    if pref.top() != Some(fav) || vote_bits(&c, &pref).map_err(e)? != target {
                        return fail(format!("craft_vote({c:?}, {fav}, {target}) misses"));
                    }
                    crafted += 1;
                }
            }
        }
    }
    for n in 0..1_000 {
        let count = rng.random_range(0..=12);
        let c = random_names(&mut rng, count, 5);
        let eps = usize::from(c.contains(&BitString::default()));
        if puzzle(&c).len() != c.len() - eps {
            return fail(format!("set {n}: |puzzle| = {}, |C| = {}", puzzle(&c).len(), c.len()));
        }
    }
    Ok(format!("1000 formulas; {crafted} crafted votes over |C| <= 8; 1000 puzzle lengths"))
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("C1", "reducers agree with brute force", c1_reducers),
        ("C2", "destructive partition collapse", c2_collapse),
        ("C3", "unique-winner separation witness", c3_separation),
        ("C4", "fast decisions agree with brute force", c4_fastpaths),
        ("C5", "assignments extracted from witnesses", c5_extraction),
        ("C6", "winner cardinality and anonymity", c6_cardinality),
        ("C7", "decision/search gap", c7_gap),
        ("C8", "codec round trips", c8_codecs),
    ];
    // Criterion ids given as arguments select a subset; libtest flags are ignored.
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, title, check) in criteria {
        if only.is_empty() || only.iter().any(|o| o.eq_ignore_ascii_case(id)) {
            ran += 1;
            failed += usize::from(!run(id, title, check));
        }
    }
    println!("{} passed, {failed} failed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
