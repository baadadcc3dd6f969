use std::collections::BTreeSet;

use elecsearch_core::bd::{craft_vote, encode_formula, find_satisfying, satisfies, vote_bit_len, CnfFormula};
use elecsearch_core::election::name;
use elecsearch_core::fastpaths::slow_search;
use elecsearch_core::gen::{random_election, rng_from_seed};
use elecsearch_core::systems::names::{e4_style, e6_style, parse_e4_style};
use elecsearch_core::systems::{
    special_a, special_b, special_c, AliceSystem, Plurality, RandomTableSystem, Selector, E1, E2, E3, E4, E5, E6,
};
use elecsearch_core::{
    build_hardness_instance, evaluate, extract_assignment, ActionSolution, BitString, CandidateName, Election,
    ElectionSystem, HardnessTarget, Instance, Parts, Preference, Voter,
};
use proptest::prelude::*;

fn set(names: &[&str]) -> BTreeSet<CandidateName> {
    names.iter().map(|s| name(s)).collect()
}

fn no_voters(c: impl IntoIterator<Item = CandidateName>) -> Election {
    Election::new(c, Vec::new()).unwrap()
}

fn unit() -> CnfFormula {
    CnfFormula::new(1, vec![vec![1]]).unwrap()
}

fn with_bit(x: &BitString, bit: bool) -> CandidateName {
    let mut y = x.clone();
    y.push(bit);
    y
}

fn e4_z(x: &BitString) -> CandidateName {
    with_bit(&BitString::from_bits([false]).concat(x), false)
}

#[test]
fn e1_winners() {
    let e1 = E1::default();
    assert!(evaluate(&e1, &no_voters(set(&["0", "1", "10"]))).is_empty());
    let inst = build_hardness_instance(HardnessTarget::E1Manip, &unit()).unwrap();
    let base = inst.current_election();
    assert!(evaluate(&e1, &base).is_empty());
    let c = base.candidates().clone();
    let fav = c.iter().nth(3).unwrap().clone();
    let mut bits = find_satisfying(&unit()).unwrap().unwrap().to_bitstring();
    while bits.len() < vote_bit_len(c.len()) {
        bits.push(false);
    }
    let vote = craft_vote(&c, &fav, &bits).unwrap();
    let e = base.with_voters(vec![Voter::new("m1", vote)]).unwrap();
    assert_eq!(evaluate(&e1, &e), BTreeSet::from([fav]));
}

#[test]
fn e2_winners() {
    let e2 = E2::default();
    assert!(evaluate(&e2, &no_voters(set(&["0", "1"]))).is_empty());
    let inst = build_hardness_instance(HardnessTarget::E2Manip, &unit()).unwrap();
    let base = inst.current_election();
    assert_eq!(evaluate(&e2, &base), *base.candidates());
    let ActionSolution::ManipVotes { votes } = slow_search(HardnessTarget::E2Manip, &inst).unwrap() else {
        panic!("expected ballots");
    };
    let voters = votes.into_iter().map(|(n, p)| Voter::new(n, p)).collect();
    assert!(evaluate(&e2, &base.with_voters(voters).unwrap()).is_empty());
}

#[test]
fn e3_winners() {
    let e3 = E3::default();
    let two = Election::new(set(&["0", "1"]), vec![Voter::new("v", Preference::new(vec![name("0"), name("1")]))]).unwrap();
    assert_eq!(evaluate(&e3, &two), set(&["1"]));
    assert_eq!(evaluate(&e3, &no_voters(set(&["0", "1", "00", "01", "10"]))), set(&["0"]));
    let f = CnfFormula::new(2, vec![vec![1], vec![-2]]).unwrap();
    let inst = build_hardness_instance(HardnessTarget::E3CcPv, &f).unwrap();
    let e = inst.current_election();
    assert_eq!(evaluate(&e3, &e).len(), 1);
    assert_eq!(evaluate(&e3, &e), BTreeSet::from([e.last().unwrap().clone()]));
    // Tops c2 (v1 := 1) and c3 (v2 := 0) satisfy the formula.
    let half = e.filter_voters(|v| v.name == "v2" || v.name == "v3");
    assert_eq!(evaluate(&e3, &half), BTreeSet::from([e.first().unwrap().clone()]));
}

#[test]
fn e4_winners() {
    let e4 = E4::default();
    let x = encode_formula(&unit());
    let z = e4_z(&x);
    let solved = no_voters([z.clone(), e4_style(&x, 1, true)]);
    assert_eq!(evaluate(&e4, &solved), BTreeSet::from([z.clone()]));
    let full: BTreeSet<_> = [z.clone(), e4_style(&x, 1, false), e4_style(&x, 1, true)].into();
    let expected: BTreeSet<_> = full.iter().filter(|c| **c != z).cloned().collect();
    assert_eq!(evaluate(&e4, &no_voters(full)), expected);
    assert_eq!(evaluate(&e4, &no_voters(set(&["1"]))), set(&["1"]));
}

#[test]
fn e5_winners() {
    let e5 = E5::default();
    let (a, b, c) = (special_a(), special_b(), special_c());
    assert_eq!(evaluate(&e5, &no_voters([b.clone(), c.clone(), name("111")])), BTreeSet::from([b.clone(), c.clone()]));
    assert!(evaluate(&e5, &no_voters([b.clone()])).is_empty());
    let x = encode_formula(&unit());
    let good = no_voters([a.clone(), b.clone(), e4_style(&x, 1, true)]);
    assert_eq!(evaluate(&e5, &good), BTreeSet::from([a.clone()]));
    let bad = no_voters([a.clone(), b.clone(), e4_style(&x, 1, false)]);
    assert_eq!(evaluate(&e5, &bad), BTreeSet::from([a, b]));
}

#[test]
fn e6_winners() {
    let e6 = E6::default();
    let x = encode_formula(&unit());
    let (x0, x1) = (with_bit(&x, false), with_bit(&x, true));
    assert_eq!(evaluate(&e6, &no_voters([x0.clone(), x1.clone()])), BTreeSet::from([x0.clone()]));
    assert!(evaluate(&e6, &no_voters([x0.clone()])).is_empty());
    for alpha in [false, true] {
        let e = no_voters([x1.clone(), e6_style(x.len(), 1, alpha)]);
        assert_eq!(evaluate(&e6, &e), BTreeSet::from([x1.clone()]));
    }
    let unsat = no_voters([x0.clone(), e6_style(x.len(), 1, false)]);
    assert!(evaluate(&e6, &unsat).is_empty());
}

#[test]
fn alice_and_plurality() {
    let alice = AliceSystem::default();
    let (a, b, c) = (alice.alice.clone(), AliceSystem::bob(), AliceSystem::carol());
    assert_eq!(evaluate(&alice, &no_voters([b.clone()])), BTreeSet::from([b.clone()]));
    assert!(evaluate(&alice, &no_voters([b.clone(), c.clone()])).is_empty());
    assert_eq!(evaluate(&alice, &no_voters([a.clone(), b.clone(), c])), BTreeSet::from([a, b]));

    let two = set(&["0", "1"]);
    assert_eq!(evaluate(&Plurality, &no_voters(two.clone())), two);
    let split = Election::new(
        two.clone(),
        vec![
            Voter::new("x", Preference::new(vec![name("0"), name("1")])),
            Voter::new("y", Preference::new(vec![name("1"), name("0")])),
        ],
    )
    .unwrap();
    assert_eq!(evaluate(&Plurality, &split), two);
    assert_eq!(evaluate(&Plurality, &split.filter_voters(|v| v.name == "y")), set(&["1"]));
}

#[test]
fn random_table_is_deterministic() {
    let r = RandomTableSystem::new(17);
    let e = random_election(&mut rng_from_seed(3), 4, 3);
    assert_eq!(evaluate(&r, &e), evaluate(&r, &e));
    assert!(evaluate(&r, &Election::empty()).is_empty());
    assert_eq!(r.id(), "random:17");
}

#[test]
fn hardness_instance_shapes() {
    let f = unit();
    let x = encode_formula(&f);
    let Instance::Partition(e6) = build_hardness_instance(HardnessTarget::E6Rpc, &f).unwrap() else { panic!() };
    let k = x.len();
    let expected: BTreeSet<_> =
        [with_bit(&x, false), with_bit(&x, true), BitString::from_uint(2, 5 * k), BitString::from_uint(3, 5 * k)].into();
    assert_eq!(*e6.election().candidates(), expected);
    assert_eq!(e6.objective.p, with_bit(&x, false));

    let Instance::Partition(e4) = build_hardness_instance(HardnessTarget::E4PcTp, &f).unwrap() else { panic!() };
    assert_eq!(e4.election().candidates().len(), 3);
    assert_eq!(e4.objective.p, e4_z(&x));
    assert_eq!(e4.election().candidates().iter().filter(|c| parse_e4_style(c).is_some()).count(), 2);

    let Instance::Manipulation(e1) = build_hardness_instance(HardnessTarget::E1Manip, &f).unwrap() else { panic!() };
    assert_eq!(e1.manipulators().len(), 1);
    assert_eq!(Some(&e1.objective.p), e1.candidates().first());
    assert_eq!(elecsearch_core::bd::puzzle(e1.candidates()), x);
}

#[test]
fn e6_extraction_example() {
    let f = unit();
    let x = encode_formula(&f);
    let inst = build_hardness_instance(HardnessTarget::E6Rpc, &f).unwrap();
    let k = x.len();
    let parts = Parts::Candidates {
        first: [with_bit(&x, false), BitString::from_uint(3, 5 * k)].into(),
        second: [with_bit(&x, true), BitString::from_uint(2, 5 * k)].into(),
    };
    let a = extract_assignment(HardnessTarget::E6Rpc, &inst, &ActionSolution::Partition { parts }).unwrap();
    assert_eq!(a.0, vec![true]);
}

#[test]
fn extraction_rejects_failed_solutions() {
    let inst = build_hardness_instance(HardnessTarget::E4PcTp, &unit()).unwrap();
    let c = inst.current_election().candidates().clone();
    let sol = ActionSolution::Partition { parts: Parts::Candidates { first: c, second: BTreeSet::new() } };
    assert!(extract_assignment(HardnessTarget::E4PcTp, &inst, &sol).is_err());
}

#[test]
fn selectors_round_trip() {
    for s in Selector::named() {
        assert_eq!(s.to_string().parse::<Selector>().unwrap(), s);
        assert_eq!(s.build().id(), s.to_string());
    }
    assert_eq!("random:9".parse::<Selector>().unwrap(), Selector::Random(9));
    assert!("e7".parse::<Selector>().is_err());
    for t in HardnessTarget::ALL {
        assert_eq!(t.code().parse::<HardnessTarget>().unwrap(), t);
    }
}

fn relabeled(e: &Election) -> Election {
    let mut voters: Vec<Voter> = e.voters().iter().rev().enumerate().map(|(i, v)| Voter::new(format!("r{i}"), v.pref.clone())).collect();
    let shift = voters.len().min(1);
    voters.rotate_left(shift);
    e.with_voters(voters).unwrap()
}

proptest! {
    #[test]
    fn cardinality_and_anonymity(seed in any::<u64>(), cands in 0usize..6, voters in 0usize..5) {
        let e = random_election(&mut rng_from_seed(seed), cands, voters);
        let r = relabeled(&e);
        if !e.candidates().is_empty() {
            prop_assert_eq!(evaluate(&E3::default(), &e).len(), 1);
        }
        prop_assert!(evaluate(&E6::default(), &e).len() <= 1);
        for s in Selector::named().into_iter().chain([Selector::Random(seed)]) {
            let sys = s.build();
            prop_assert_eq!(evaluate(&sys, &e), evaluate(&sys, &r));
        }
    }

    #[test]
    fn e5_lone_a_needs_a_satisfying_assignment(mask in 0u32..256, seed in 0u64..4) {
        let formulas = [unit(), CnfFormula::new(2, vec![vec![1, 2], vec![-1]]).unwrap()];
        let f = &formulas[(seed % 2) as usize];
        let x = encode_formula(f);
        let mut pool = vec![special_a(), special_b(), special_c()];
        for i in 1..=f.var_count() {
            pool.push(e4_style(&x, i, false));
            pool.push(e4_style(&x, i, true));
        }
        let c: BTreeSet<CandidateName> = pool.iter().enumerate().filter(|(j, _)| mask & (1 << j) != 0).map(|(_, c)| c.clone()).collect();
        let w = evaluate(&E5::default(), &no_voters(c.clone()));
        if w == BTreeSet::from([special_a()]) {
            let mut alpha = vec![None; f.var_count()];
            for cand in &c {
                if let Some((_, i, v)) = parse_e4_style(cand) {
                    prop_assert!(alpha[i - 1].is_none());
                    alpha[i - 1] = Some(v);
                }
            }
            let alpha: Vec<bool> = alpha.into_iter().map(|v| v.unwrap()).collect();
            prop_assert!(satisfies(f, &elecsearch_core::bd::Assignment(alpha)).unwrap());
        }
    }
}
