use elecsearch_core::actions::{DeleteCandidatesInstance, PartitionInstance};
use elecsearch_core::election::name;
use elecsearch_core::gen::{random_instance, rng_from_seed, Family};
use elecsearch_core::reducers::{reduce, reduce_destructive_partition, BruteForceOracle, CountingOracle};
use elecsearch_core::systems::{AliceSystem, Plurality, RandomTableSystem};
use elecsearch_core::{
    bf_decide, is_successful, ActionSolution, Election, ElectionSystem, Error, GoalMode, Instance, Objective,
    PartitionKind, Parts, SearchBudget, TieRule, Direction,
};

fn element_count(inst: &Instance) -> usize {
    match inst {
        Instance::AddVoters(i) => i.pool().len(),
        Instance::DeleteVoters(i) => i.election().voters().len(),
        Instance::AddCandidates(i) => i.pool().len(),
        Instance::DeleteCandidates(i) => i.election().candidates().len(),
        Instance::Partition(i) => i.election().candidates().len(),
        _ => unreachable!(),
    }
}

fn check_reducer(system: &dyn ElectionSystem, inst: &Instance) {
    let budget = SearchBudget::default();
    let expected = bf_decide(inst, system, &budget).unwrap();
    let mut oracle = CountingOracle::new(BruteForceOracle::new(system, budget));
    let sol = reduce(inst, &mut oracle).unwrap();
    assert_eq!(sol.is_impossible(), !expected, "{}", inst.to_json(None));
    if expected {
        assert!(is_successful(inst, &sol, system).unwrap(), "{}: {sol:?}", inst.to_json(None));
    }
    assert!(oracle.calls() <= element_count(inst) + 1, "{} calls", oracle.calls());
}

#[test]
fn reducers_agree_with_brute_force() {
    let mut rng = rng_from_seed(1);
    let systems: Vec<Box<dyn ElectionSystem>> = vec![
        Box::new(Plurality),
        Box::new(AliceSystem::default()),
        Box::new(RandomTableSystem::new(3)),
        Box::new(RandomTableSystem::new(4)),
    ];
    for family in Family::all() {
        for system in &systems {
            for _ in 0..40 {
                let inst = random_instance(&mut rng, family);
                check_reducer(system.as_ref(), &inst);
            }
        }
    }
}

#[test]
fn refuses_ballot_actions_and_constructive_partitions() {
    let e = Election::new([name("0"), name("1")], Vec::new()).unwrap();
    let mut oracle = |_: &Instance| -> elecsearch_core::Result<bool> { Ok(true) };
    let cc = Instance::Partition(
        PartitionInstance::new(e.clone(), PartitionKind::Candidates, TieRule::TiesPromote, Objective::constructive(name("0")))
            .unwrap(),
    );
    assert!(matches!(reduce(&cc, &mut oracle), Err(Error::Unsupported(_))));
    let pv = Instance::Partition(
        PartitionInstance::new(e.clone(), PartitionKind::Voters, TieRule::TiesPromote, Objective::destructive(name("0")))
            .unwrap(),
    );
    assert!(matches!(reduce(&pv, &mut oracle), Err(Error::Unsupported(_))));
    let tp_unique = PartitionInstance::new(
        e.clone(),
        PartitionKind::RunoffCandidates,
        TieRule::TiesPromote,
        Objective::new(name("0"), Direction::Destructive, GoalMode::UniqueWinner),
    )
    .unwrap();
    assert!(matches!(reduce_destructive_partition(&tp_unique, &mut oracle), Err(Error::Unsupported(_))));
    let bribery = elecsearch_core::actions::BriberyInstance::new(e, 1, Objective::constructive(name("0"))).unwrap();
    let err = reduce(&Instance::Bribery(bribery), &mut oracle).unwrap_err();
    assert!(err.to_string().contains("does not reduce"), "{err}");
}

#[test]
fn delete_candidates_descent_follows_oracle() {
    // Success needs `1` gone and `10` kept.
    let e = Election::new([name("0"), name("1"), name("10")], Vec::new()).unwrap();
    let inst = DeleteCandidatesInstance::new(e, 2, Objective::destructive(name("0"))).unwrap();
    let mut oracle = |i: &Instance| -> elecsearch_core::Result<bool> {
        let Instance::DeleteCandidates(i) = i else { unreachable!() };
        let c = i.election().candidates();
        Ok(c.contains(&name("10")) && (i.limit() >= 1 || !c.contains(&name("1"))))
    };
    let sol = reduce(&Instance::DeleteCandidates(inst), &mut oracle).unwrap();
    assert_eq!(sol, ActionSolution::DeletedCandidates { candidates: [name("1")].into() });
}

#[test]
fn destructive_partition_returns_minimal_first_part() {
    let system = RandomTableSystem::new(9);
    let mut rng = rng_from_seed(2);
    for _ in 0..200 {
        let inst = random_instance(&mut rng, Family::DestructivePartition(PartitionKind::Candidates, TieRule::TiesEliminate));
        let Instance::Partition(pi) = &inst else { unreachable!() };
        let sol = reduce_destructive_partition(pi, &mut BruteForceOracle::new(&system, SearchBudget::default())).unwrap();
        if let ActionSolution::Partition { parts: Parts::Candidates { first, .. } } = sol {
            assert!(first.contains(&pi.objective.p));
            for c in first.iter().filter(|c| **c != pi.objective.p) {
                let mut smaller = first.clone();
                smaller.remove(c);
                let sub = PartitionInstance::new(pi.election().restrict(&smaller).unwrap(), pi.kind, pi.rule, pi.objective.clone())
                    .unwrap();
                assert!(!bf_decide(&Instance::Partition(sub), &system, &SearchBudget::default()).unwrap());
            }
        }
    }
}
