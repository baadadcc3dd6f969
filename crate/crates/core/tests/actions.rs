use std::collections::{BTreeMap, BTreeSet};

use elecsearch_core::election::name;
use elecsearch_core::gen::{random_instance, rng_from_seed, Family};
use elecsearch_core::reducers::{reduce, BruteForceOracle, CountingOracle};
use elecsearch_core::systems::{AliceSystem, Plurality};
use elecsearch_core::theorems::separation_instance;
use elecsearch_core::{
    apply_solution, bf_decide, bf_search, is_successful, ActionSolution, Election, Error, GoalMode, Instance,
    PartitionKind, Parts, Preference, SearchBudget, Voter,
};
use elecsearch_core::bruteforce::enumerate_preferences;
use proptest::prelude::*;

fn pref(names: &[&str]) -> Preference {
    Preference::new(names.iter().map(|s| name(s)).collect())
}

fn parse(json: &str) -> elecsearch_core::Result<Instance> {
    Instance::from_json(json)
}

#[test]
fn json_validation() {
    let missing_p = r#"{"action":"delete_voters","p":"11","candidates":["0","1"],"K":0}"#;
    assert!(matches!(parse(missing_p), Err(Error::InvalidInstance(_))));

    let overlap = r#"{"action":"add_candidates","p":"0","candidates":["0","1"],"pool":["1"],"K":1}"#;
    assert!(parse(overlap).is_err());

    let zero_bribe = r#"{"action":"bribery","p":"0","candidates":["0","1"],
        "voters":[{"name":"v1","prefs":["1","0"]}],"b":0}"#;
    assert!(parse(zero_bribe).is_ok());

    let dup = r#"{"action":"delete_voters","p":"0","candidates":["0","10","0"],"K":0}"#;
    let msg = parse(dup).unwrap_err().to_string();
    assert!(msg.contains("`0`"), "{msg}");

    let unknown = r#"{"action":"swap","p":"0","candidates":["0"]}"#;
    let msg = parse(unknown).unwrap_err().to_string();
    assert!(msg.contains("add_voters") && msg.contains("partition"), "{msg}");

    let stray = r#"{"action":"delete_voters","p":"0","candidates":["0"],"K":0,"b":1}"#;
    assert!(parse(stray).is_err());
    let bad_vote = r#"{"action":"delete_voters","p":"0","candidates":["0","1"],
        "voters":[{"name":"v1","prefs":["1"]}],"K":0}"#;
    assert!(parse(bad_vote).is_err());
}

#[test]
fn brute_force_examples() {
    let b = SearchBudget::default();
    let one: BTreeSet<_> = [name("0")].into();
    assert_eq!(enumerate_preferences(&one, &b).unwrap(), vec![pref(&["0"])]);
    let two: BTreeSet<_> = [name("0"), name("1")].into();
    assert_eq!(enumerate_preferences(&two, &b).unwrap(), vec![pref(&["0", "1"]), pref(&["1", "0"])]);
    let four: BTreeSet<_> = ["0", "1", "00", "01"].iter().map(|s| name(s)).collect();
    let all = enumerate_preferences(&four, &b).unwrap();
    assert_eq!(all.iter().collect::<BTreeSet<_>>().len(), 24);
    let tiny = SearchBudget { max_candidates: 3, ..b };
    assert!(matches!(enumerate_preferences(&four, &tiny), Err(Error::Budget(_))));

    let alice = AliceSystem::default();
    let rpc = separation_instance(PartitionKind::RunoffCandidates, GoalMode::UniqueWinner);
    assert!(!bf_decide(&rpc, &alice, &b).unwrap());
    let pc = separation_instance(PartitionKind::Candidates, GoalMode::UniqueWinner);
    let sol = bf_search(&pc, &alice, &b).unwrap();
    assert!(is_successful(&pc, &sol, &alice).unwrap());
    let bye = ActionSolution::Partition {
        parts: Parts::Candidates { first: BTreeSet::new(), second: pc.current_election().candidates().clone() },
    };
    let winners = apply_solution(&pc, &bye, &alice).unwrap();
    assert_eq!(winners, [alice.alice.clone(), AliceSystem::bob()].into());
}

fn plurality_reduce(json: &str) -> ActionSolution {
    let inst = parse(json).unwrap();
    let mut oracle = CountingOracle::new(BruteForceOracle::new(&Plurality, SearchBudget::default()));
    let sol = reduce(&inst, &mut oracle).unwrap();
    if !sol.is_impossible() {
        assert!(is_successful(&inst, &sol, &Plurality).unwrap());
    }
    sol
}

#[test]
fn reducer_examples() {
    let av = plurality_reduce(
        r#"{"action":"add_voters","p":"1","candidates":["0","1"],
        "voters":[{"name":"v","prefs":["0","1"]}],"pool":[{"name":"w","prefs":["1","0"]}],"K":1}"#,
    );
    assert_eq!(av, ActionSolution::AddedVoters { voters: ["w".to_owned()].into() });

    let dv = plurality_reduce(
        r#"{"action":"delete_voters","p":"1","candidates":["0","1"],"voters":[
        {"name":"a","prefs":["0","1"]},{"name":"b","prefs":["0","1"]},{"name":"c","prefs":["1","0"]}],"K":1}"#,
    );
    let ActionSolution::DeletedVoters { voters } = dv else { panic!() };
    assert!(voters.len() == 1 && !voters.contains("c"));

    let ac = plurality_reduce(
        r#"{"action":"add_candidates","p":"0","candidates":["0","1"],
        "voters":[{"name":"v","prefs":["00","0","1"]}],"pool":["00"],"K":1}"#,
    );
    assert_eq!(ac, ActionSolution::AddedCandidates { candidates: BTreeSet::new() });

    let dc = plurality_reduce(
        r#"{"action":"delete_candidates","p":"0","candidates":["0","1"],
        "voters":[{"name":"v","prefs":["1","0"]}],"K":1}"#,
    );
    assert_eq!(dc, ActionSolution::DeletedCandidates { candidates: [name("1")].into() });

    let alice = AliceSystem::default();
    let e = Election::new([alice.alice.clone(), AliceSystem::bob()], Vec::new()).unwrap();
    let inst = Instance::Partition(
        elecsearch_core::actions::PartitionInstance::new(
            e.clone(),
            PartitionKind::RunoffCandidates,
            elecsearch_core::TieRule::TiesPromote,
            elecsearch_core::Objective::destructive(AliceSystem::bob()),
        )
        .unwrap(),
    );
    let mut oracle = BruteForceOracle::new(&alice, SearchBudget::default());
    let sol = reduce(&inst, &mut oracle).unwrap();
    assert_eq!(
        sol,
        ActionSolution::Partition { parts: Parts::Candidates { first: e.candidates().clone(), second: BTreeSet::new() } }
    );
}

#[test]
fn always_no_oracle_stops_after_one_call() {
    let inst = random_instance(&mut rng_from_seed(1), Family::all()[0]);
    let mut oracle = CountingOracle::new(|_: &Instance| Ok(false));
    assert!(reduce(&inst, &mut oracle).unwrap().is_impossible());
    assert_eq!(oracle.calls(), 1);
}

#[test]
fn replay_rejects_malformed_solutions() {
    let inst = parse(
        r#"{"action":"bribery","p":"0","candidates":["0","1"],"voters":[
        {"name":"a","prefs":["1","0"]},{"name":"b","prefs":["1","0"]}],"b":1}"#,
    )
    .unwrap();
    let two: BTreeMap<_, _> = [("a".to_owned(), pref(&["0", "1"])), ("b".to_owned(), pref(&["0", "1"]))].into();
    assert!(apply_solution(&inst, &ActionSolution::Bribe { votes: two }, &Plurality).is_err());
    let ghost: BTreeMap<_, _> = [("z".to_owned(), pref(&["0", "1"]))].into();
    assert!(apply_solution(&inst, &ActionSolution::Bribe { votes: ghost }, &Plurality).is_err());
    assert!(apply_solution(&inst, &ActionSolution::Impossible, &Plurality).is_err());
    let wrong = ActionSolution::DeletedVoters { voters: BTreeSet::new() };
    assert!(apply_solution(&inst, &wrong, &Plurality).is_err());
    let one: BTreeMap<_, _> = [("a".to_owned(), pref(&["0", "1"]))].into();
    assert!(is_successful(&inst, &ActionSolution::Bribe { votes: one }, &Plurality).unwrap());
}

#[test]
fn voters_keep_their_names_on_round_trip() {
    let v = Voter::new("v1", pref(&["1", "0"]));
    let text = serde_json::to_string(&v).unwrap();
    assert_eq!(serde_json::from_str::<Voter>(&text).unwrap(), v);
}

proptest! {
    #[test]
    fn instances_round_trip_through_json(seed in any::<u64>(), family in 0usize..14) {
        let inst = random_instance(&mut rng_from_seed(seed), Family::all()[family]);
        let text = inst.to_json(Some(format!("case-{seed}")));
        prop_assert_eq!(Instance::from_json(&text).unwrap(), inst);
    }

    #[test]
    fn searched_solutions_replay(seed in any::<u64>(), family in 0usize..14) {
        let inst = random_instance(&mut rng_from_seed(seed), Family::all()[family]);
        let sol = bf_search(&inst, &Plurality, &SearchBudget::default()).unwrap();
        if !sol.is_impossible() {
            prop_assert!(is_successful(&inst, &sol, &Plurality).unwrap());
        }
        let text = serde_json::to_string(&sol).unwrap();
        prop_assert_eq!(serde_json::from_str::<ActionSolution>(&text).unwrap(), sol);
    }
}
