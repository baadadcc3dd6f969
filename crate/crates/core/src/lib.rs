//! Manipulative actions on elections (manipulation, bribery, and control by
//! adding, deleting or partitioning candidates and voters) as decision and
//! search problems.
//!
//! The crate provides exhaustive search as ground truth, reducers that find
//! successful actions using only a decision oracle, constructed election
//! systems whose search problems hide formula puzzles, polynomial decision
//! procedures for those systems, and exhaustive verifiers for how the
//! partition-control variants relate.

pub mod actions;
pub mod bd;
pub mod bruteforce;
pub mod election;
pub mod error;
pub mod fastpaths;
pub mod gen;
pub mod reducers;
pub mod solve;
pub mod systems;
pub mod theorems;

pub use actions::{
    apply_solution, goal_met, is_successful, ActionKind, ActionSolution, Direction, GoalMode, Instance, Objective,
};
pub use bruteforce::{bf_decide, bf_search, SearchBudget};
pub use election::{
    evaluate, run_two_stage, BitString, CandidateName, Election, ElectionSystem, PartitionKind, Parts, Preference,
    TieRule, Voter,
};
pub use error::{Error, Result};
pub use systems::hardness::{build_hardness_instance, extract_assignment, HardnessTarget};
pub use systems::Selector;
