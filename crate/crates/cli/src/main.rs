use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use elecsearch_core::actions::{validate_instance, RawInstance};
use elecsearch_core::bd::CnfFormula;
use elecsearch_core::fastpaths::demo_gap;
use elecsearch_core::gen::{random_instance, rng_from_seed, Family};
use elecsearch_core::reducers::{reduce, BruteForceOracle, CountingOracle};
use elecsearch_core::solve::{decide, search, Method};
use elecsearch_core::theorems::{sweep_systems, verify_collapse, verify_separation, ElectionSpace, VerificationReport};
use elecsearch_core::{
    evaluate, ActionSolution, CandidateName, Election, Error, HardnessTarget, Instance, Parts, SearchBudget, Selector,
};
use serde_json::json;

/// Decision and search for manipulative actions on elections.
#[derive(Parser)]
#[command(name = "elecsearch", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Winners of an election file (`{"candidates": [...], "voters": [...]}`).
    Winners {
        #[arg(long)]
        system: Selector,
        file: PathBuf,
    },
    /// Whether an instance has a successful action.
    Decide(ProblemArgs),
    /// A successful action for an instance, if one exists.
    Search(ProblemArgs),
    /// Search via the decision oracle, one committed element at a time.
    Reduce(ProblemArgs),
    /// Check that the destructive partition problems coincide on small elections.
    VerifyCollapse {
        /// Number of seeded random systems checked besides the named ones.
        #[arg(long, default_value_t = 100)]
        random_systems: u64,
        #[arg(long, default_value_t = 3)]
        max_candidates: usize,
        #[arg(long, default_value_t = 2)]
        max_voters: usize,
    },
    /// Run the unique-winner separation witness.
    VerifySeparation,
    /// Time the polynomial decision against the exhaustive search on a
    /// hardness instance built from a DIMACS formula.
    DemoGap {
        /// e1..e6 or a full target code such as `e3-dc-pv`.
        target: HardnessTarget,
        cnf: PathBuf,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
    },
    /// Emit a random instance of an action family as JSON.
    GenRandom {
        /// Family label such as CC-AV, DC-DC or DC-RPC-TE.
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long)]
    system: Selector,
    /// Instance file in the JSON instance format.
    file: PathBuf,
    /// Override the file's `action`.
    #[arg(long)]
    action: Option<String>,
    #[arg(long)]
    direction: Option<String>,
    #[arg(long)]
    goal: Option<String>,
    #[arg(long)]
    tie_rule: Option<String>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long)]
    budget_candidates: Option<usize>,
    #[arg(long)]
    budget_voters: Option<usize>,
    #[arg(long)]
    budget_pool: Option<usize>,
    /// Most ballot tuples tried for manipulation and bribery.
    #[arg(long)]
    budget_ballots: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        let d = SearchBudget::default();
        SearchBudget {
            max_candidates: self.budget_candidates.unwrap_or(d.max_candidates),
            max_voters: self.budget_voters.unwrap_or(d.max_voters),
            max_pool: self.budget_pool.unwrap_or(d.max_pool),
            max_ballot_tuples: self.budget_ballots.unwrap_or(d.max_ballot_tuples),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(args: &ProblemArgs) -> Result<(Instance, Option<String>)> {
    let text = read(&args.file)?;
    let mut raw: RawInstance = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInstance(e.to_string()))
        .with_context(|| format!("parsing {}", args.file.display()))?;
    if let Some(action) = &args.action {
        raw.action.clone_from(action);
    }
    for (value, field) in [
        (&args.direction, &mut raw.direction),
        (&args.goal, &mut raw.goal),
        (&args.tie_rule, &mut raw.tie_rule),
    ] {
        if value.is_some() {
            field.clone_from(value);
        }
    }
    let id = raw.id.clone();
    let instance = validate_instance(&raw).with_context(|| format!("validating {}", args.file.display()))?;
    Ok((instance, id))
}

/// Names longer than 40 bits are shortened to their ends; `--json` output
/// always carries them in full.
fn show_name(c: &CandidateName) -> String {
    let s = c.as_str();
    match s.len() {
        0 => "ε".into(),
        n if n > 40 => format!("{}..{} ({n} bits)", &s[..12], &s[n - 12..]),
        _ => s.to_owned(),
    }
}

fn show_set<'a>(items: impl IntoIterator<Item = &'a CandidateName>) -> String {
    let names: Vec<String> = items.into_iter().map(show_name).collect();
    format!("{{{}}}", names.join(", "))
}

fn show_names(items: &BTreeSet<String>) -> String {
    format!("{{{}}}", items.iter().cloned().collect::<Vec<_>>().join(", "))
}

fn describe(sol: &ActionSolution) -> String {
    let ballots = |votes: &std::collections::BTreeMap<String, elecsearch_core::Preference>| {
        votes
            .iter()
            .map(|(v, p)| {
                let order: Vec<String> = p.as_slice().iter().map(show_name).collect();
                format!("{v}: {}", order.join(" > "))
            })
            .collect::<Vec<_>>()
            .join("; ")
    };
    match sol {
        ActionSolution::ManipVotes { votes } => format!("manipulators vote {}", ballots(votes)),
        ActionSolution::Bribe { votes } if votes.is_empty() => "bribe nobody".into(),
        ActionSolution::Bribe { votes } => format!("bribe {}", ballots(votes)),
        ActionSolution::AddedVoters { voters } => format!("add voters {}", show_names(voters)),
        ActionSolution::DeletedVoters { voters } => format!("delete voters {}", show_names(voters)),
        ActionSolution::AddedCandidates { candidates } => format!("add candidates {}", show_set(candidates)),
        ActionSolution::DeletedCandidates { candidates } => format!("delete candidates {}", show_set(candidates)),
        ActionSolution::Partition { parts: Parts::Voters { first, second } } => {
            format!("partition voters {} | {}", show_names(first), show_names(second))
        }
        ActionSolution::Partition { parts: Parts::Candidates { first, second } } => {
            format!("partition candidates {} | {}", show_set(first), show_set(second))
        }
        ActionSolution::Impossible => "no successful action exists".into(),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Fastpath => "fastpath",
        Method::BruteForce => "brute force",
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn print_report(report: &VerificationReport, json_out: bool) -> Result<ExitCode> {
    if json_out {
        print_json(report)?;
    } else {
        for (label, value) in &report.observations {
            println!("{label}: {value}");
        }
        for d in &report.discrepancies {
            println!("discrepancy in {} on {}: {} ({} vs {})", d.system, d.instance, d.relation, d.left, d.right);
        }
        println!(
            "{}: {} systems, {} instances, {} discrepancies",
            if report.verified() { "verified" } else { "FAILED" },
            report.systems_checked,
            report.instances_checked,
            report.discrepancies.len()
        );
    }
    Ok(if report.verified() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let json_out = cli.json;
    match cli.command {
        Command::Winners { system, file } => {
            let text = read(&file)?;
            let e: Election = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidElection(e.to_string()))
                .with_context(|| format!("parsing {}", file.display()))?;
            let w = evaluate(&system.build(), &e);
            if json_out {
                print_json(&json!({ "system": system.to_string(), "winners": w }))?;
            } else {
                println!("{}", show_set(&w));
            }
        }
        Command::Decide(args) => {
            let (inst, id) = load_instance(&args)?;
            let (answer, method) = decide(args.system, &inst, &args.budget.budget())?;
            if json_out {
                print_json(&json!({
                    "id": id,
                    "problem": inst.label(),
                    "system": args.system.to_string(),
                    "answer": answer,
                    "method": method,
                }))?;
            } else {
                println!("{answer}");
            }
        }
        Command::Search(args) => {
            let (inst, id) = load_instance(&args)?;
            let (sol, method) = search(args.system, &inst, &args.budget.budget())?;
            if json_out {
                print_json(&json!({
                    "id": id,
                    "problem": inst.label(),
                    "system": args.system.to_string(),
                    "method": method,
                    "solution": sol,
                }))?;
            } else {
                println!("{}", describe(&sol));
                println!("method: {}", method_name(method));
            }
        }
        Command::Reduce(args) => {
            let (inst, id) = load_instance(&args)?;
            let system = args.system.build();
            let mut oracle = CountingOracle::new(BruteForceOracle::new(system.as_ref(), args.budget.budget()));
            let sol = reduce(&inst, &mut oracle)?;
            if json_out {
                print_json(&json!({
                    "id": id,
                    "problem": inst.label(),
                    "system": args.system.to_string(),
                    "oracle_calls": oracle.calls(),
                    "solution": sol,
                }))?;
            } else {
                println!("{}", describe(&sol));
                println!("oracle calls: {}", oracle.calls());
            }
        }
        Command::VerifyCollapse { random_systems, max_candidates, max_voters } => {
            let space = ElectionSpace {
                max_candidates,
                max_voters,
                ..ElectionSpace::default()
            };
            let report = verify_collapse(&sweep_systems(random_systems), &space)?;
            return print_report(&report, json_out);
        }
        Command::VerifySeparation => {
            return print_report(&verify_separation()?, json_out);
        }
        Command::DemoGap { target, cnf, repeats } => {
            let text = read(&cnf)?;
            let formula = CnfFormula::parse_dimacs(&text).with_context(|| format!("parsing {}", cnf.display()))?;
            let r = demo_gap(target, &formula, repeats)?;
            if json_out {
                print_json(&r)?;
            } else {
                println!("target: {} (d = {})", r.target, r.vars);
                println!("decision: {}", r.decision);
                println!("witness: {}", describe(&r.solution));
                if let Some(a) = &r.assignment {
                    let bits: String = a.iter().map(|&b| if b { '1' } else { '0' }).collect();
                    println!("assignment: {bits}");
                }
                println!("fastpath decision: {:.3} ms", r.fast_secs * 1e3);
                println!("exhaustive search: {:.3} ms", r.slow_secs * 1e3);
            }
        }
        Command::GenRandom { family, seed } => {
            let inst = random_instance(&mut rng_from_seed(seed), family);
            println!("{}", inst.to_json(Some(format!("{family}-{seed}"))));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let core = err.chain().find_map(|e| e.downcast_ref::<Error>());
    match core {
        Some(Error::Budget(_)) => 3,
        Some(Error::Unsupported(_)) => 4,
        Some(_) => 2,
        None if err.chain().any(|e| e.is::<std::io::Error>()) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
