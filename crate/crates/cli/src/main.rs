use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context as _, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use exemplar_core::generalize::{anti_unify_formulas, anti_unify_term_list};
use exemplar_core::kernel::{Formula, Signature, Term};
use exemplar_core::pipeline::{run_scenario, RunConfig, RunResult};
use exemplar_core::reasoner::{prove, replay, KnowledgeBase, ReplayEnv, Verdict};
use exemplar_core::syntax::{
    formula_from_sexp_checked, infer_signature, load_scenario, parse_formula, parse_sexp, print_formula,
    print_term, term_from_sexp_checked, Scenario, ScenarioError,
};
use exemplar_core::virtue::{admirers_of, is_virtue, virtuous};

#[derive(Parser)]
#[command(name = "exemplar-engine", version, about = "Reason about admiration, exemplars and learned traits")]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Overrides {
    /// Last moment of the timeline
    #[arg(long, global = true)]
    horizon: Option<i64>,
    /// Observations needed to learn a trait
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Admired actions needed for exemplar status; for the query
    /// commands, the number of agents asked about
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    max_rounds: Option<usize>,
    #[arg(long, global = true)]
    max_depth: Option<usize>,
    #[arg(long, global = true)]
    max_term_depth: Option<usize>,
    /// Saturation budget in milliseconds
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
}

impl Overrides {
    fn run_config(&self) -> RunConfig {
        RunConfig {
            horizon: self.horizon,
            m: self.m,
            n: self.n,
            max_rounds: self.max_rounds,
            max_depth: self.max_depth,
            max_term_depth: self.max_term_depth,
            budget: self.budget_ms.map(Duration::from_millis),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on one or more scenarios
    Run {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        /// Scenarios processed in parallel
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Try to prove a closed formula from a scenario's facts
    Prove {
        scenario: PathBuf,
        #[arg(long)]
        goal: String,
    },
    /// Least general generalization of two terms (or formulas)
    Antiunify {
        left: String,
        right: String,
        /// Take declarations from this scenario instead of guessing them
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Treat the inputs as formulas
        #[arg(long)]
        formula: bool,
        /// Allow predicate variables where predicates differ
        #[arg(long)]
        higher_order: bool,
    },
    /// Is an agent an exemplar for at least N others?
    QueryVirtuous {
        scenario: PathBuf,
        #[arg(long)]
        agent: String,
    },
    /// Is a trait held by at least N virtuous agents?
    QueryVirtue {
        scenario: PathBuf,
        #[arg(long = "trait")]
        trait_formula: String,
    },
    /// Print a scenario in canonical form
    Parse { scenario: PathBuf },
}

/// Errors reported to the user as diagnostics (exit code 1).
#[derive(Debug)]
struct Diagnostics(String);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Diagnostics {}

fn diag(msg: impl Into<String>) -> anyhow::Error {
    Diagnostics(msg.into()).into()
}

fn load(path: &Path) -> Result<Scenario> {
    load_scenario(path).map_err(|e| match e {
        ScenarioError::Invalid(ds) => {
            let lines: Vec<String> = ds.iter().map(|d| format!("{}: {d}", path.display())).collect();
            diag(lines.join("\n"))
        }
        other => diag(other.to_string()),
    })
}

fn print_result(res: &RunResult, path: &Path, json_out: bool) -> String {
    if json_out {
        let mut v = res.to_json();
        v["scenario"] = json!(path.display().to_string());
        serde_json::to_string_pretty(&v).expect("report serializes")
    } else {
        format!("== {}\n{}", path.display(), res.to_text())
    }
}

fn cmd_run(paths: &[PathBuf], jobs: usize, ov: &Overrides) -> Result<()> {
    let cfg = ov.run_config();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .context("building the worker pool")?;
    let outputs: Vec<Result<String>> = pool.install(|| {
        paths
            .par_iter()
            .map(|p| {
                let scn = load(p)?;
                let res = run_scenario(&scn, &cfg);
                Ok(print_result(&res, p, ov.json))
            })
            .collect()
    });
    let mut failed = None;
    for out in outputs {
        match out {
            Ok(s) => println!("{s}"),
            Err(e) => {
                eprintln!("{e:#}");
                failed.get_or_insert(e);
            }
        }
    }
    failed.map_or(Ok(()), Err)
}

fn cmd_prove(path: &Path, goal: &str, ov: &Overrides) -> Result<()> {
    let scn = ov.run_config().apply(&load(path)?);
    let goal = parse_formula(goal, &scn.signature).map_err(|e| diag(format!("goal: {e}")))?;
    let kb = KnowledgeBase::from_scenario(&scn);
    let res = prove(&kb, &goal, &scn.config.bounds);
    let checked = if res.proved() {
        let env = ReplayEnv {
            signature: &scn.signature,
            horizon: scn.config.horizon,
            oracle: kb.oracle(),
        };
        Some(replay(&kb.axioms(), &res.trace, &exemplar_core::reasoner::Judgment::top(goal.clone()), &env).is_ok())
    } else {
        None
    };
    let verdict = match res.verdict {
        Verdict::Proved => "proved",
        Verdict::Unknown => "unknown",
    };
    if ov.json {
        let v = json!({
            "goal": print_formula(&goal),
            "verdict": verdict,
            "partial": res.partial,
            "reason": res.reason,
            "replayed": checked,
            "trace": res.trace.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("{verdict}: {}", print_formula(&goal));
        if let Some(r) = &res.reason {
            println!("  ({r})");
        }
        for (i, s) in res.trace.iter().enumerate() {
            println!("  {:>3}. {s}", i + 1);
        }
    }
    Ok(())
}

fn signature_for(scenario: Option<&Path>, inputs: &[&str], as_terms: bool) -> Result<Signature> {
    if let Some(p) = scenario {
        return Ok(load(p)?.signature);
    }
    let mut sig = Signature::new();
    let sexps = inputs
        .iter()
        .map(|s| parse_sexp(s).map_err(|e| diag(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    infer_signature(&mut sig, &sexps, as_terms);
    Ok(sig)
}

fn cmd_antiunify(
    left: &str,
    right: &str,
    scenario: Option<&Path>,
    formula: bool,
    higher_order: bool,
    ov: &Overrides,
) -> Result<()> {
    let sig = signature_for(scenario, &[left, right], !formula)?;
    let sexps: Vec<_> = [left, right]
        .iter()
        .map(|s| parse_sexp(s).map_err(|e| diag(e.to_string())))
        .collect::<Result<_>>()?;
    let (general, witnesses) = if formula {
        let fs: Vec<Formula> = sexps
            .iter()
            .map(|s| formula_from_sexp_checked(s, &sig).map_err(|e| diag(e.to_string())))
            .collect::<Result<_>>()?;
        let g = anti_unify_formulas(&fs, &sig, higher_order).map_err(|e| diag(e.to_string()))?;
        (print_formula(&g.general), g.witnesses)
    } else {
        let ts: Vec<Term> = sexps
            .iter()
            .map(|s| term_from_sexp_checked(s, &sig).map(|(t, _)| t).map_err(|e| diag(e.to_string())))
            .collect::<Result<_>>()?;
        let g = anti_unify_term_list(&ts, &sig).map_err(|e| diag(e.to_string()))?;
        (print_term(&g.general), g.witnesses)
    };
    if ov.json {
        let v = json!({
            "generalization": general,
            "witnesses": witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("{general}");
        for (i, w) in witnesses.iter().enumerate() {
            println!("  θ{} = {w}", i + 1);
        }
    }
    Ok(())
}

/// For the query commands `--n` is the query threshold, so the scenario's
/// own exemplar threshold stays in force.
fn query_config(ov: &Overrides) -> RunConfig {
    RunConfig {
        n: None,
        ..ov.run_config()
    }
}

fn cmd_query_virtuous(path: &Path, agent: &str, n: usize, ov: &Overrides) -> Result<()> {
    let scn = load(path)?;
    if !scn.agents().iter().any(|a| a == agent) {
        return Err(diag(format!("`{agent}` is not a declared agent")));
    }
    let res = run_scenario(&scn, &query_config(ov));
    let who = Term::constant(agent);
    let admirers: Vec<String> = admirers_of(&res.kb, &who).iter().map(print_term).collect();
    let answer = virtuous(&res.kb, &who, n);
    if ov.json {
        let v = json!({"agent": agent, "n": n, "exemplar_for": admirers, "virtuous": answer});
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!(
            "{agent} is {}virtuous at n = {n} (exemplar for {} agent(s): {})",
            if answer { "" } else { "not " },
            admirers.len(),
            admirers.join(", ")
        );
    }
    Ok(())
}

fn cmd_query_virtue(path: &Path, trait_text: &str, n: usize, ov: &Overrides) -> Result<()> {
    let scn = load(path)?;
    let f = parse_formula(trait_text, &scn.signature).map_err(|e| diag(format!("trait: {e}")))?;
    if !matches!(f, Formula::Trait { .. }) {
        return Err(diag("the --trait formula must be a (trait body agent) formula"));
    }
    let res = run_scenario(&scn, &query_config(ov));
    let verdict = is_virtue(&res.kb, &f, n);
    if ov.json {
        println!("{}", serde_json::to_string_pretty(&json!({"trait": print_formula(&f), "verdict": verdict}))?);
    } else {
        let names = |s: &std::collections::BTreeSet<Term>| s.iter().map(print_term).collect::<Vec<_>>().join(", ");
        println!(
            "{} at n = {n}: held by {} agent(s) [{}], {} virtuous [{}]",
            if verdict.is_virtue() { "a virtue" } else { "not a virtue" },
            verdict.holders.len(),
            names(&verdict.holders),
            verdict.virtuous_holders.len(),
            names(&verdict.virtuous_holders)
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let ov = &cli.overrides;
    match &cli.command {
        Command::Run { scenarios, jobs } => cmd_run(scenarios, *jobs, ov),
        Command::Prove { scenario, goal } => cmd_prove(scenario, goal, ov),
        Command::Antiunify {
            left,
            right,
            scenario,
            formula,
            higher_order,
        } => cmd_antiunify(left, right, scenario.as_deref(), *formula, *higher_order, ov),
        Command::QueryVirtuous { scenario, agent } => cmd_query_virtuous(scenario, agent, ov.n.unwrap_or(1), ov),
        Command::QueryVirtue { scenario, trait_formula } => {
            cmd_query_virtue(scenario, trait_formula, ov.n.unwrap_or(2), ov)
        }
        Command::Parse { scenario } => {
            print!("{}", load(scenario)?.to_source());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("EXEMPLAR_ENGINE_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<Diagnostics>().is_some() => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(2)
        }
    }
}
