use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rtpl_core::reference::{
    check_bf_simulation, check_timed_bisimulation, forget_history, forget_time, forget_time_env,
    Budget, Ccsk, Verdict,
};
use rtpl_core::semantics::{canonicalize_keys, Options, Semantics, SemanticsError};
use rtpl_core::syntax::{DefinitionEnv, Process};
use rtpl_core::verify::{
    check_bti, check_causal_equivalence, check_loop, check_square, check_tau_oracle,
    check_time_total_order, check_wf, enumerate_paths, explore, is_parabolic, parabolic_normalize,
    random_path, Bounds, CcBudget, CcVerdict, Path, Report, StateSpace, Stepper,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Loop,
    Square,
    Bti,
    Wf,
    Pl,
    Cc,
    Bisim,
    Sim,
    Order,
    Tau,
    All,
}

const EACH: [Suite; 10] = [
    Suite::Loop,
    Suite::Square,
    Suite::Bti,
    Suite::Wf,
    Suite::Pl,
    Suite::Cc,
    Suite::Bisim,
    Suite::Sim,
    Suite::Order,
    Suite::Tau,
];

pub struct Opts {
    pub suite: Suite,
    pub depth: usize,
    pub max_states: usize,
    pub seed: u64,
    pub paths: usize,
    pub cc_len: usize,
    /// Use the ghost-free mutant of the semantics.
    pub ghost_free: bool,
}

#[derive(Serialize)]
pub struct ProgramReport {
    pub program: String,
    pub reports: Vec<Report>,
}

pub enum Outcome {
    Clean,
    Violation,
    Inconclusive,
}

pub fn outcome(results: &[ProgramReport]) -> Outcome {
    let reps = || results.iter().flat_map(|r| &r.reports);
    if reps().any(|r| !r.violations.is_empty()) {
        Outcome::Violation
    } else if reps().any(|r| r.inconclusive.unwrap_or(0) > 0) {
        Outcome::Inconclusive
    } else {
        Outcome::Clean
    }
}

pub fn summarize(r: &ProgramReport) {
    for rep in &r.reports {
        let status = if !rep.violations.is_empty() {
            "FAIL"
        } else if rep.inconclusive.unwrap_or(0) > 0 {
            "INCONCLUSIVE"
        } else {
            "ok"
        };
        println!(
            "{:<28} {:<10} {:<12} {} states, {} edges",
            r.program, rep.check, status, rep.states, rep.edges
        );
        for v in rep.violations.iter().take(5) {
            println!("    {}: {}", v.state, v.detail);
        }
    }
}

/// Checks every program on its own thread.
pub fn run_all(
    programs: &[(PathBuf, (DefinitionEnv, Process))],
    opts: &Opts,
) -> Result<Vec<ProgramReport>, SemanticsError> {
    std::thread::scope(|s| {
        let handles: Vec<_> = programs
            .iter()
            .enumerate()
            .map(|(n, (file, (env, p)))| {
                s.spawn(move || {
                    let name = file
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    let reports = run_program(env, p, opts, opts.seed.wrapping_add(n as u64))?;
                    Ok(ProgramReport { program: name, reports })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("checker thread panicked"))
            .collect()
    })
}

pub fn run_program(env: &DefinitionEnv, p: &Process, opts: &Opts, seed: u64) -> Result<Vec<Report>, SemanticsError> {
    let sem = Semantics::with_options(
        env,
        Options {
            ghost_prefixes: !opts.ghost_free,
            ..Options::default()
        },
    );
    let bounds = Bounds {
        depth: opts.depth,
        max_states: opts.max_states,
    };
    let space = explore(&sem, p, bounds)?;
    let suites: Vec<Suite> = match opts.suite {
        Suite::All => EACH.to_vec(),
        s => vec![s],
    };
    let mut out = Vec::new();
    for s in suites {
        let mut rep = match s {
            Suite::Loop => check_loop(&sem, &space)?,
            Suite::Square => check_square(&sem, &space)?,
            Suite::Bti => check_bti(&sem, &space)?,
            Suite::Wf => check_wf(&space),
            Suite::Order => check_time_total_order(&space),
            Suite::Tau => check_tau_oracle(&sem, &space)?,
            Suite::Pl => parabolic(&sem, &space, opts.paths, seed)?,
            Suite::Cc => causal(&sem, &space, opts.cc_len)?,
            Suite::Bisim => bisim(&sem, &space, opts.depth)?,
            Suite::Sim => sim(&sem, &space, opts.depth)?,
            Suite::All => unreachable!(),
        };
        if space.capped {
            rep.inconclusive = Some(rep.inconclusive.unwrap_or(0) + 1);
        }
        out.push(rep);
    }
    Ok(out)
}

fn show(p: &Path) -> String {
    p.steps
        .iter()
        .map(|t| format!("{}{}", if t.is_forward() { "" } else { "~" }, t.label))
        .collect::<Vec<_>>()
        .join(";")
}

fn parabolic(sem: &Semantics<'_>, space: &StateSpace, paths: usize, seed: u64) -> Result<Report, SemanticsError> {
    let mut rep = Report::new("pl", space);
    rep.seed = Some(seed);
    let st = Stepper::new(sem);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..paths {
        let len = rng.gen_range(0..=10);
        let path = random_path(sem, &space.root, len, &mut rng)?;
        match parabolic_normalize(&st, &path) {
            Ok(q) if is_parabolic(&q) && q.len() <= path.len() && q.target() == path.target() => {}
            Ok(q) => rep.flag(&space.root, format!("{} normalised to {}", show(&path), show(&q))),
            Err(e) => rep.flag(&space.root, format!("{}: {e}", show(&path))),
        }
        st.clear();
    }
    Ok(rep)
}

/// Each path is compared with the first one found for its target.
fn causal(sem: &Semantics<'_>, space: &StateSpace, len: usize) -> Result<Report, SemanticsError> {
    let mut rep = Report::new("cc", space);
    let st = Stepper::new(sem);
    let mut reps: BTreeMap<String, Path> = BTreeMap::new();
    let mut inconclusive = 0;
    for p in enumerate_paths(sem, &space.root, len)? {
        let key = canonicalize_keys(p.target()).to_string();
        let Some(first) = reps.get(&key) else {
            reps.insert(key, p);
            continue;
        };
        match check_causal_equivalence(&st, first, &p, CcBudget::default())? {
            CcVerdict::Equivalent { .. } => {}
            CcVerdict::BudgetExhausted => inconclusive += 1,
            v => rep.flag(&space.root, format!("{} vs {}: {v:?}", show(first), show(&p))),
        }
    }
    rep.inconclusive = Some(inconclusive);
    Ok(rep)
}

fn verdict(rep: &mut Report, what: &str, v: Verdict) {
    match v {
        Verdict::Holds => {}
        Verdict::BudgetExhausted => rep.inconclusive = Some(rep.inconclusive.unwrap_or(0) + 1),
        Verdict::CounterExample { path, reason } => {
            let steps: Vec<String> = path.iter().map(|s| format!("{}[{}]", s.act, s.key)).collect();
            rep.flag(what, format!("after {}: {reason}", steps.join(";")));
        }
    }
}

fn bisim(sem: &Semantics<'_>, space: &StateSpace, depth: usize) -> Result<Report, SemanticsError> {
    let mut rep = Report::new("bisim", space);
    let budget = Budget {
        depth,
        ..Budget::default()
    };
    let root = &space.root;
    let v = check_timed_bisimulation(sem, root, &forget_history(root)?, budget)?;
    verdict(&mut rep, &root.to_string(), v);
    Ok(rep)
}

fn sim(sem: &Semantics<'_>, space: &StateSpace, depth: usize) -> Result<Report, SemanticsError> {
    let mut rep = Report::new("sim", space);
    let budget = Budget {
        depth,
        ..Budget::default()
    };
    let tenv = forget_time_env(sem.env());
    let ccsk = Ccsk::new(&tenv);
    let root = &space.root;
    let v = check_bf_simulation(sem, &ccsk, root, &forget_time(root), budget)?;
    verdict(&mut rep, &root.to_string(), v);
    Ok(rep)
}
