//! `rtpl`: parse programs, list and take transitions, run bounded checks.
//!
//! Exit codes: 0 clean, 1 violation, 2 usage or parse error, 3 inconclusive.

mod check;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use rtpl_core::analysis::conflicting;
use rtpl_core::corpus::regressions;
use rtpl_core::script::{parse_script, run_script};
use rtpl_core::semantics::{KeyAllocator, Semantics, Transition};
use rtpl_core::syntax::{parse_configuration, parse_program, Config, DefinitionEnv, Process};
use rtpl_core::trace::{Trace, TraceStep};

use check::{Outcome, Suite};

#[derive(Parser)]
#[command(name = "rtpl", version, about = "Reversible timed process workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a program and print it back in canonical form.
    Parse { file: PathBuf },
    /// List the enabled transitions and their conflicts.
    Steps {
        file: PathBuf,
        /// Configuration to start from instead of the program's process.
        #[arg(long)]
        config: Option<String>,
        #[arg(long, value_enum, default_value_t = DirArg::All)]
        dir: DirArg,
        #[arg(long)]
        json: bool,
    },
    /// Take a scripted sequence of steps, e.g. "a[1];s[2];~s[2]".
    Run {
        file: PathBuf,
        #[arg(long)]
        script: String,
        /// Write the trace here instead of printing it.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Re-derive a saved trace and print its final configuration.
    Replay { trace: PathBuf },
    /// Bounded checks over a program or every `.rtpl` file in a directory.
    Check {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 20_000)]
        max_states: usize,
        #[arg(long, env = "RTPL_SEED", default_value_t = 0)]
        seed: u64,
        /// Random paths per program for the parabolic suite.
        #[arg(long, default_value_t = 200)]
        paths: usize,
        /// Longest path enumerated by the causal-consistency suite.
        #[arg(long, default_value_t = 4)]
        cc_len: usize,
        /// Print the reports as JSON instead of a summary.
        #[arg(long)]
        json: bool,
        /// Check the variant without ghost prefixes, which is expected to
        /// break the loop and order checks.
        #[arg(long)]
        ghost_free: bool,
    },
    /// Run the built-in example regressions.
    Examples,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirArg {
    Fwd,
    Bk,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(file: &Path) -> anyhow::Result<(DefinitionEnv, Process)> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    parse_program(&text).with_context(|| format!("{}", file.display()))
}

fn dispatch(cmd: Cmd) -> anyhow::Result<ExitCode> {
    match cmd {
        Cmd::Parse { file } => {
            let (env, p) = load(&file)?;
            println!("{}", Trace::new(&env, &p).source());
        }
        Cmd::Steps {
            file,
            config,
            dir,
            json,
        } => {
            let (env, p) = load(&file)?;
            let x = match config {
                Some(c) => env.fold_config(&parse_configuration(&c, &env)?),
                None => Config::Std(env.fold(&p)),
            };
            steps(&env, &x, dir, json)?;
        }
        Cmd::Run {
            file,
            script,
            trace_out,
        } => {
            let (env, p) = load(&file)?;
            let sem = Semantics::new(&env);
            let root = Config::Std(env.fold(&p));
            let path = run_script(&sem, &root, &parse_script(&script)?)?;
            let last = path.last().map_or(&root, |t| &t.target);
            println!("{last}");
            let trace = serde_json::to_string_pretty(&Trace::from_path(&env, &p, &path))?;
            match trace_out {
                Some(out) => std::fs::write(&out, trace + "\n")
                    .with_context(|| format!("writing {}", out.display()))?,
                None => println!("{trace}"),
            }
        }
        Cmd::Replay { trace } => {
            let text = std::fs::read_to_string(&trace)
                .with_context(|| format!("reading {}", trace.display()))?;
            let (_, x, _) = Trace::from_json(&text)?.replay()?;
            println!("{x}");
        }
        Cmd::Check {
            path,
            suite,
            depth,
            max_states,
            seed,
            paths,
            cc_len,
            json,
            ghost_free,
        } => {
            let files = programs(&path)?;
            let loaded = files
                .iter()
                .map(|f| load(f).map(|l| (f.clone(), l)))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let opts = check::Opts {
                suite,
                depth,
                max_states,
                seed,
                paths,
                cc_len,
                ghost_free,
            };
            let results = check::run_all(&loaded, &opts)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&results)?);
            } else {
                println!("seed {seed}");
                for r in &results {
                    check::summarize(r);
                }
            }
            return Ok(match check::outcome(&results) {
                Outcome::Clean => ExitCode::SUCCESS,
                Outcome::Violation => ExitCode::from(1),
                Outcome::Inconclusive => ExitCode::from(3),
            });
        }
        Cmd::Examples => {
            let rs = regressions();
            let mut failed = false;
            for r in &rs {
                match &r.result {
                    Ok(()) => println!("PASS {}", r.name),
                    Err(e) => {
                        failed = true;
                        println!("FAIL {}: {e}", r.name);
                    }
                }
            }
            return Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn programs(path: &Path) -> anyhow::Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut out = Vec::new();
    for entry in std::fs::read_dir(path).with_context(|| format!("reading {}", path.display()))? {
        let p = entry?.path();
        if p.extension().is_some_and(|e| e == "rtpl") {
            out.push(p);
        }
    }
    out.sort();
    if out.is_empty() {
        bail!("no .rtpl files in {}", path.display());
    }
    Ok(out)
}

fn steps(env: &DefinitionEnv, x: &Config, dir: DirArg, json: bool) -> anyhow::Result<()> {
    let sem = Semantics::new(env);
    let mut ts: Vec<Transition> = Vec::new();
    if dir != DirArg::Bk {
        // one fresh key per forward move, as independent runs would pick
        ts.extend(sem.forward_steps(x, &mut KeyAllocator::new())?);
    }
    if dir != DirArg::Fwd {
        ts.extend(sem.backward_steps(x)?);
    }
    let matrix: Vec<Vec<Option<bool>>> = ts
        .iter()
        .map(|t| ts.iter().map(|s| conflicting(t, s).ok()).collect())
        .collect();
    if json {
        let steps: Vec<TraceStep> = ts.iter().map(TraceStep::from).collect();
        let v = serde_json::json!({ "state": x.to_string(), "transitions": steps, "conflict": matrix });
        println!("{}", serde_json::to_string_pretty(&v)?);
        return Ok(());
    }
    println!("{x}");
    for (n, t) in ts.iter().enumerate() {
        println!("{n:>3}  {:<3}  {:<10} {:<9} {}", t.direction, t.label.to_string(), t.rule, t.target);
    }
    if ts.len() > 1 {
        println!("conflicts (# conflict, . independent):");
        for (n, row) in matrix.iter().enumerate() {
            let cells: String = row
                .iter()
                .enumerate()
                .map(|(m, c)| match c {
                    _ if m == n => '-',
                    Some(true) => '#',
                    Some(false) => '.',
                    None => '?',
                })
                .collect();
            println!("{n:>3}  {cells}");
        }
    }
    Ok(())
}
