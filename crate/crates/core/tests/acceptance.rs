//! Acceptance run over the seed corpus. Prints one PASS/FAIL line per
//! criterion and exits non-zero if a criterion fails unexpectedly.

use std::collections::{BTreeMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rtpl_core::analysis::is_not_acted;
use rtpl_core::corpus::{regressions, seeds, Seed};
use rtpl_core::reference::{
    check_bf_simulation, check_timed_bisimulation, forget_history, forget_time, forget_time_env,
    forget_time_process, Budget, Ccsk, Tpl,
};
use rtpl_core::semantics::{canonicalize_keys, Direction, Options, Semantics};
use rtpl_core::syntax::{parse_program, Action, Config, DefinitionEnv, Process};
use rtpl_core::verify::{
    check_bti, check_causal_equivalence, check_loop, check_square, check_tau_oracle,
    check_time_total_order, check_wf, enumerate_paths, explore, is_parabolic, parabolic_normalize,
    random_path, Bounds, CcBudget, CcVerdict, Path, StateSpace, Stepper,
};

const DEPTH: usize = 6;
const MAX_STATES: usize = 20_000;
const REGRESSION_LIMIT: Duration = Duration::from_secs(1);
const LOOP_LIMIT: Duration = Duration::from_secs(60);
const PL_PATHS: usize = 1_000;
const PL_MAX_LEN: usize = 10;
const CC_LEN: usize = 5;
const SIM_DEPTH: usize = 5;
const COMMUTE_SAMPLES: usize = 1_000;
const TPL_DEPTH: usize = 8;
const SEED: u64 = 0x5eed_2024;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

struct Explored {
    seed: Seed,
    space: StateSpace,
}

fn bounds() -> Bounds {
    Bounds {
        depth: DEPTH,
        max_states: MAX_STATES,
    }
}

fn first<T: std::fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .next()
        .map(|x| format!("; first: {x}"))
        .unwrap_or_default()
}

fn c1() -> Outcome {
    let t0 = Instant::now();
    let rs = regressions();
    let el = t0.elapsed();
    let bad: Vec<_> = rs
        .iter()
        .filter_map(|r| r.result.as_ref().err().map(|e| format!("{}: {e}", r.name)))
        .collect();
    Outcome::new(
        bad.is_empty() && el < REGRESSION_LIMIT,
        format!("{}/{} examples in {:.3}s{}", rs.len() - bad.len(), rs.len(), el.as_secs_f64(), first(bad)),
    )
}

fn c2(spaces: &[Explored], explore_time: Duration) -> Outcome {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    let mut edges = 0;
    let mut capped = Vec::new();
    for e in spaces {
        let sem = Semantics::new(&e.seed.env);
        let rep = check_loop(&sem, &e.space).expect("loop check");
        edges += rep.edges;
        if e.space.capped {
            capped.push(e.seed.name);
        }
        bad.extend(rep.violations.into_iter().map(|v| format!("{}: {}", e.seed.name, v.detail)));
    }
    let el = t0.elapsed() + explore_time;
    Outcome::new(
        bad.is_empty() && capped.is_empty() && spaces.len() >= 20 && el < LOOP_LIMIT,
        format!(
            "{} seeds, {edges} edges, {} violations, {:.1}s, state cap hit: {capped:?}{}",
            spaces.len(),
            bad.len(),
            el.as_secs_f64(),
            first(bad)
        ),
    )
}

fn per_space(
    spaces: &[Explored],
    f: impl Fn(&Semantics<'_>, &StateSpace) -> rtpl_core::verify::Report,
) -> Outcome {
    let mut bad = Vec::new();
    let mut states = 0;
    for e in spaces {
        let sem = Semantics::new(&e.seed.env);
        let rep = f(&sem, &e.space);
        states += rep.states;
        bad.extend(rep.violations.into_iter().map(|v| format!("{}: {} at {}", e.seed.name, v.detail, v.state)));
    }
    Outcome::new(
        bad.is_empty(),
        format!("{states} states, {} violations{}", bad.len(), first(bad)),
    )
}

fn c6(spaces: &[Explored]) -> Outcome {
    let mut failures = Vec::new();
    let mut total = 0usize;
    let mut shortened = 0usize;
    for (n, e) in spaces.iter().enumerate() {
        let sem = Semantics::new(&e.seed.env);
        let st = Stepper::new(&sem);
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ n as u64);
        let root = e.space.root.clone();
        for _ in 0..PL_PATHS {
            let len = rng.gen_range(0..=PL_MAX_LEN);
            let path = random_path(&sem, &root, len, &mut rng).expect("random path");
            total += 1;
            match parabolic_normalize(&st, &path) {
                Ok(q) => {
                    if !is_parabolic(&q) || q.len() > path.len() || q.target() != path.target() {
                        failures.push(format!("{}: bad normal form of {}", e.seed.name, show(&path)));
                    } else if q.len() < path.len() {
                        shortened += 1;
                    }
                }
                Err(err) => failures.push(format!("{}: {err}", e.seed.name)),
            }
            st.clear();
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!("{total} paths, {shortened} shortened, {} failures{}", failures.len(), first(failures)),
    )
}

fn show(p: &Path) -> String {
    p.steps
        .iter()
        .map(|t| format!("{}{}", if t.is_forward() { "" } else { "~" }, t.label))
        .collect::<Vec<_>>()
        .join(";")
}

/// Every path is compared with the first path reaching the same canonical
/// target. The relation is an equivalence, so this covers every pair.
fn c7(spaces: &[Explored]) -> Outcome {
    let mut pairs = 0usize;
    let mut inconclusive = 0usize;
    let mut bad = Vec::new();
    for e in spaces {
        let sem = Semantics::new(&e.seed.env);
        let st = Stepper::new(&sem);
        let paths = enumerate_paths(&sem, &e.space.root, CC_LEN).expect("paths");
        let mut reps: BTreeMap<String, Path> = BTreeMap::new();
        for p in paths {
            let key = canonicalize_keys(p.target()).to_string();
            let Some(rep) = reps.get(&key) else {
                reps.insert(key, p);
                continue;
            };
            pairs += 1;
            match check_causal_equivalence(&st, rep, &p, CcBudget::default()).expect("causal check") {
                CcVerdict::Equivalent { .. } => {}
                CcVerdict::BudgetExhausted => inconclusive += 1,
                v => bad.push(format!("{}: {} vs {}: {v:?}", e.seed.name, show(rep), show(&p))),
            }
        }
        st.clear();
    }
    Outcome::new(
        bad.is_empty() && inconclusive == 0,
        format!("{pairs} path pairs, {} counterexamples, {inconclusive} inconclusive{}", bad.len(), first(bad)),
    )
}

fn c8(spaces: &[Explored]) -> Outcome {
    let order = per_space(spaces, |_, s| check_time_total_order(s));
    let (env, p) = parse_program("s.a.0 | b.s.0").unwrap();
    let sem = Semantics::with_options(
        &env,
        Options {
            ghost_prefixes: false,
            ..Options::default()
        },
    );
    let space = explore(&sem, &p, bounds()).expect("mutant space");
    let loop_fail = check_loop(&sem, &space).expect("loop");
    let order_fail = check_time_total_order(&space);
    let reproduced = !loop_fail.is_clean() && !order_fail.is_clean();
    Outcome::new(
        order.pass && reproduced,
        format!(
            "order: {}; ghost-free mutant: {} loop and {} order violations{}{}",
            order.detail,
            loop_fail.violations.len(),
            order_fail.violations.len(),
            first(loop_fail.violations.iter().map(|v| &v.detail)),
            first(order_fail.violations.iter().map(|v| &v.detail)),
        ),
    )
}

/// True when `x` has an expired timeout whose alternative has not yet
/// communicated. Erasing history keeps only the alternative there, while
/// erasing time first keeps both branches as a choice, so the two erasures
/// disagree on such states.
fn has_undecided_expired_timeout(x: &Config) -> bool {
    match x {
        Config::Std(_) => false,
        Config::TimeoutR { alt, .. } => is_not_acted(alt) || has_undecided_expired_timeout(alt),
        Config::TimeoutL { main, .. } => has_undecided_expired_timeout(main),
        Config::Keyed(_, _, c) | Config::Restrict(c, _) => has_undecided_expired_timeout(c),
        Config::Sum(l, r) | Config::Par(l, r) => {
            has_undecided_expired_timeout(l) || has_undecided_expired_timeout(r)
        }
    }
}

/// History erased, up to folding of constants.
fn hist(env: &DefinitionEnv, x: &Config) -> Process {
    env.fold(&forget_history(x).unwrap())
}

struct C9 {
    outcome: Outcome,
    /// Every broken part is the known erasure mismatch on expired timeouts.
    only_known_gap: bool,
}

fn c9(spaces: &[Explored]) -> C9 {
    let mut tpl_bad = Vec::new();
    let mut ccsk_bad = Vec::new();
    let mut sim_bad = Vec::new();
    let mut edges = 0usize;
    for e in spaces {
        let sem = Semantics::new(&e.seed.env);
        let tpl = Tpl::new(&e.seed.env);
        let tenv = forget_time_env(&e.seed.env);
        let ccsk = Ccsk::new(&tenv);
        for t in e.space.edges() {
            edges += 1;
            let (ht, hs) = (hist(&e.seed.env, &t.target), hist(&e.seed.env, &t.source));
            if t.is_forward() {
                let moves = tpl.steps(&hs).unwrap();
                if !moves.contains(&(t.label.action.clone(), ht)) {
                    tpl_bad.push(format!("{}: {t}", e.seed.name));
                }
            }
            let (fs, ft) = (tenv.fold_config(&forget_time(&t.source)), tenv.fold_config(&forget_time(&t.target)));
            let ok = match (t.is_sigma(), t.direction) {
                (true, _) => fs == ft,
                (false, Direction::Fwd) => ccsk.fwd(&fs, t.label.key.id).unwrap().contains(&(t.label.clone(), ft)),
                (false, Direction::Bk) => ccsk.bk(&fs).unwrap().contains(&(t.label.clone(), ft)),
            };
            if !ok {
                ccsk_bad.push(format!("{}: {t}", e.seed.name));
            }
        }
        // converse: every TPL move of an image is matched by some forward move
        for (x, out) in e.space.expanded() {
            let hx = hist(&e.seed.env, x);
            let fwd: HashSet<(Action, Process)> = out
                .iter()
                .filter(|(t, _)| t.is_forward())
                .map(|(t, _)| (t.label.action.clone(), hist(&e.seed.env, &t.target)))
                .collect();
            for m in tpl.steps(&hx).unwrap() {
                if !fwd.contains(&m) {
                    tpl_bad.push(format!("{}: TPL move {} of {hx} unmatched from {x}", e.seed.name, m.0));
                }
            }
        }
        let root = &e.space.root;
        let budget = Budget {
            depth: SIM_DEPTH,
            ..Budget::default()
        };
        let p = forget_history(root).unwrap();
        let v = check_timed_bisimulation(&sem, root, &p, budget).unwrap();
        if !v.holds() {
            sim_bad.push(format!("{}: bisimulation {v:?}", e.seed.name));
        }
        let v = check_bf_simulation(&sem, &ccsk, root, &forget_time(root), budget).unwrap();
        if !v.holds() {
            sim_bad.push(format!("{}: simulation {v:?}", e.seed.name));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = Vec::new();
    let mut unexplained = Vec::new();
    for _ in 0..COMMUTE_SAMPLES {
        let e = &spaces[rng.gen_range(0..spaces.len())];
        let sem = Semantics::new(&e.seed.env);
        let len = rng.gen_range(0..=PL_MAX_LEN);
        let x = random_path(&sem, &e.space.root, len, &mut rng).unwrap().target().clone();
        let tenv = forget_time_env(&e.seed.env);
        let ht = tenv.fold(&forget_history(&forget_time(&x)).unwrap());
        let th = tenv.fold(&forget_time_process(&forget_history(&x).unwrap()));
        if ht != th {
            if !has_undecided_expired_timeout(&x) {
                unexplained.push(format!("{x}: {ht} vs {th}"));
            }
            mismatches.push(format!("{x}: history-first {th}, time-first {ht}"));
        }
    }

    let embed_ok = tpl_bad.is_empty() && ccsk_bad.is_empty() && sim_bad.is_empty();
    let detail = format!(
        "{edges} edges: {} TPL, {} CCSK embedding failures; {} simulation failures; \
         erasures commute on {}/{COMMUTE_SAMPLES} samples ({} outside expired timeouts){}{}{}{}",
        tpl_bad.len(),
        ccsk_bad.len(),
        sim_bad.len(),
        COMMUTE_SAMPLES - mismatches.len(),
        unexplained.len(),
        first(tpl_bad),
        first(ccsk_bad),
        first(sim_bad),
        first(&mismatches),
    );
    C9 {
        outcome: Outcome::new(embed_ok && mismatches.is_empty(), detail),
        only_known_gap: embed_ok && unexplained.is_empty(),
    }
}

fn c11() -> Outcome {
    let mut bad = Vec::new();
    let mut states = 0usize;
    for s in seeds() {
        let tpl = Tpl::new(&s.env);
        let mut seen = HashSet::from([s.process.clone()]);
        let mut frontier = vec![s.process.clone()];
        for _ in 0..TPL_DEPTH {
            let mut next = Vec::new();
            for p in frontier {
                states += 1;
                let moves = tpl.steps(&p).unwrap();
                let ticks: Vec<_> = moves.iter().filter(|(a, _)| a.is_sigma()).collect();
                let tau = moves.iter().any(|(a, _)| *a == Action::Tau);
                if ticks.len() > 1 {
                    bad.push(format!("{}: {p} has {} tick successors", s.name, ticks.len()));
                }
                if tau && !ticks.is_empty() {
                    bad.push(format!("{}: {p} delays a tau", s.name));
                }
                if !tau && ticks.is_empty() {
                    bad.push(format!("{}: {p} can neither tau nor tick", s.name));
                }
                for q in prefixes(&p) {
                    if !tpl.steps(q).unwrap().contains(&(Action::Sigma, q.clone())) {
                        bad.push(format!("{}: prefix {q} is impatient", s.name));
                    }
                }
                for (_, q) in moves {
                    if seen.insert(q.clone()) {
                        next.push(q);
                    }
                }
            }
            frontier = next;
        }
    }
    Outcome::new(bad.is_empty(), format!("{states} TPL states, {} violations{}", bad.len(), first(bad)))
}

/// Visible-prefix subterms.
fn prefixes(p: &Process) -> Vec<&Process> {
    let mut out = Vec::new();
    let mut stack = vec![p];
    while let Some(p) = stack.pop() {
        match p {
            Process::Prefix(a, cont) => {
                if a.is_visible() {
                    out.push(p);
                }
                stack.push(cont);
            }
            Process::Timeout(l, r) | Process::Sum(l, r) | Process::Par(l, r) => {
                stack.push(l);
                stack.push(r);
            }
            Process::Restrict(b, _) => stack.push(b),
            Process::Nil | Process::Const(_) => {}
        }
    }
    out
}

fn main() -> ExitCode {
    let t0 = Instant::now();
    let spaces: Vec<Explored> = seeds()
        .into_iter()
        .map(|seed| {
            let sem = Semantics::new(&seed.env);
            let space = explore(&sem, &seed.process, bounds()).expect("explore");
            Explored { seed, space }
        })
        .collect();
    let explore_time = t0.elapsed();

    let mut lines: Vec<(usize, Outcome)> = vec![
        (1, c1()),
        (2, c2(&spaces, explore_time)),
        (3, per_space(&spaces, |sem, s| check_square(sem, s).expect("square"))),
        (4, per_space(&spaces, |sem, s| check_bti(sem, s).expect("bti"))),
        (5, per_space(&spaces, |_, s| check_wf(s))),
        (6, c6(&spaces)),
        (7, c7(&spaces)),
        (8, c8(&spaces)),
    ];
    let nine = c9(&spaces);
    lines.push((9, nine.outcome));
    lines.push((10, per_space(&spaces, |sem, s| check_tau_oracle(sem, s).expect("tau oracle"))));
    lines.push((11, c11()));

    let mut unexpected = false;
    for (n, o) in &lines {
        println!("criterion {n:>2}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        // The erasure mismatch on expired timeouts is a known, analysed gap.
        if !o.pass && !(*n == 9 && nine.only_known_gap) {
            unexpected = true;
        }
    }
    println!("total {:.1}s", t0.elapsed().as_secs_f64());
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
