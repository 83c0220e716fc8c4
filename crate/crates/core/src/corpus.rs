//! Seed programs for bounded checking and the built-in example regressions.

use std::collections::BTreeSet;

use crate::analysis::{fcc, key_order};
use crate::reference::Tpl;
use crate::semantics::{Semantics, Transition};
use crate::syntax::{parse_configuration, parse_program, Action, Config, DefinitionEnv, Process};

/// Named seed programs. Together they exercise every operator, ticks,
/// timeouts, restriction and guarded recursion.
pub const SEEDS: &[(&str, &str)] = &[
    ("nil", "0"),
    ("prefix", "a.b.0"),
    ("delay", "s.a.0"),
    ("delay-choice", "a.0 + s.0"),
    ("delayed-branch", "s.a.0 + b.0"),
    ("sum", "a.c.0 + b.d.0"),
    ("sync", "a.0 | 'a.0"),
    ("patience", "a.0 | s.'a.0"),
    ("ghosts", "s.a.0 | b.s.0"),
    ("three", "a.0 | b.0 | c.0"),
    ("two-syncs", "a.0 | 'a.0 | a.0 | 'a.0"),
    ("choice-sync", "(a.0 + b.0) | 'a.0"),
    ("hidden", "(a.c.0 | 'a.0) \\ a"),
    ("timeout", "[a.0](b.0)"),
    ("timeout-sync", "[(a.0 | 'a.0)](b.0)"),
    ("timeout-taken", "'p.0 | [p.c.0](d.0)"),
    ("timeout-expires", "s.'p.0 | [p.c.0](d.0)"),
    ("nested-timeout", "[a.0]([b.0](c.0))"),
    ("timeout-choice", "[a.0 + b.0](s.c.0) | 'b.0"),
    ("hidden-timeout", "([a.0](s.b.0) | s.'a.0) \\ a"),
    ("ticker", "A = a.s.A; A"),
    ("server", "S = req.'resp.S; S | 'req.resp.0"),
    ("retry", "T = [p.0](q.T); T | s.'p.0"),
    ("counter", "C = tick.s.C + stop.0; C | 'tick.0"),
];

#[derive(Clone, Debug)]
pub struct Seed {
    pub name: &'static str,
    pub source: &'static str,
    pub env: DefinitionEnv,
    pub process: Process,
}

pub fn seeds() -> Vec<Seed> {
    SEEDS
        .iter()
        .map(|&(name, source)| {
            let (env, process) = parse_program(source).expect("seed parses");
            Seed {
                name,
                source,
                env,
                process,
            }
        })
        .collect()
}

/// Outcome of one built-in example.
#[derive(Clone, Debug)]
pub struct Regression {
    pub name: &'static str,
    pub result: Result<(), String>,
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn program(src: &str) -> Result<(DefinitionEnv, Process), String> {
    parse_program(src).map_err(|e| e.to_string())
}

fn conf(src: &str) -> Result<Config, String> {
    parse_configuration(src, &DefinitionEnv::default()).map_err(|e| e.to_string())
}

fn tpl_has(src: &str, act: Action, target: &str) -> Result<(), String> {
    let (env, p) = program(src)?;
    let want = parse_program(target).map_err(|e| e.to_string())?.1;
    let steps = Tpl::new(&env).steps(&p).map_err(|e| e.to_string())?;
    check(steps.contains(&(act.clone(), want)), || {
        format!("`{src}` has no {act} move to `{target}`")
    })
}

/// One move of `x` with `act` and key `id`, in the given direction.
fn take(sem: &Semantics<'_>, x: &Config, fwd: bool, act: &Action, id: u32) -> Result<Transition, String> {
    let ts = if fwd {
        sem.forward_with_key(x, id)
    } else {
        sem.backward_with_key(x, id)
    }
    .map_err(|e| e.to_string())?;
    let mut hits = ts.into_iter().filter(|t| &t.label.action == act);
    match (hits.next(), hits.next()) {
        (Some(t), None) => Ok(t),
        (None, _) => Err(format!("`{x}` has no {act}[{id}] move")),
        (Some(_), Some(_)) => Err(format!("`{x}` has several {act}[{id}] moves")),
    }
}

fn same(x: &Config, want: &str) -> Result<(), String> {
    let w = conf(want)?;
    check(*x == w, || format!("got `{x}`, expected `{want}`"))
}

fn synch_family(src: &str) -> Result<BTreeSet<BTreeSet<String>>, String> {
    let env = DefinitionEnv::default();
    let s = Semantics::new(&env).synch(&conf(src)?).map_err(|e| e.to_string())?;
    Ok(s.into_iter()
        .map(|m| m.into_iter().map(|a| a.to_string()).collect())
        .collect())
}

fn family(xs: &[&[&str]]) -> BTreeSet<BTreeSet<String>> {
    xs.iter()
        .map(|m| m.iter().map(|s| s.to_string()).collect())
        .collect()
}

/// Runs every built-in example.
pub fn regressions() -> Vec<Regression> {
    let cases: Vec<(&'static str, fn() -> Result<(), String>)> = vec![
        ("timeout-taken-by-partner", || {
            tpl_has("'p.0 | [p.c.0](d.0)", Action::Tau, "0 | c.0")
        }),
        ("timeout-expires-while-partner-sleeps", || {
            tpl_has("s.'p.0 | [p.c.0](d.0)", Action::Sigma, "'p.0 | d.0")
        }),
        ("patient-choice-keeps-state", || {
            tpl_has("a.c.0 + b.d.0", Action::Sigma, "a.c.0 + b.d.0")
        }),
        ("choice-branches-both-tick", || {
            let (env, p) = program("a.0 + s.0")?;
            let sem = Semantics::new(&env);
            let x = take(&sem, &p.into(), true, &Action::name("a"), 1)?;
            same(&x.target, "a[1].0 + s.0")?;
            let y = take(&sem, &x.target, true, &Action::Sigma, 2)?;
            same(&y.target, "a[1].s_[2].0 + s[2].0")
        }),
        ("ghost-tick-can-be-undone-then-act", || {
            let (env, p) = program("a.c.0")?;
            let sem = Semantics::new(&env);
            let x0: Config = p.into();
            let x1 = take(&sem, &x0, true, &Action::Sigma, 1)?;
            same(&x1.target, "s_[1].a.c.0")?;
            let x2 = take(&sem, &x1.target, false, &Action::Sigma, 1)?;
            same(&x2.target, "a.c.0")?;
            let x3 = take(&sem, &x2.target, true, &Action::name("a"), 2)?;
            same(&x3.target, "a[2].c.0")
        }),
        ("planned-delay-blocks-action", || {
            let (env, p) = program("s.a.c.0")?;
            let sem = Semantics::new(&env);
            let x1 = take(&sem, &p.into(), true, &Action::Sigma, 1)?;
            same(&x1.target, "s[1].a.c.0")?;
            let x2 = take(&sem, &x1.target, false, &Action::Sigma, 1)?;
            same(&x2.target, "s.a.c.0")?;
            let moves = sem.forward_with_key(&x2.target, 2).map_err(|e| e.to_string())?;
            check(moves.iter().all(|t| t.label.action != Action::name("a")), || {
                "`s.a.c.0` acts on a".into()
            })
        }),
        ("timeout-prefers-synchronisation", || {
            let (env, p) = program("[(a | 'a)](b)")?;
            let sem = Semantics::new(&env);
            let ts = sem.forward_with_key(&p.into(), 1).map_err(|e| e.to_string())?;
            let taus: Vec<_> = ts.iter().filter(|t| t.label.action == Action::Tau).collect();
            check(taus.len() == 1, || format!("{} tau moves", taus.len()))?;
            same(&taus[0].target, "[(a[1].0 | 'a[1].0)](b.0)@L[1]")?;
            check(!ts.iter().any(|t| t.is_sigma()), || "time passes".into())
        }),
        ("key-order", || {
            let x = conf("[a.0](b[2].0)@R[1] | s_[1].c[3].d[4].0 | s_[1].'c[3].0")?;
            let got = key_order(&x).lt;
            let want = BTreeSet::from([(1, 2), (1, 3), (1, 4), (3, 4)]);
            check(got == want, || format!("order {got:?}"))
        }),
        ("fcc-same-prefix", || {
            let r = fcc(&conf("a[1].b[2].0")?, &conf("a[1].b[3].0")?).map_err(|e| e.to_string())?;
            check(r, || "no conflict".into())
        }),
        ("fcc-choice-under-expired-timeout", || {
            let r = fcc(
                &conf("[a.0](b[2].(a[3].0 + b.0))@R[1]")?,
                &conf("[a.0](b[2].(a.0 + b[4].0))@R[1]")?,
            )
            .map_err(|e| e.to_string())?;
            check(r, || "no conflict".into())
        }),
        ("synch-single-pair", || {
            let got = synch_family("(a.0 + 'a.0) | a.0")?;
            check(got == family(&[&["a", "'a"], &["a"]]), || format!("{got:?}"))
        }),
        ("synch-two-pairs", || {
            let got = synch_family("(b.0 + 'a.0) | a.0 | 'b.0")?;
            check(got == family(&[&["b", "a", "'b"], &["'a", "a", "'b"]]), || {
                format!("{got:?}")
            })
        }),
        ("synch-of-choice", || {
            let got = synch_family("a.0 + 'a.0")?;
            check(got == family(&[&["a"], &["'a"]]), || format!("{got:?}"))
        }),
    ];
    cases
        .into_iter()
        .map(|(name, f)| Regression { name, result: f() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_parse() {
        assert!(seeds().len() >= 20);
    }

    #[test]
    fn regressions_pass() {
        for r in regressions() {
            assert!(r.result.is_ok(), "{}: {:?}", r.name, r.result);
        }
    }
}
