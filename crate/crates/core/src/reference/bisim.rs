use std::collections::HashMap;

use serde::Serialize;

use super::{Ccsk, Tpl};
use crate::analysis::key_ids;
use crate::semantics::{canonicalize_keys, Direction, SemanticsError, Semantics, Transition};
use crate::syntax::{Config, Process};
use crate::trace::TraceStep;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Moves explored from the initial pair.
    pub depth: usize,
    /// Distinct (pair, depth) entries before giving up.
    pub max_pairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            depth: 5,
            max_pairs: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// The relation holds up to the depth bound.
    Holds,
    CounterExample { path: Vec<TraceStep>, reason: String },
    BudgetExhausted,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

#[derive(Clone, Debug)]
struct Failure {
    path: Vec<TraceStep>,
    reason: String,
}

impl Failure {
    fn at(reason: String) -> Self {
        Failure {
            path: Vec::new(),
            reason,
        }
    }

    fn behind(mut self, t: &Transition) -> Self {
        self.path.insert(0, t.into());
        self
    }
}

struct Exhausted;

type Outcome = Result<Option<Failure>, Exhausted>;

fn smallest_fresh(x: &Config) -> u32 {
    let used = key_ids(x);
    (0..).find(|i| !used.contains(i)).unwrap()
}

fn finish(r: Result<Result<Option<Failure>, SemanticsError>, Exhausted>) -> Result<Verdict, SemanticsError> {
    match r {
        Err(Exhausted) => Ok(Verdict::BudgetExhausted),
        Ok(Err(e)) => Err(e),
        Ok(Ok(None)) => Ok(Verdict::Holds),
        Ok(Ok(Some(f))) => Ok(Verdict::CounterExample {
            path: f.path,
            reason: f.reason,
        }),
    }
}

/// Strong timed bisimilarity between a configuration and a history-free
/// process, explored to `budget.depth` moves. Keys on the configuration
/// side are the smallest fresh ids.
pub fn check_timed_bisimulation(
    sem: &Semantics<'_>,
    x: &Config,
    p: &Process,
    budget: Budget,
) -> Result<Verdict, SemanticsError> {
    let mut b = Bisim {
        sem,
        tpl: Tpl::new(sem.env()),
        memo: HashMap::new(),
        budget,
        err: None,
    };
    let r = b.go(x, p, budget.depth);
    finish(r.map(|o| match b.err.take() {
        Some(e) => Err(e),
        None => Ok(o),
    }))
}

struct Bisim<'a, 'e> {
    sem: &'a Semantics<'e>,
    tpl: Tpl<'e>,
    memo: HashMap<(Config, Process, usize), Option<Failure>>,
    budget: Budget,
    err: Option<SemanticsError>,
}

impl Bisim<'_, '_> {
    fn go(&mut self, x: &Config, p: &Process, d: usize) -> Outcome {
        if d == 0 || self.err.is_some() {
            return Ok(None);
        }
        let key = (canonicalize_keys(x), p.clone(), d);
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        if self.memo.len() >= self.budget.max_pairs {
            return Err(Exhausted);
        }
        let r = self.compute(x, p, d)?;
        self.memo.insert(key, r.clone());
        Ok(r)
    }

    fn compute(&mut self, x: &Config, p: &Process, d: usize) -> Outcome {
        let xs = match self.sem.forward_with_key(x, smallest_fresh(x)) {
            Ok(v) => v,
            Err(e) => {
                self.err = Some(e);
                return Ok(None);
            }
        };
        let ps = match self.tpl.steps(p) {
            Ok(v) => v,
            Err(e) => {
                self.err = Some(e);
                return Ok(None);
            }
        };
        for t in &xs {
            let mut first = None;
            let mut matched = false;
            for (_, q) in ps.iter().filter(|(a, _)| *a == t.label.action) {
                match self.go(&t.target, q, d - 1)? {
                    None => {
                        matched = true;
                        break;
                    }
                    Some(f) => {
                        first.get_or_insert(f);
                    }
                }
            }
            if !matched {
                let f = first.unwrap_or_else(|| {
                    Failure::at(format!("`{p}` cannot answer {} of `{x}`", t.label))
                });
                return Ok(Some(f.behind(t)));
            }
        }
        for (a, q) in &ps {
            let mut first = None;
            let mut matched = false;
            for t in xs.iter().filter(|t| t.label.action == *a) {
                match self.go(&t.target, q, d - 1)? {
                    None => {
                        matched = true;
                        break;
                    }
                    Some(f) => {
                        first.get_or_insert(f.behind(t));
                    }
                }
            }
            if !matched {
                return Ok(Some(first.unwrap_or_else(|| {
                    Failure::at(format!("`{x}` cannot answer {a} of `{p}` reaching `{q}`"))
                })));
            }
        }
        Ok(None)
    }
}

/// Back-and-forward simulation of a configuration by an untimed reversible
/// configuration: communications are matched with the same label and key
/// in both directions, ticks are answered by staying put. `ccsk` must use
/// the time-erased definitions.
pub fn check_bf_simulation(
    sem: &Semantics<'_>,
    ccsk: &Ccsk<'_>,
    x: &Config,
    r: &Config,
    budget: Budget,
) -> Result<Verdict, SemanticsError> {
    let mut s = Sim {
        sem,
        ccsk,
        memo: HashMap::new(),
        budget,
        err: None,
    };
    let out = s.go(x, r, budget.depth);
    finish(out.map(|o| match s.err.take() {
        Some(e) => Err(e),
        None => Ok(o),
    }))
}

struct Sim<'a, 'e, 'k> {
    sem: &'a Semantics<'e>,
    ccsk: &'a Ccsk<'k>,
    memo: HashMap<(Config, usize), Option<Failure>>,
    budget: Budget,
    err: Option<SemanticsError>,
}

impl Sim<'_, '_, '_> {
    fn go(&mut self, x: &Config, r: &Config, d: usize) -> Outcome {
        if d == 0 || self.err.is_some() {
            return Ok(None);
        }
        // joint renaming keeps the keys shared by both sides aligned
        let key = (canonicalize_keys(&Config::Par(Box::new(x.clone()), Box::new(r.clone()))), d);
        if let Some(f) = self.memo.get(&key) {
            return Ok(f.clone());
        }
        if self.memo.len() >= self.budget.max_pairs {
            return Err(Exhausted);
        }
        let out = self.compute(x, r, d)?;
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn compute(&mut self, x: &Config, r: &Config, d: usize) -> Outcome {
        let fresh = smallest_fresh(&Config::Par(Box::new(x.clone()), Box::new(r.clone())));
        let moves = self
            .sem
            .forward_with_key(x, fresh)
            .and_then(|mut v| {
                v.extend(self.sem.backward_steps(x)?);
                Ok(v)
            });
        let moves = match moves {
            Ok(v) => v,
            Err(e) => {
                self.err = Some(e);
                return Ok(None);
            }
        };
        for t in &moves {
            if t.is_sigma() {
                if let Some(f) = self.go(&t.target, r, d - 1)? {
                    return Ok(Some(f.behind(t)));
                }
                continue;
            }
            let answers = match t.direction {
                Direction::Fwd => self.ccsk.fwd(r, t.label.key.id),
                Direction::Bk => self.ccsk.bk(r),
            };
            let answers = match answers {
                Ok(v) => v,
                Err(e) => {
                    self.err = Some(e);
                    return Ok(None);
                }
            };
            let mut first = None;
            let mut matched = false;
            for (_, s) in answers.iter().filter(|(l, _)| *l == t.label) {
                match self.go(&t.target, s, d - 1)? {
                    None => {
                        matched = true;
                        break;
                    }
                    Some(f) => {
                        first.get_or_insert(f);
                    }
                }
            }
            if !matched {
                let f = first.unwrap_or_else(|| {
                    Failure::at(format!("`{r}` cannot answer {} {} of `{x}`", t.direction, t.label))
                });
                return Ok(Some(f.behind(t)));
            }
        }
        Ok(None)
    }
}
