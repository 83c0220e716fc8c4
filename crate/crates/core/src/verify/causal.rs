use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use super::parabolic::swap;
use super::path::{Path, Stepper};
use crate::analysis::key_ids;
use crate::semantics::{canonical_renaming, Direction, Label, SemanticsError, Transition};
use crate::syntax::{Config, Key};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CcBudget {
    /// Distinct rewritten paths visited from each side.
    pub max_forms: usize,
}

impl Default for CcBudget {
    fn default() -> Self {
        CcBudget { max_forms: 20_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CcVerdict {
    /// A common rewrite was found after `moves` swaps and cancellations.
    Equivalent { moves: usize },
    /// Both rewrite closures were exhausted without meeting.
    Inequivalent,
    BudgetExhausted,
    /// Targets differ even up to key renaming.
    NotCofinal,
    NotCoinitial,
}

type FormKey = Vec<(Direction, Label, Config)>;

fn form_key(steps: &[Transition]) -> FormKey {
    steps
        .iter()
        .map(|t| (t.direction, t.label.clone(), t.target.clone()))
        .collect()
}

fn rename(t: &Transition, f: &impl Fn(u32) -> u32) -> Transition {
    let mut g = |k: Key| Key { id: f(k.id), kind: k.kind };
    Transition {
        direction: t.direction,
        label: Label::new(t.label.action.clone(), f(t.label.key.id)),
        source: t.source.map_keys(&mut g),
        target: t.target.map_keys(&mut g),
        rule: t.rule,
    }
}

/// One-step rewrites: cancel an adjacent do/undo pair or commute an
/// adjacent pair through an independent coinitial square.
fn neighbours(st: &Stepper<'_, '_>, steps: &[Transition]) -> Result<Vec<Vec<Transition>>, SemanticsError> {
    let mut out = Vec::new();
    for n in 0..steps.len().saturating_sub(1) {
        let (a, b) = (&steps[n], &steps[n + 1]);
        if a.direction != b.direction && a.label == b.label && b.target == a.source {
            let mut v = steps.to_vec();
            v.drain(n..n + 2);
            out.push(v);
        }
        if let Some((s, t)) = swap(st, a, b)? {
            let mut v = steps.to_vec();
            v[n] = s;
            v[n + 1] = t;
            out.push(v);
        }
    }
    Ok(out)
}

/// Searches for a common rewrite of two coinitial paths whose targets agree
/// up to key renaming. Keys of `omega` are first renamed to line up with
/// those of `chi` on the shared target.
pub fn check_causal_equivalence(
    st: &Stepper<'_, '_>,
    chi: &Path,
    omega: &Path,
    budget: CcBudget,
) -> Result<CcVerdict, SemanticsError> {
    if chi.source != omega.source {
        return Ok(CcVerdict::NotCoinitial);
    }
    let rc = canonical_renaming(chi.target());
    let ro = canonical_renaming(omega.target());
    let back: BTreeMap<u32, u32> = rc.iter().map(|(&id, &r)| (r, id)).collect();
    let mut map: BTreeMap<u32, u32> = ro.iter().map(|(&id, r)| (id, back.get(r).copied().unwrap_or(id))).collect();
    let mut spare = 1u32 << 30;
    for t in &omega.steps {
        for id in key_ids(&t.target).into_iter().chain([t.label.key.id]) {
            map.entry(id).or_insert_with(|| {
                spare += 1;
                spare
            });
        }
    }
    let f = |id: u32| map.get(&id).copied().unwrap_or(id);
    let omega: Vec<Transition> = omega.steps.iter().map(|t| rename(t, &f)).collect();
    if chi.target() != omega.last().map_or(&chi.source, |t| &t.target) {
        return Ok(CcVerdict::NotCofinal);
    }

    let mut seen: [HashMap<FormKey, usize>; 2] = [HashMap::new(), HashMap::new()];
    let mut queues: [VecDeque<Vec<Transition>>; 2] = [VecDeque::new(), VecDeque::new()];
    for (side, steps) in [chi.steps.clone(), omega].into_iter().enumerate() {
        let k = form_key(&steps);
        if let Some(&d) = seen[1 - side].get(&k) {
            return Ok(CcVerdict::Equivalent { moves: d });
        }
        seen[side].insert(k, 0);
        queues[side].push_back(steps);
    }
    let mut exhausted = false;
    while !queues[0].is_empty() || !queues[1].is_empty() {
        for side in 0..2 {
            let Some(steps) = queues[side].pop_front() else {
                continue;
            };
            let d = seen[side][&form_key(&steps)];
            for next in neighbours(st, &steps)? {
                let k = form_key(&next);
                if seen[side].contains_key(&k) {
                    continue;
                }
                if let Some(&e) = seen[1 - side].get(&k) {
                    return Ok(CcVerdict::Equivalent { moves: d + 1 + e });
                }
                if seen[side].len() >= budget.max_forms {
                    exhausted = true;
                    continue;
                }
                seen[side].insert(k, d + 1);
                queues[side].push_back(next);
            }
        }
    }
    Ok(if exhausted {
        CcVerdict::BudgetExhausted
    } else {
        CcVerdict::Inequivalent
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::Semantics;
    use crate::syntax::{parse_program, DefinitionEnv};

    fn step(sem: &Semantics<'_>, p: &mut Path, d: Direction, act: &str, k: u32) {
        let cur = p.target().clone();
        let ts = match d {
            Direction::Fwd => sem.forward_with_key(&cur, k).unwrap(),
            Direction::Bk => sem.backward_with_key(&cur, k).unwrap(),
        };
        p.steps.push(ts.into_iter().find(|t| t.label.action.to_string() == act).unwrap());
    }

    fn setup(src: &str) -> (DefinitionEnv, Config) {
        let (env, p) = parse_program(src).unwrap();
        (env, p.into())
    }

    #[test]
    fn identical_paths() {
        let (env, x) = setup("a.0");
        let sem = Semantics::new(&env);
        let mut p = Path::empty(x);
        step(&sem, &mut p, Direction::Fwd, "a", 0);
        let v = check_causal_equivalence(&Stepper::new(&sem), &p, &p, CcBudget::default()).unwrap();
        assert_eq!(v, CcVerdict::Equivalent { moves: 0 });
    }

    #[test]
    fn interleavings_swap() {
        let (env, x) = setup("a.0 | b.0");
        let sem = Semantics::new(&env);
        let mut chi = Path::empty(x.clone());
        step(&sem, &mut chi, Direction::Fwd, "a", 0);
        step(&sem, &mut chi, Direction::Fwd, "b", 1);
        let mut omega = Path::empty(x);
        step(&sem, &mut omega, Direction::Fwd, "b", 7);
        step(&sem, &mut omega, Direction::Fwd, "a", 3);
        let v = check_causal_equivalence(&Stepper::new(&sem), &chi, &omega, CcBudget::default()).unwrap();
        assert_eq!(v, CcVerdict::Equivalent { moves: 1 });
    }

    #[test]
    fn do_undo_then_step() {
        let (env, x) = setup("a.0 | b.0");
        let sem = Semantics::new(&env);
        let mut chi = Path::empty(x.clone());
        step(&sem, &mut chi, Direction::Fwd, "a", 0);
        step(&sem, &mut chi, Direction::Bk, "a", 0);
        step(&sem, &mut chi, Direction::Fwd, "b", 1);
        let mut omega = Path::empty(x);
        step(&sem, &mut omega, Direction::Fwd, "b", 1);
        let v = check_causal_equivalence(&Stepper::new(&sem), &chi, &omega, CcBudget::default()).unwrap();
        assert_eq!(v, CcVerdict::Equivalent { moves: 1 });
    }
}
