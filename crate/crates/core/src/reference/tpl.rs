use crate::semantics::SemanticsError;
use crate::syntax::{Action, DefinitionEnv, Process};

type Result<T> = std::result::Result<T, SemanticsError>;

/// The forward, history-free timed calculus. Time determinism, patience of
/// visible prefixes and maximal progress are properties of these rules.
#[derive(Clone, Copy, Debug)]
pub struct Tpl<'e> {
    env: &'e DefinitionEnv,
    unfold_budget: usize,
}

impl<'e> Tpl<'e> {
    pub fn new(env: &'e DefinitionEnv) -> Self {
        Tpl {
            env,
            unfold_budget: 64,
        }
    }

    /// All moves of `p`, deduplicated.
    pub fn steps(&self, p: &Process) -> Result<Vec<(Action, Process)>> {
        let mut out = self.actions(p, 0)?;
        if let Some(q) = self.tick(p, 0)? {
            out.push((Action::Sigma, q));
        }
        for (_, q) in &mut out {
            *q = self.env.fold(q);
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|s| seen.insert(s.clone()));
        Ok(out)
    }

    pub fn can_tau(&self, p: &Process) -> Result<bool> {
        Ok(self.actions(p, 0)?.iter().any(|(a, _)| *a == Action::Tau))
    }

    fn body(&self, name: &str, depth: usize) -> Result<&'e Process> {
        if depth >= self.unfold_budget {
            return Err(SemanticsError::UnfoldBudget(self.unfold_budget));
        }
        self.env
            .body(name)
            .ok_or_else(|| SemanticsError::Unbound(name.to_string()))
    }

    fn actions(&self, p: &Process, depth: usize) -> Result<Vec<(Action, Process)>> {
        Ok(match p {
            Process::Nil | Process::Prefix(Action::Sigma, _) => Vec::new(),
            Process::Prefix(a, cont) => vec![(a.clone(), (**cont).clone())],
            Process::Sum(l, r) => {
                let mut out = self.actions(l, depth)?;
                out.extend(self.actions(r, depth)?);
                out
            }
            Process::Timeout(main, _) => self.actions(main, depth)?,
            Process::Par(l, r) => {
                let ls = self.actions(l, depth)?;
                let rs = self.actions(r, depth)?;
                let mut out = Vec::new();
                for (a, l2) in &ls {
                    out.push((a.clone(), Process::par(l2.clone(), (**r).clone())));
                }
                for (b, r2) in &rs {
                    out.push((b.clone(), Process::par((**l).clone(), r2.clone())));
                }
                for (a, l2) in &ls {
                    for (_, r2) in rs.iter().filter(|(b, _)| a.is_complement_of(b)) {
                        out.push((Action::Tau, Process::par(l2.clone(), r2.clone())));
                    }
                }
                out
            }
            Process::Restrict(b, a) => self
                .actions(b, depth)?
                .into_iter()
                .filter(|(x, _)| x.channel() != Some(a))
                .map(|(x, q)| (x, Process::restrict(q, a.clone())))
                .collect(),
            Process::Const(name) => self.actions(self.body(name, depth)?, depth + 1)?,
        })
    }

    /// The unique time successor, if any.
    fn tick(&self, p: &Process, depth: usize) -> Result<Option<Process>> {
        Ok(match p {
            Process::Nil => Some(Process::Nil),
            Process::Prefix(Action::Sigma, cont) => Some((**cont).clone()),
            // tau is urgent and never idles
            Process::Prefix(a, _) => a.is_visible().then(|| p.clone()),
            Process::Sum(l, r) => match (self.tick(l, depth)?, self.tick(r, depth)?) {
                (Some(l2), Some(r2)) => Some(Process::sum(l2, r2)),
                _ => None,
            },
            Process::Timeout(main, alt) => {
                let stuck = !self.actions(main, depth)?.iter().any(|(a, _)| *a == Action::Tau);
                stuck.then(|| (**alt).clone())
            }
            Process::Par(l, r) => {
                if self.actions(p, depth)?.iter().any(|(a, _)| *a == Action::Tau) {
                    None
                } else {
                    match (self.tick(l, depth)?, self.tick(r, depth)?) {
                        (Some(l2), Some(r2)) => Some(Process::par(l2, r2)),
                        _ => None,
                    }
                }
            }
            Process::Restrict(b, a) => self.tick(b, depth)?.map(|q| Process::restrict(q, a.clone())),
            Process::Const(name) => self.tick(self.body(name, depth)?, depth + 1)?,
        })
    }
}
