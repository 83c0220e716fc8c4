use std::collections::HashSet;

use crate::analysis::{has_key, is_standard, key_ids};
use crate::semantics::{Label, SemanticsError};
use crate::syntax::{Action, Config, DefinitionEnv, Key, Process, RuntimePrefix};

type Result<T> = std::result::Result<T, SemanticsError>;

/// The untimed reversible calculus. Inputs must be free of ticks, ghosts
/// and timeouts; the environment must be untimed as well.
#[derive(Clone, Copy, Debug)]
pub struct Ccsk<'e> {
    env: &'e DefinitionEnv,
}

impl<'e> Ccsk<'e> {
    pub fn new(env: &'e DefinitionEnv) -> Self {
        Ccsk { env }
    }

    fn body(&self, name: &str) -> Result<&'e Process> {
        self.env
            .body(name)
            .ok_or_else(|| SemanticsError::Unbound(name.to_string()))
    }

    // targets folded as in the timed engine
    fn finish(&self, steps: Vec<(Action, Config)>, id: u32) -> Vec<(Label, Config)> {
        let mut seen = HashSet::new();
        steps
            .into_iter()
            .map(|(a, t)| (a, self.env.fold_config(&t)))
            .filter(|s| seen.insert(s.clone()))
            .map(|(a, t)| (Label::new(a, id), t))
            .collect()
    }

    /// Forward moves using the fresh key `id`.
    pub fn fwd(&self, x: &Config, id: u32) -> Result<Vec<(Label, Config)>> {
        let steps = self.fwd_at(x, id, 0)?;
        Ok(self.finish(steps, id))
    }

    pub fn bk(&self, x: &Config) -> Result<Vec<(Label, Config)>> {
        let mut out = Vec::new();
        for id in key_ids(x) {
            out.extend(self.finish(self.bk_at(x, id)?, id));
        }
        Ok(out)
    }

    fn fwd_at(&self, x: &Config, k: u32, depth: usize) -> Result<Vec<(Action, Config)>> {
        if depth > 64 {
            return Err(SemanticsError::UnfoldBudget(64));
        }
        Ok(match x {
            Config::Std(p) => match p {
                Process::Nil => Vec::new(),
                Process::Prefix(a, cont) => vec![(
                    a.clone(),
                    Config::keyed(RuntimePrefix::Act(a.clone()), Key::comm(k), (**cont).clone().into()),
                )],
                Process::Sum(l, r) => self.sum(&(**l).clone().into(), &(**r).clone().into(), k, depth)?,
                Process::Par(l, r) => self.par(&(**l).clone().into(), &(**r).clone().into(), k, depth)?,
                Process::Restrict(b, a) => self.hide(self.fwd_at(&(**b).clone().into(), k, depth)?, a),
                Process::Const(n) => self.fwd_at(&self.body(n)?.clone().into(), k, depth + 1)?,
                Process::Timeout(..) => Vec::new(),
            },
            Config::Keyed(rp, i, c) if i.id != k => self
                .fwd_at(c, k, depth)?
                .into_iter()
                .map(|(a, t)| (a, Config::keyed(rp.clone(), *i, t)))
                .collect(),
            Config::Sum(l, r) => self.sum(l, r, k, depth)?,
            Config::Par(l, r) => self.par(l, r, k, depth)?,
            Config::Restrict(c, a) => self.hide(self.fwd_at(c, k, depth)?, a),
            _ => Vec::new(),
        })
    }

    fn sum(&self, l: &Config, r: &Config, k: u32, depth: usize) -> Result<Vec<(Action, Config)>> {
        let mut out = Vec::new();
        if is_standard(r) {
            for (a, t) in self.fwd_at(l, k, depth)? {
                out.push((a, Config::sum(t, r.clone())));
            }
        }
        if is_standard(l) {
            for (a, t) in self.fwd_at(r, k, depth)? {
                out.push((a, Config::sum(l.clone(), t)));
            }
        }
        Ok(out)
    }

    fn par(&self, l: &Config, r: &Config, k: u32, depth: usize) -> Result<Vec<(Action, Config)>> {
        let ls = self.fwd_at(l, k, depth)?;
        let rs = self.fwd_at(r, k, depth)?;
        Ok(combine(l, r, k, ls, rs))
    }

    fn hide(&self, steps: Vec<(Action, Config)>, a: &str) -> Vec<(Action, Config)> {
        steps
            .into_iter()
            .filter(|(x, _)| x.channel() != Some(a))
            .map(|(x, t)| (x, Config::restrict(t, a)))
            .collect()
    }

    fn bk_at(&self, x: &Config, k: u32) -> Result<Vec<(Action, Config)>> {
        let mut out: Vec<(Action, Config)> = match x {
            Config::Std(_) => Vec::new(),
            Config::Keyed(RuntimePrefix::Act(a), i, c) if i.id == k => match &**c {
                Config::Std(p) => vec![(a.clone(), Process::prefix(a.clone(), p.clone()).into())],
                _ => Vec::new(),
            },
            Config::Keyed(rp, i, c) => self
                .bk_at(c, k)?
                .into_iter()
                .map(|(a, t)| (a, Config::keyed(rp.clone(), *i, t)))
                .collect(),
            Config::Sum(l, r) => {
                let mut out = Vec::new();
                if is_standard(r) {
                    for (a, t) in self.bk_at(l, k)? {
                        out.push((a, Config::sum(t, (**r).clone())));
                    }
                }
                if is_standard(l) {
                    for (a, t) in self.bk_at(r, k)? {
                        out.push((a, Config::sum((**l).clone(), t)));
                    }
                }
                out
            }
            Config::Par(l, r) => {
                let ls = self.bk_at(l, k)?;
                let rs = self.bk_at(r, k)?;
                combine(l, r, k, ls, rs)
            }
            Config::Restrict(c, a) => self.hide(self.bk_at(c, k)?, a),
            _ => Vec::new(),
        };
        let folded: Vec<_> = out
            .iter()
            .flat_map(|(a, t)| match t {
                Config::Std(p) => self
                    .env
                    .names_with_body(p)
                    .map(|n| (a.clone(), Process::constant(n.clone()).into()))
                    .collect(),
                _ => Vec::new(),
            })
            .collect();
        out.extend(folded);
        Ok(out)
    }
}

fn combine(
    l: &Config,
    r: &Config,
    k: u32,
    ls: Vec<(Action, Config)>,
    rs: Vec<(Action, Config)>,
) -> Vec<(Action, Config)> {
    let mut out = Vec::new();
    if !has_key(r, k) {
        out.extend(ls.iter().map(|(a, t)| (a.clone(), Config::par(t.clone(), r.clone()))));
    }
    if !has_key(l, k) {
        out.extend(rs.iter().map(|(a, t)| (a.clone(), Config::par(l.clone(), t.clone()))));
    }
    for (a, lt) in &ls {
        for (_, rt) in rs.iter().filter(|(b, _)| a.is_complement_of(b)) {
            out.push((Action::Tau, Config::par(lt.clone(), rt.clone())));
        }
    }
    out
}
