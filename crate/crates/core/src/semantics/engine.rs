use std::collections::HashSet;

use super::synch::{has_sync_pair, oplus, SynchSet};
use super::{Direction, KeyAllocator, Label, Options, SemanticsError, Transition};
use crate::analysis::{has_key, is_not_acted, key_ids};
use crate::syntax::{Action, Config, DefinitionEnv, Key, Process, RuntimePrefix};

type Result<T> = std::result::Result<T, SemanticsError>;

/// One derivable move of a subterm; the key is implicit in the query.
#[derive(Clone, Debug)]
struct Step {
    action: Action,
    rule: &'static str,
    target: Config,
}

impl Step {
    fn new(action: Action, rule: &'static str, target: Config) -> Self {
        Step { action, rule, target }
    }

    fn map(self, rule: &'static str, f: impl FnOnce(Config) -> Config) -> Self {
        Step {
            action: self.action,
            rule,
            target: f(self.target),
        }
    }
}

/// The rule engine over a fixed set of definitions.
#[derive(Clone, Copy, Debug)]
pub struct Semantics<'e> {
    env: &'e DefinitionEnv,
    opts: Options,
}

impl<'e> Semantics<'e> {
    pub fn new(env: &'e DefinitionEnv) -> Self {
        Semantics {
            env,
            opts: Options::default(),
        }
    }

    pub fn with_options(env: &'e DefinitionEnv, opts: Options) -> Self {
        Semantics { env, opts }
    }

    pub fn env(&self) -> &'e DefinitionEnv {
        self.env
    }

    pub fn options(&self) -> Options {
        self.opts
    }

    fn body(&self, name: &str, depth: usize) -> Result<&'e Process> {
        if depth >= self.opts.unfold_budget {
            return Err(SemanticsError::UnfoldBudget(self.opts.unfold_budget));
        }
        self.env
            .body(name)
            .ok_or_else(|| SemanticsError::Unbound(name.to_string()))
    }

    /// Targets are returned with constants folded, see
    /// [`DefinitionEnv::fold`].
    fn into_transitions(&self, dir: Direction, x: &Config, id: u32, steps: Vec<Step>) -> Vec<Transition> {
        let mut seen = HashSet::new();
        steps
            .into_iter()
            .map(|s| Step {
                target: self.env.fold_config(&s.target),
                ..s
            })
            .filter(|s| seen.insert((s.action.clone(), s.target.clone())))
            .map(|s| Transition {
                direction: dir,
                label: Label::new(s.action, id),
                source: x.clone(),
                target: s.target,
                rule: s.rule,
            })
            .collect()
    }

    /// Every forward transition of `x` whose fresh key is `id`. The caller
    /// guarantees `id` does not occur in `x`.
    pub fn forward_with_key(&self, x: &Config, id: u32) -> Result<Vec<Transition>> {
        let steps = self.fwd(x, id, 0)?;
        Ok(self.into_transitions(Direction::Fwd, x, id, steps))
    }

    /// Every forward transition, each carrying its own allocator-chosen key.
    pub fn forward_steps(&self, x: &Config, alloc: &mut KeyAllocator) -> Result<Vec<Transition>> {
        let first = alloc.fresh_for(x);
        let mut out = self.forward_with_key(x, first)?;
        for t in out.iter_mut().skip(1) {
            let id = alloc.fresh_for(x);
            t.target = t.target.rename_key(first, id);
            t.label = Label::new(t.label.action.clone(), id);
        }
        Ok(out)
    }

    /// Every backward transition undoing key `id`.
    pub fn backward_with_key(&self, x: &Config, id: u32) -> Result<Vec<Transition>> {
        let steps = self.bk(x, id, 0, false)?;
        Ok(self.into_transitions(Direction::Bk, x, id, steps))
    }

    pub fn backward_steps(&self, x: &Config) -> Result<Vec<Transition>> {
        let mut out = Vec::new();
        for id in key_ids(x) {
            out.extend(self.backward_with_key(x, id)?);
        }
        Ok(out)
    }

    /// Forward moves (fresh key `fresh`) followed by backward moves.
    pub fn all_steps(&self, x: &Config, fresh: u32) -> Result<Vec<Transition>> {
        let mut out = self.forward_with_key(x, fresh)?;
        out.extend(self.backward_steps(x)?);
        Ok(out)
    }

    // ---------------------------------------------------------------- forward

    fn fwd(&self, x: &Config, k: u32, depth: usize) -> Result<Vec<Step>> {
        match x {
            Config::Std(p) => self.fwd_proc(p, k, depth),
            Config::Keyed(rp, i, c) => Ok(self
                .fwd(c, k, depth)?
                .into_iter()
                .filter(|_| i.id != k)
                .map(|s| s.map("Act", |t| Config::keyed(rp.clone(), *i, t)))
                .collect()),
            Config::TimeoutL { main, alt, key } => Ok(self
                .fwd(main, k, depth)?
                .into_iter()
                .filter(|_| key.id != k)
                .map(|s| s.map("Wait", |t| Config::timeout_l(t, alt.clone(), *key)))
                .collect()),
            Config::TimeoutR { main, alt, key } => Ok(self
                .fwd(alt, k, depth)?
                .into_iter()
                .filter(|_| key.id != k)
                .map(|s| s.map("SWait", |t| Config::timeout_r(main.clone(), t, *key)))
                .collect()),
            Config::Sum(l, r) => self.fwd_sum(l, r, k, depth),
            Config::Par(l, r) => self.fwd_par(l, r, k, depth),
            Config::Restrict(c, a) => self.fwd_restrict(c, a, k, depth),
        }
    }

    fn fwd_proc(&self, p: &Process, k: u32, depth: usize) -> Result<Vec<Step>> {
        let ghost = self.opts.ghost_prefixes;
        Ok(match p {
            Process::Nil => {
                let target = if ghost {
                    Config::keyed(RuntimePrefix::Ghost, Key::time(k), Process::Nil.into())
                } else {
                    Process::Nil.into()
                };
                vec![Step::new(Action::Sigma, "Idle", target)]
            }
            Process::Prefix(Action::Sigma, cont) => vec![Step::new(
                Action::Sigma,
                "RAct",
                Config::keyed(RuntimePrefix::SigmaDone, Key::time(k), (**cont).clone().into()),
            )],
            Process::Prefix(act, cont) => {
                let mut out = vec![Step::new(
                    act.clone(),
                    "RAct",
                    Config::keyed(
                        RuntimePrefix::Act(act.clone()),
                        Key::comm(k),
                        (**cont).clone().into(),
                    ),
                )];
                // tau is urgent: only actions waiting for a partner are patient
                if act.is_visible() {
                    let target = if ghost {
                        Config::keyed(RuntimePrefix::Ghost, Key::time(k), p.clone().into())
                    } else {
                        p.clone().into()
                    };
                    out.push(Step::new(Action::Sigma, "PAct", target));
                }
                out
            }
            Process::Timeout(main, alt) => {
                let mut out: Vec<Step> = self
                    .fwd_proc(main, k, depth)?
                    .into_iter()
                    .filter(|s| !s.action.is_sigma())
                    .map(|s| s.map("Tout", |t| Config::timeout_l(t, (**alt).clone(), Key::comm(k))))
                    .collect();
                if !self.can_tau_proc(main, depth)? {
                    out.push(Step::new(
                        Action::Sigma,
                        "STout",
                        Config::timeout_r((**main).clone(), (**alt).clone().into(), Key::time(k)),
                    ));
                }
                out
            }
            Process::Sum(l, r) => {
                self.fwd_sum(&(**l).clone().into(), &(**r).clone().into(), k, depth)?
            }
            Process::Par(l, r) => {
                self.fwd_par(&(**l).clone().into(), &(**r).clone().into(), k, depth)?
            }
            Process::Restrict(b, a) => self.fwd_restrict(&(**b).clone().into(), a, k, depth)?,
            Process::Const(name) => {
                let body = self.body(name, depth)?;
                self.fwd_proc(body, k, depth + 1)?
                    .into_iter()
                    .map(|s| Step { rule: "Const", ..s })
                    .collect()
            }
        })
    }

    fn check_sum(&self, l: &Config, r: &Config) -> Result<()> {
        if !is_not_acted(l) && !is_not_acted(r) {
            return Err(SemanticsError::BothActed(
                Config::Sum(Box::new(l.clone()), Box::new(r.clone())).to_string(),
            ));
        }
        Ok(())
    }

    fn fwd_sum(&self, l: &Config, r: &Config, k: u32, depth: usize) -> Result<Vec<Step>> {
        self.check_sum(l, r)?;
        let ls = self.fwd(l, k, depth)?;
        let rs = self.fwd(r, k, depth)?;
        let mut out = Vec::new();
        for a in ls.iter().filter(|s| s.action.is_sigma()) {
            for b in rs.iter().filter(|s| s.action.is_sigma()) {
                out.push(Step::new(
                    Action::Sigma,
                    "ChoW",
                    Config::sum(a.target.clone(), b.target.clone()),
                ));
            }
        }
        if is_not_acted(r) && !has_key(r, k) {
            for a in ls.iter().filter(|s| !s.action.is_sigma()) {
                out.push(Step::new(
                    a.action.clone(),
                    "Cho",
                    Config::sum(a.target.clone(), r.clone()),
                ));
            }
        }
        if is_not_acted(l) && !has_key(l, k) {
            for b in rs.iter().filter(|s| !s.action.is_sigma()) {
                out.push(Step::new(
                    b.action.clone(),
                    "Cho",
                    Config::sum(l.clone(), b.target.clone()),
                ));
            }
        }
        Ok(out)
    }

    fn fwd_par(&self, l: &Config, r: &Config, k: u32, depth: usize) -> Result<Vec<Step>> {
        let ls = self.fwd(l, k, depth)?;
        let rs = self.fwd(r, k, depth)?;
        let mut out = Vec::new();
        let any_sigma = ls.iter().any(|s| s.action.is_sigma()) && rs.iter().any(|s| s.action.is_sigma());
        if any_sigma && !self.can_tau_par(l, r, depth)? {
            for a in ls.iter().filter(|s| s.action.is_sigma()) {
                for b in rs.iter().filter(|s| s.action.is_sigma()) {
                    out.push(Step::new(
                        Action::Sigma,
                        "SynW",
                        Config::par(a.target.clone(), b.target.clone()),
                    ));
                }
            }
        }
        if !has_key(r, k) {
            for a in ls.iter().filter(|s| !s.action.is_sigma()) {
                out.push(Step::new(a.action.clone(), "Par", Config::par(a.target.clone(), r.clone())));
            }
        }
        if !has_key(l, k) {
            for b in rs.iter().filter(|s| !s.action.is_sigma()) {
                out.push(Step::new(b.action.clone(), "Par", Config::par(l.clone(), b.target.clone())));
            }
        }
        for a in &ls {
            for b in rs.iter().filter(|b| a.action.is_complement_of(&b.action)) {
                out.push(Step::new(
                    Action::Tau,
                    "Syn",
                    Config::par(a.target.clone(), b.target.clone()),
                ));
            }
        }
        Ok(out)
    }

    fn fwd_restrict(&self, c: &Config, a: &str, k: u32, depth: usize) -> Result<Vec<Step>> {
        Ok(self
            .fwd(c, k, depth)?
            .into_iter()
            .filter(|s| s.action.channel() != Some(a))
            .map(|s| s.map("Hide", |t| Config::restrict(t, a)))
            .collect())
    }

    // --------------------------------------------------------------- backward

    fn bk(&self, x: &Config, k: u32, depth: usize, comm_only: bool) -> Result<Vec<Step>> {
        let mut steps = self.bk_raw(x, k, depth, comm_only)?;
        // Const, read backwards: a move that rebuilds a definition body may
        // equally rebuild the constant itself.
        let mut folded = Vec::new();
        for s in &steps {
            if let Config::Std(p) = &s.target {
                for name in self.env.names_with_body(p) {
                    folded.push(Step::new(s.action.clone(), "Const", Process::constant(name).into()));
                }
            }
        }
        steps.extend(folded);
        Ok(steps)
    }

    /// The rule that may have put a ghost in front of `p`, looking through
    /// folded constants.
    fn ghost_rule(&self, p: &Process, depth: usize) -> Result<Option<&'static str>> {
        Ok(match p {
            Process::Nil => Some("Idle"),
            Process::Prefix(a, _) if a.is_visible() => Some("PAct"),
            Process::Const(n) => self.ghost_rule(self.body(n, depth)?, depth + 1)?,
            _ => None,
        })
    }

    fn bk_raw(&self, x: &Config, k: u32, depth: usize, comm_only: bool) -> Result<Vec<Step>> {
        let ghost = self.opts.ghost_prefixes;
        if ghost && !has_key(x, k) {
            return Ok(Vec::new());
        }
        Ok(match x {
            Config::Std(_) => {
                // Ghost-free variant: a standard term absorbs a time undo.
                if ghost || comm_only {
                    Vec::new()
                } else {
                    vec![Step::new(Action::Sigma, "Patience", x.clone())]
                }
            }
            Config::Keyed(rp, i, c) if i.id == k => match (rp, &**c) {
                (RuntimePrefix::Act(a), Config::Std(p)) => vec![Step::new(
                    a.clone(),
                    "RAct",
                    Process::prefix(a.clone(), p.clone()).into(),
                )],
                (_, _) if comm_only => Vec::new(),
                (RuntimePrefix::SigmaDone, Config::Std(p)) => vec![Step::new(
                    Action::Sigma,
                    "RAct",
                    Process::prefix(Action::Sigma, p.clone()).into(),
                )],
                (RuntimePrefix::Ghost, Config::Std(p)) => match self.ghost_rule(p, depth)? {
                    Some(rule) => vec![Step::new(Action::Sigma, rule, p.clone().into())],
                    None => Vec::new(),
                },
                _ => Vec::new(),
            },
            Config::Keyed(rp, i, c) => self
                .bk(c, k, depth, comm_only)?
                .into_iter()
                .map(|s| s.map("Act", |t| Config::keyed(rp.clone(), *i, t)))
                .collect(),
            Config::TimeoutL { main, alt, key } if key.id == k => self
                .bk(main, k, depth, comm_only)?
                .into_iter()
                .filter(|s| !s.action.is_sigma())
                .filter_map(|s| match s.target {
                    Config::Std(p) => Some(Step::new(
                        s.action,
                        "Tout",
                        Process::timeout(p, alt.clone()).into(),
                    )),
                    _ => None,
                })
                .collect(),
            Config::TimeoutL { main, alt, key } => self
                .bk(main, k, depth, comm_only)?
                .into_iter()
                .map(|s| s.map("Wait", |t| Config::timeout_l(t, alt.clone(), *key)))
                .collect(),
            Config::TimeoutR { main, alt, key } if key.id == k => match &**alt {
                Config::Std(q) if !comm_only && !self.can_tau_proc(main, depth)? => vec![Step::new(
                    Action::Sigma,
                    "STout",
                    Process::timeout(main.clone(), q.clone()).into(),
                )],
                _ => Vec::new(),
            },
            Config::TimeoutR { main, alt, key } => self
                .bk(alt, k, depth, comm_only)?
                .into_iter()
                .map(|s| s.map("SWait", |t| Config::timeout_r(main.clone(), t, *key)))
                .collect(),
            Config::Sum(l, r) => {
                self.check_sum(l, r)?;
                let ls = self.bk(l, k, depth, comm_only)?;
                let rs = self.bk(r, k, depth, comm_only)?;
                let mut out = Vec::new();
                for a in ls.iter().filter(|s| s.action.is_sigma()) {
                    for b in rs.iter().filter(|s| s.action.is_sigma()) {
                        out.push(Step::new(
                            Action::Sigma,
                            "ChoW",
                            Config::sum(a.target.clone(), b.target.clone()),
                        ));
                    }
                }
                if is_not_acted(r) && !has_key(r, k) {
                    for a in ls.iter().filter(|s| !s.action.is_sigma()) {
                        out.push(Step::new(
                            a.action.clone(),
                            "Cho",
                            Config::sum(a.target.clone(), (**r).clone()),
                        ));
                    }
                }
                if is_not_acted(l) && !has_key(l, k) {
                    for b in rs.iter().filter(|s| !s.action.is_sigma()) {
                        out.push(Step::new(
                            b.action.clone(),
                            "Cho",
                            Config::sum((**l).clone(), b.target.clone()),
                        ));
                    }
                }
                out
            }
            Config::Par(l, r) => {
                let ls = self.bk(l, k, depth, comm_only)?;
                let rs = self.bk(r, k, depth, comm_only)?;
                let mut out = Vec::new();
                let any_sigma =
                    ls.iter().any(|s| s.action.is_sigma()) && rs.iter().any(|s| s.action.is_sigma());
                if any_sigma && !self.has_backward_tau(x, depth)? {
                    for a in ls.iter().filter(|s| s.action.is_sigma()) {
                        for b in rs.iter().filter(|s| s.action.is_sigma()) {
                            out.push(Step::new(
                                Action::Sigma,
                                "SynW",
                                Config::par(a.target.clone(), b.target.clone()),
                            ));
                        }
                    }
                }
                if !has_key(r, k) {
                    for a in ls.iter().filter(|s| !s.action.is_sigma()) {
                        out.push(Step::new(
                            a.action.clone(),
                            "Par",
                            Config::par(a.target.clone(), (**r).clone()),
                        ));
                    }
                }
                if !has_key(l, k) {
                    for b in rs.iter().filter(|s| !s.action.is_sigma()) {
                        out.push(Step::new(
                            b.action.clone(),
                            "Par",
                            Config::par((**l).clone(), b.target.clone()),
                        ));
                    }
                }
                for a in &ls {
                    for b in rs.iter().filter(|b| a.action.is_complement_of(&b.action)) {
                        out.push(Step::new(
                            Action::Tau,
                            "Syn",
                            Config::par(a.target.clone(), b.target.clone()),
                        ));
                    }
                }
                out
            }
            Config::Restrict(c, a) => self
                .bk(c, k, depth, comm_only)?
                .into_iter()
                .filter(|s| s.action.channel() != Some(a))
                .map(|s| s.map("Hide", |t| Config::restrict(t, a)))
                .collect(),
        })
    }

    /// The negative premise of backward SynW: can `x` undo some tau?
    fn has_backward_tau(&self, x: &Config, depth: usize) -> Result<bool> {
        for id in key_ids(x) {
            if self
                .bk(x, id, depth, true)?
                .iter()
                .any(|s| s.action == Action::Tau)
            {
                return Ok(true);
            }
        }
        Ok(false)
    }

    // ------------------------------------------------------------ tau / synch

    /// Decides the negative premise `X -/->tau` without enumerating
    /// transitions: at every parallel node the barbs of both sides are
    /// paired with `synch`, and the scan descends through the same active
    /// positions `synch` visits.
    pub fn can_tau(&self, x: &Config) -> Result<bool> {
        self.can_tau_at(x, 0)
    }

    fn can_tau_at(&self, x: &Config, depth: usize) -> Result<bool> {
        match x {
            Config::Std(p) => self.can_tau_proc(p, depth),
            Config::Keyed(_, _, c) | Config::Restrict(c, _) => self.can_tau_at(c, depth),
            Config::TimeoutL { main, .. } => self.can_tau_at(main, depth),
            Config::TimeoutR { alt, .. } => self.can_tau_at(alt, depth),
            Config::Sum(l, r) => {
                let (nl, nr) = (is_not_acted(l), is_not_acted(r));
                Ok(match (nl, nr) {
                    (true, true) => self.can_tau_at(l, depth)? || self.can_tau_at(r, depth)?,
                    (false, _) => self.can_tau_at(l, depth)?,
                    (true, false) => self.can_tau_at(r, depth)?,
                })
            }
            Config::Par(l, r) => self.can_tau_par(l, r, depth),
        }
    }

    fn can_tau_par(&self, l: &Config, r: &Config, depth: usize) -> Result<bool> {
        if self.can_tau_at(l, depth)? || self.can_tau_at(r, depth)? {
            return Ok(true);
        }
        let joint = oplus(&self.synch_at(l, depth)?, &self.synch_at(r, depth)?);
        Ok(has_sync_pair(&joint))
    }

    fn can_tau_proc(&self, p: &Process, depth: usize) -> Result<bool> {
        match p {
            Process::Nil => Ok(false),
            Process::Prefix(a, _) => Ok(*a == Action::Tau),
            Process::Timeout(main, _) => self.can_tau_proc(main, depth),
            Process::Sum(l, r) => Ok(self.can_tau_proc(l, depth)? || self.can_tau_proc(r, depth)?),
            Process::Par(l, r) => {
                self.can_tau_par(&(**l).clone().into(), &(**r).clone().into(), depth)
            }
            Process::Restrict(b, _) => self.can_tau_proc(b, depth),
            Process::Const(name) => {
                let body = self.body(name, depth)?;
                self.can_tau_proc(body, depth + 1)
            }
        }
    }

    /// The set of co-enabled barb combinations of `x`.
    pub fn synch(&self, x: &Config) -> Result<SynchSet> {
        self.synch_at(x, 0)
    }

    fn synch_at(&self, x: &Config, depth: usize) -> Result<SynchSet> {
        match x {
            Config::Std(p) => self.synch_proc(p, depth),
            Config::Keyed(_, _, c) => self.synch_at(c, depth),
            Config::TimeoutL { main, .. } => self.synch_at(main, depth),
            Config::TimeoutR { alt, .. } => self.synch_at(alt, depth),
            Config::Par(l, r) => Ok(oplus(&self.synch_at(l, depth)?, &self.synch_at(r, depth)?)),
            Config::Restrict(c, a) => Ok(super::synch::hide(self.synch_at(c, depth)?, a)),
            Config::Sum(l, r) => {
                let (nl, nr) = (is_not_acted(l), is_not_acted(r));
                Ok(match (nl, nr) {
                    (true, true) => {
                        let mut s = self.synch_at(l, depth)?;
                        s.extend(self.synch_at(r, depth)?);
                        s
                    }
                    (false, _) => self.synch_at(l, depth)?,
                    (true, false) => self.synch_at(r, depth)?,
                })
            }
        }
    }

    fn synch_proc(&self, p: &Process, depth: usize) -> Result<SynchSet> {
        Ok(match p {
            Process::Nil | Process::Prefix(Action::Sigma, _) => SynchSet::new(),
            Process::Prefix(a, _) => SynchSet::from([[a.clone()].into()]),
            Process::Timeout(main, _) => self.synch_proc(main, depth)?,
            Process::Sum(l, r) => {
                let mut s = self.synch_proc(l, depth)?;
                s.extend(self.synch_proc(r, depth)?);
                s
            }
            Process::Par(l, r) => oplus(&self.synch_proc(l, depth)?, &self.synch_proc(r, depth)?),
            Process::Restrict(b, a) => super::synch::hide(self.synch_proc(b, depth)?, a),
            Process::Const(name) => {
                let body = self.body(name, depth)?;
                self.synch_proc(body, depth + 1)?
            }
        })
    }
}

