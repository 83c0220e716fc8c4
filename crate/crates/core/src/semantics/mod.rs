//! Forward and backward labelled transition systems.

mod canon;
mod engine;
mod synch;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{Action, Config, DefinitionEnv, Key};

pub use canon::{canonical_renaming, canonicalize_keys};
pub use engine::Semantics;
pub use synch::{has_sync_pair, SynchSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Fwd,
    Bk,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Direction::Fwd => Direction::Bk,
            Direction::Bk => Direction::Fwd,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Fwd => "fwd",
            Direction::Bk => "bk",
        })
    }
}

/// An action paired with the key of its occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub action: Action,
    pub key: Key,
}

impl Label {
    pub fn new(action: Action, id: u32) -> Self {
        let key = Key {
            id,
            kind: action.key_kind(),
        };
        Label { action, key }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.action, self.key.id)
    }
}

#[derive(Clone, Debug)]
pub struct Transition {
    pub direction: Direction,
    pub label: Label,
    pub source: Config,
    pub target: Config,
    /// Outermost rule of the derivation.
    pub rule: &'static str,
}

impl PartialEq for Transition {
    fn eq(&self, other: &Self) -> bool {
        self.direction == other.direction
            && self.label == other.label
            && self.source == other.source
            && self.target == other.target
    }
}

impl Eq for Transition {}

impl Transition {
    /// The same step taken in the opposite direction.
    pub fn reverse(&self) -> Transition {
        Transition {
            direction: self.direction.reverse(),
            label: self.label.clone(),
            source: self.target.clone(),
            target: self.source.clone(),
            rule: self.rule,
        }
    }

    pub fn is_forward(&self) -> bool {
        self.direction == Direction::Fwd
    }

    pub fn is_sigma(&self) -> bool {
        self.label.action.is_sigma()
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.direction {
            Direction::Fwd => "-->",
            Direction::Bk => "~~>",
        };
        write!(f, "{} {arrow}{} {} ({})", self.source, self.label, self.target, self.rule)
    }
}

/// Hands out fresh key ids. Monotonic; never returns an id present in the
/// configuration it is asked about.
#[derive(Clone, Debug, Default)]
pub struct KeyAllocator {
    next: u32,
}

impl KeyAllocator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn peek(&self) -> u32 {
        self.next
    }

    pub fn fresh_for(&mut self, x: &Config) -> u32 {
        if let Some(m) = x.max_key_id() {
            self.next = self.next.max(m + 1);
        }
        let k = self.next;
        self.next += 1;
        k
    }

    /// Makes sure later ids are above `id`.
    pub fn observe(&mut self, id: u32) {
        self.next = self.next.max(id + 1);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Record patient ticks with `s_` prefixes. Turning this off yields the
    /// ghost-free variant in which patience and idling are self-loops; it
    /// exists to reproduce the failures that motivate ghost prefixes.
    pub ghost_prefixes: bool,
    /// Maximum nested constant unfoldings within one derivation.
    pub unfold_budget: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            ghost_prefixes: true,
            unfold_budget: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("unbound constant `{0}`")]
    Unbound(String),
    #[error("constant unfolding exceeded the budget of {0}")]
    UnfoldBudget(usize),
    #[error("both branches of `{0}` are acted")]
    BothActed(String),
}

/// Convenience wrapper for a one-off forward enumeration.
pub fn forward_steps(
    x: &Config,
    env: &DefinitionEnv,
    alloc: &mut KeyAllocator,
) -> Result<Vec<Transition>, SemanticsError> {
    Semantics::new(env).forward_steps(x, alloc)
}

pub fn backward_steps(x: &Config, env: &DefinitionEnv) -> Result<Vec<Transition>, SemanticsError> {
    Semantics::new(env).backward_steps(x)
}

pub fn can_tau(x: &Config, env: &DefinitionEnv) -> Result<bool, SemanticsError> {
    Semantics::new(env).can_tau(x)
}

pub fn synch(x: &Config, env: &DefinitionEnv) -> Result<SynchSet, SemanticsError> {
    Semantics::new(env).synch(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_configuration, parse_program};

    fn prog(s: &str) -> (DefinitionEnv, Config) {
        let (env, p) = parse_program(s).unwrap();
        (env, p.into())
    }

    fn conf(s: &str) -> Config {
        parse_configuration(s, &DefinitionEnv::default()).unwrap()
    }

    fn fwd(s: &str, k: u32) -> Vec<(String, String)> {
        let (env, x) = prog(s);
        let mut out: Vec<_> = Semantics::new(&env)
            .forward_with_key(&x, k)
            .unwrap()
            .into_iter()
            .map(|t| (t.label.to_string(), t.target.to_string()))
            .collect();
        out.sort();
        out
    }

    fn bk(s: &str) -> Vec<(String, String)> {
        let env = DefinitionEnv::default();
        let mut out: Vec<_> = Semantics::new(&env)
            .backward_steps(&conf(s))
            .unwrap()
            .into_iter()
            .map(|t| (t.label.to_string(), t.target.to_string()))
            .collect();
        out.sort();
        out
    }

    fn pairs(xs: &[(&str, &str)]) -> Vec<(String, String)> {
        let mut v: Vec<_> = xs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        v.sort();
        v
    }

    #[test]
    fn choice_with_delay() {
        assert_eq!(
            fwd("a.0 + s.0", 1),
            pairs(&[("a[1]", "a[1].0 + s.0"), ("s[1]", "s_[1].a.0 + s[1].0")])
        );
    }

    #[test]
    fn patient_prefix() {
        assert_eq!(fwd("a.0", 3), pairs(&[("a[3]", "a[3].0"), ("s[3]", "s_[3].a.0")]));
    }

    #[test]
    fn nil_idles() {
        assert_eq!(fwd("0", 0), pairs(&[("s[0]", "s_[0].0")]));
    }

    #[test]
    fn tau_is_urgent() {
        assert_eq!(fwd("tau.0", 0), pairs(&[("tau[0]", "tau[0].0")]));
    }

    #[test]
    fn timeout_prefers_synchronisation() {
        let steps = fwd("[(a | 'a)](b)", 4);
        assert!(steps.contains(&("tau[4]".into(), "[a[4].0 | 'a[4].0](b.0)@L[4]".into())));
        assert!(steps.iter().all(|(l, _)| !l.starts_with("s[")));
        assert_eq!(steps.iter().filter(|(l, _)| l.starts_with("tau")).count(), 1);
    }

    #[test]
    fn timeout_fires_when_main_is_stuck() {
        assert_eq!(
            fwd("[b.0](c.0)", 2),
            pairs(&[("b[2]", "[b[2].0](c.0)@L[2]"), ("s[2]", "[b.0](c.0)@R[2]")])
        );
    }

    #[test]
    fn restriction_blocks_lone_actions_but_not_tau() {
        assert_eq!(
            fwd("(a | 'a) \\ a", 0),
            pairs(&[("tau[0]", "(a[0].0 | 'a[0].0) \\ a")])
        );
    }

    #[test]
    fn constants_unfold() {
        assert_eq!(
            fwd("A = a.A; A", 5),
            pairs(&[("a[5]", "a[5].A"), ("s[5]", "s_[5].A")])
        );
    }

    #[test]
    fn ghost_undo() {
        assert_eq!(bk("s_[1].a.0"), pairs(&[("s[1]", "a.0")]));
    }

    #[test]
    fn sync_undo_needs_both_sides() {
        assert_eq!(bk("a[1].0 | 'a[1].0"), pairs(&[("tau[1]", "a.0 | 'a.0")]));
    }

    #[test]
    fn standard_has_no_past() {
        assert!(bk("a.0 | b.0").is_empty());
    }

    #[test]
    fn constant_refolds_backwards() {
        let (env, _) = prog("A = a.A; A");
        let x = parse_configuration("a[5].A", &env).unwrap();
        let got: Vec<_> = Semantics::new(&env)
            .backward_steps(&x)
            .unwrap()
            .into_iter()
            .map(|t| t.target.to_string())
            .collect();
        // the unfolded target is folded back into the constant
        assert_eq!(got, vec!["A".to_string()]);
    }

    #[test]
    fn appendix_synch_examples() {
        let env = DefinitionEnv::default();
        let sem = Semantics::new(&env);
        let show = |s: &str| {
            sem.synch(&conf(s))
                .unwrap()
                .iter()
                .map(|m| m.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect::<Vec<_>>()
        };
        assert_eq!(show("a.0 + 'a.0"), vec!["'a", "a"]);
        assert_eq!(show("(a.0 + 'a.0) | a.0"), vec!["a", "a,'a"]);
        assert_eq!(show("(b.0 + 'a.0) | a.0 | 'b.0"), vec!["a,'a,'b", "a,b,'b"]);
        assert!(sem.can_tau(&conf("(b.0 + 'a.0) | a.0 | 'b.0")).unwrap());
        assert!(!sem.can_tau(&conf("s.(a.0 | 'a.0)")).unwrap());
    }

    #[test]
    fn both_acted_sum_is_rejected() {
        let env = DefinitionEnv::default();
        let err = Semantics::new(&env).backward_steps(&conf("a[1].0 + b[2].0")).unwrap_err();
        assert!(matches!(err, SemanticsError::BothActed(_)));
    }

    #[test]
    fn allocator_gives_distinct_keys() {
        let (env, x) = prog("a.0 | b.0");
        let mut alloc = KeyAllocator::new();
        let ts = forward_steps(&x, &env, &mut alloc).unwrap();
        let keys: std::collections::BTreeSet<u32> = ts.iter().map(|t| t.label.key.id).collect();
        assert_eq!(keys.len(), ts.len());
    }
}
