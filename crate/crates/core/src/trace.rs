//! Replayable traces: `{"program", "defs", "steps": [{dir, act, key, rule, target}]}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::has_key;
use crate::semantics::{Direction, SemanticsError, Semantics, Transition};
use crate::syntax::{parse_program, Action, Config, DefinitionEnv, Process, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub dir: Direction,
    pub act: String,
    pub key: u32,
    pub rule: String,
    pub target: String,
}

impl From<&Transition> for TraceStep {
    fn from(t: &Transition) -> Self {
        TraceStep {
            dir: t.direction,
            act: t.label.action.to_string(),
            key: t.label.key.id,
            rule: t.rule.to_string(),
            target: t.target.to_string(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub program: String,
    pub defs: BTreeMap<String, String>,
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, thiserror::Error)]
pub enum TraceError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("unknown action `{0}`")]
    Action(String),
    #[error("step {index}: no {dir} transition {act}[{key}] reaching `{target}`")]
    Unmatched {
        index: usize,
        dir: Direction,
        act: String,
        key: u32,
        target: String,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Reads `a`, `'a`, `tau` or `s`.
pub fn parse_action(s: &str) -> Option<Action> {
    match s {
        "tau" => Some(Action::Tau),
        "s" => Some(Action::Sigma),
        _ => {
            let (co, name) = match s.strip_prefix('\'') {
                Some(n) => (true, n),
                None => (false, s),
            };
            let mut cs = name.chars();
            let ok = cs.next().is_some_and(|c| c.is_ascii_lowercase())
                && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
                && !matches!(name, "s" | "s_" | "tau");
            ok.then(|| if co { Action::coname(name) } else { Action::name(name) })
        }
    }
}

impl Trace {
    pub fn new(env: &DefinitionEnv, root: &Process) -> Self {
        Trace {
            program: root.to_string(),
            defs: env.iter().map(|(n, b)| (n.clone(), b.to_string())).collect(),
            steps: Vec::new(),
        }
    }

    pub fn from_path(env: &DefinitionEnv, root: &Process, path: &[Transition]) -> Self {
        let mut t = Trace::new(env, root);
        t.steps = path.iter().map(TraceStep::from).collect();
        t
    }

    pub fn push(&mut self, t: &Transition) {
        self.steps.push(t.into());
    }

    /// The program text with its definitions, parseable again.
    pub fn source(&self) -> String {
        let mut s = String::new();
        for (n, b) in &self.defs {
            s.push_str(&format!("{n} = {b};\n"));
        }
        s.push_str(&self.program);
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, TraceError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Re-derives every step from the semantics and returns the final
    /// configuration together with the derived path.
    pub fn replay(&self) -> Result<(DefinitionEnv, Config, Vec<Transition>), TraceError> {
        let (env, root) = parse_program(&self.source())?;
        let sem = Semantics::new(&env);
        let mut cur = Config::Std(env.fold(&root));
        let mut path = Vec::new();
        for (index, st) in self.steps.iter().enumerate() {
            let act = parse_action(&st.act).ok_or_else(|| TraceError::Action(st.act.clone()))?;
            let cands = match st.dir {
                // a forward key must be fresh
                Direction::Fwd if has_key(&cur, st.key) => Vec::new(),
                Direction::Fwd => sem.forward_with_key(&cur, st.key)?,
                Direction::Bk => sem.backward_with_key(&cur, st.key)?,
            };
            let t = cands
                .into_iter()
                .find(|t| t.label.action == act && t.target.to_string() == st.target)
                .ok_or_else(|| TraceError::Unmatched {
                    index,
                    dir: st.dir,
                    act: st.act.clone(),
                    key: st.key,
                    target: st.target.clone(),
                })?;
            cur = t.target.clone();
            path.push(t);
        }
        Ok((env, cur, path))
    }
}
