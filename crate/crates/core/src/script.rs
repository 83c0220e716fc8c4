//! Step scripts such as `a[1];s[2];~s[2]` and selection of a single
//! enabled transition by direction, action and key.

use crate::analysis::has_key;
use crate::semantics::{Direction, SemanticsError, Semantics, Transition};
use crate::syntax::{Action, Config};
use crate::trace::parse_action;

/// One requested move. A missing key means "the only one enabled".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub dir: Direction,
    pub act: Action,
    pub key: Option<u32>,
    /// Printed target, to pick between moves sharing label and key.
    pub target: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum StepError {
    #[error("bad script item `{0}`")]
    Script(String),
    #[error("no enabled {0}")]
    NoMatch(String),
    #[error("{0} is ambiguous: {1}")]
    Ambiguous(String, String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

impl Move {
    fn describe(&self) -> String {
        let key = self.key.map(|k| format!("[{k}]")).unwrap_or_default();
        format!("{} {}{key}", self.dir, self.act)
    }
}

/// Parses `item;item;...` where an item is `act`, `act[k]`, `~act` or
/// `~act[k]`. Blank items are skipped.
pub fn parse_script(text: &str) -> Result<Vec<Move>, StepError> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_move)
        .collect()
}

fn parse_move(item: &str) -> Result<Move, StepError> {
    let bad = || StepError::Script(item.to_string());
    let (dir, rest) = match item.strip_prefix('~') {
        Some(r) => (Direction::Bk, r.trim()),
        None => (Direction::Fwd, item),
    };
    let (name, key) = match rest.split_once('[') {
        Some((n, k)) => {
            let k = k.strip_suffix(']').ok_or_else(bad)?;
            (n, Some(k.trim().parse().map_err(|_| bad())?))
        }
        None => (rest, None),
    };
    let act = parse_action(name.trim()).ok_or_else(bad)?;
    Ok(Move {
        dir,
        act,
        key,
        target: None,
    })
}

/// The unique transition of `x` matching `mv`. Forward moves without a
/// key use `fresh`.
pub fn select(sem: &Semantics<'_>, x: &Config, mv: &Move, fresh: u32) -> Result<Transition, StepError> {
    let cands = match (mv.dir, mv.key) {
        (Direction::Fwd, Some(k)) if has_key(x, k) => Vec::new(),
        (Direction::Fwd, k) => sem.forward_with_key(x, k.unwrap_or(fresh))?,
        (Direction::Bk, Some(k)) => sem.backward_with_key(x, k)?,
        (Direction::Bk, None) => sem.backward_steps(x)?,
    };
    let mut hits: Vec<Transition> = cands
        .into_iter()
        .filter(|t| t.label.action == mv.act)
        .filter(|t| mv.target.as_ref().is_none_or(|s| *s == t.target.to_string()))
        .collect();
    match hits.len() {
        0 => Err(StepError::NoMatch(mv.describe())),
        1 => Ok(hits.remove(0)),
        _ => Err(StepError::Ambiguous(
            mv.describe(),
            hits.iter()
                .map(|t| format!("{} -> {}", t.label, t.target))
                .collect::<Vec<_>>()
                .join(", "),
        )),
    }
}

/// Runs a whole script from `x`, returning the transitions taken.
pub fn run_script(sem: &Semantics<'_>, x: &Config, moves: &[Move]) -> Result<Vec<Transition>, StepError> {
    let mut cur = x.clone();
    let mut next = cur.max_key_id().map_or(0, |m| m + 1);
    let mut out = Vec::new();
    for mv in moves {
        let t = select(sem, &cur, mv, next)?;
        if let Some(k) = mv.key {
            next = next.max(k + 1);
        }
        if t.is_forward() {
            next = next.max(t.label.key.id + 1);
        }
        cur = t.target.clone();
        out.push(t);
    }
    Ok(out)
}
