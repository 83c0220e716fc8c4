use super::key_order;
use crate::semantics::{Direction, Transition};
use crate::syntax::{Config, RuntimePrefix};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConflictError {
    #[error("fcc is undefined on `{0}` and `{1}`")]
    ShapeMismatch(String, String),
    #[error("transitions are not coinitial")]
    NotCoinitial,
}

/// Forward communication conflict between the targets of two forward
/// communication transitions with distinct keys from a common source.
///
/// Disjunctions short-circuit left to right. A component that one of the
/// two transitions left untouched contributes `false`.
pub fn fcc(y: &Config, z: &Config) -> Result<bool, ConflictError> {
    if y == z {
        return Ok(false);
    }
    match (y, z) {
        (Config::Std(_), _) | (_, Config::Std(_)) => Ok(false),
        (Config::Keyed(RuntimePrefix::Act(a), i, y1), Config::Keyed(RuntimePrefix::Act(b), j, z1))
            if a == b =>
        {
            if i != j {
                Ok(true)
            } else {
                fcc(y1, z1)
            }
        }
        (Config::Keyed(p, i, y1), Config::Keyed(q, j, z1)) if p == q && i == j => fcc(y1, z1),
        (Config::Par(y1, y2), Config::Par(z1, z2)) => Ok(fcc(y1, z1)? || fcc(y2, z2)?),
        (Config::Sum(y1, y2), Config::Sum(z1, z2)) => {
            Ok((y1 != z1 && y2 != z2) || fcc(y1, z1)? || fcc(y2, z2)?)
        }
        (Config::Restrict(y1, a), Config::Restrict(z1, b)) if a == b => fcc(y1, z1),
        // Both moves fired the timeout and each decorated it with its own
        // key, so they cannot be reordered onto a common target.
        (
            Config::TimeoutL { main: y1, key: i, .. },
            Config::TimeoutL { main: z1, key: j, .. },
        ) => Ok(i != j || fcc(y1, z1)?),
        (
            Config::TimeoutR { alt: y2, key: i, .. },
            Config::TimeoutR { alt: z2, key: j, .. },
        ) if i == j => fcc(y2, z2),
        _ => Err(ConflictError::ShapeMismatch(y.to_string(), z.to_string())),
    }
}

/// Conflict between two coinitial transitions.
pub fn conflicting(t: &Transition, s: &Transition) -> Result<bool, ConflictError> {
    if t.source != s.source {
        return Err(ConflictError::NotCoinitial);
    }
    use Direction::*;
    match (t.direction, s.direction) {
        (Fwd, Fwd) => {
            if t.is_sigma() != s.is_sigma() || t.label.key.id == s.label.key.id {
                return Ok(true);
            }
            if t.is_sigma() {
                // Forward ticks are unique up to the fresh key.
                return Ok(true);
            }
            fcc(&t.target, &s.target)
        }
        (Fwd, Bk) => Ok(key_order(&t.target).leq(s.label.key.id, t.label.key.id)),
        (Bk, Fwd) => Ok(key_order(&s.target).leq(t.label.key.id, s.label.key.id)),
        (Bk, Bk) => Ok(false),
    }
}

pub fn independent(t: &Transition, s: &Transition) -> Result<bool, ConflictError> {
    conflicting(t, s).map(|c| !c)
}
