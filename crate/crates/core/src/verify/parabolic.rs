use super::path::{Path, Stepper};
use crate::analysis::independent;
use crate::semantics::{Direction, SemanticsError, Transition};

#[derive(Debug, thiserror::Error)]
pub enum PlError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("path is not composable")]
    Malformed,
    #[error("step {index}: `{fwd}` then `{bk}` neither cancel nor commute")]
    Stuck { index: usize, fwd: String, bk: String },
}

/// No backward move follows a forward move.
pub fn is_parabolic(p: &Path) -> bool {
    p.steps
        .windows(2)
        .all(|w| !(w[0].is_forward() && !w[1].is_forward()))
}

fn cancels(a: &Transition, b: &Transition) -> bool {
    a.direction != b.direction && a.label == b.label && b.target == a.source
}

/// `a` then `b` rewritten as `b'` then `a'` through an independent
/// coinitial pair, if one exists.
pub(crate) fn swap(
    st: &Stepper<'_, '_>,
    a: &Transition,
    b: &Transition,
) -> Result<Option<(Transition, Transition)>, SemanticsError> {
    for s in st.with_key(&a.source, b.direction, b.label.key.id)? {
        if s.label != b.label || !independent(a, &s).unwrap_or(false) {
            continue;
        }
        for t in st.with_key(&s.target, a.direction, a.label.key.id)? {
            if t.label == a.label && t.target == b.target {
                return Ok(Some((s, t)));
            }
        }
    }
    Ok(None)
}

/// Rewrites a path into backward moves followed by forward moves by
/// cancelling do/undo pairs and commuting forward-backward adjacencies.
pub fn parabolic_normalize(st: &Stepper<'_, '_>, path: &Path) -> Result<Path, PlError> {
    if !path.is_composable() {
        return Err(PlError::Malformed);
    }
    let mut steps = path.steps.clone();
    loop {
        if let Some(n) = (0..steps.len().saturating_sub(1)).find(|&n| cancels(&steps[n], &steps[n + 1])) {
            steps.drain(n..n + 2);
            continue;
        }
        let Some(n) = (0..steps.len().saturating_sub(1))
            .find(|&n| steps[n].direction == Direction::Fwd && steps[n + 1].direction == Direction::Bk)
        else {
            break;
        };
        match swap(st, &steps[n], &steps[n + 1])? {
            Some((s, t)) => {
                steps[n] = s;
                steps[n + 1] = t;
            }
            None => {
                return Err(PlError::Stuck {
                    index: n,
                    fwd: steps[n].to_string(),
                    bk: steps[n + 1].to_string(),
                })
            }
        }
    }
    Ok(Path {
        source: path.source.clone(),
        steps,
    })
}
