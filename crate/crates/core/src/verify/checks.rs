use super::explore::{fresh_key, StateSpace};
use super::path::Stepper;
use super::Report;
use crate::analysis::{independent, key_order, keys_of};
use crate::semantics::{Direction, SemanticsError, Semantics, Transition};
use crate::syntax::{Action, KeyKind};

/// Every explored edge is undone (or redone) by a single opposite move with
/// the same label that lands exactly on the source.
pub fn check_loop(sem: &Semantics<'_>, space: &StateSpace) -> Result<Report, SemanticsError> {
    let mut rep = Report::new("loop", space);
    let st = Stepper::new(sem);
    for t in space.edges() {
        let back = st.with_key(&t.target, t.direction.reverse(), t.label.key.id)?;
        if !back.iter().any(|b| b.label == t.label && b.target == t.source) {
            rep.flag(&t.source, format!("{t} has no reverse"));
        }
    }
    Ok(rep)
}

fn closes(st: &Stepper<'_, '_>, t: &Transition, s: &Transition) -> Result<bool, SemanticsError> {
    let from_t = st.with_key(&t.target, s.direction, s.label.key.id)?;
    let from_s = st.with_key(&s.target, t.direction, t.label.key.id)?;
    Ok(from_t.iter().filter(|a| a.label == s.label).any(|a| {
        from_s
            .iter()
            .any(|b| b.label == t.label && b.target == a.target)
    }))
}

/// Every coinitial independent pair closes a diamond with identical target.
pub fn check_square(sem: &Semantics<'_>, space: &StateSpace) -> Result<Report, SemanticsError> {
    let mut rep = Report::new("square", space);
    let st = Stepper::new(sem);
    for (x, _) in space.expanded() {
        let f1 = fresh_key(x);
        // forward pairs need distinct fresh keys
        let a = sem.forward_with_key(x, f1)?;
        let b = sem.forward_with_key(x, f1 + 1)?;
        let k = sem.backward_steps(x)?;
        let mut pairs: Vec<(&Transition, &Transition)> = Vec::new();
        for (n, t) in a.iter().enumerate() {
            pairs.extend(b.iter().skip(n + 1).map(|s| (t, s)));
            pairs.extend(k.iter().map(|s| (t, s)));
        }
        for (n, t) in k.iter().enumerate() {
            pairs.extend(k.iter().skip(n + 1).map(|s| (t, s)));
        }
        for (t, s) in pairs {
            let ind = match independent(t, s) {
                Ok(v) => v,
                Err(e) => {
                    rep.flag(x, format!("{t} vs {s}: {e}"));
                    continue;
                }
            };
            if ind && !closes(&st, t, s)? {
                rep.flag(x, format!("independent {t} and {s} do not commute"));
            }
        }
        st.clear();
    }
    Ok(rep)
}

/// Backward moves never conflict, and no state can undo both a tick and a
/// communication.
pub fn check_bti(sem: &Semantics<'_>, space: &StateSpace) -> Result<Report, SemanticsError> {
    let mut rep = Report::new("bti", space);
    for (x, _) in space.expanded() {
        let k = sem.backward_steps(x)?;
        for (n, t) in k.iter().enumerate() {
            for s in &k[n + 1..] {
                if !independent(t, s).unwrap_or(false) {
                    rep.flag(x, format!("backward {t} and {s} conflict"));
                }
            }
        }
        if k.iter().any(|t| t.is_sigma()) && k.iter().any(|t| !t.is_sigma()) {
            rep.flag(x, "undoes both a tick and a communication");
        }
    }
    Ok(rep)
}

/// Backward moves drop exactly one key, forward moves add exactly one.
pub fn check_wf(space: &StateSpace) -> Report {
    let mut rep = Report::new("wf", space);
    for t in space.edges() {
        let before = keys_of(&t.source).len();
        let after = keys_of(&t.target).len();
        let ok = match t.direction {
            Direction::Bk => after + 1 == before,
            Direction::Fwd => after == before + 1,
        };
        if !ok {
            rep.flag(&t.source, format!("{t} changes key count {before} -> {after}"));
        }
    }
    rep
}

/// Time keys are totally ordered in every state.
pub fn check_time_total_order(space: &StateSpace) -> Report {
    let mut rep = Report::new("order", space);
    for x in &space.states {
        if let Some((i, j)) = key_order(x).incomparable(KeyKind::Time) {
            rep.flag(x, format!("time keys {i} and {j} are incomparable"));
        }
    }
    rep
}

/// The barb-based tau test agrees with enumerating forward moves.
pub fn check_tau_oracle(sem: &Semantics<'_>, space: &StateSpace) -> Result<Report, SemanticsError> {
    let mut rep = Report::new("tau-oracle", space);
    for x in &space.states {
        let fast = sem.can_tau(x)?;
        let slow = sem
            .forward_with_key(x, fresh_key(x))?
            .iter()
            .any(|t| t.label.action == Action::Tau);
        if fast != slow {
            rep.flag(x, format!("can_tau says {fast}, enumeration says {slow}"));
        }
    }
    Ok(rep)
}
