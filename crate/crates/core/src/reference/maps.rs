use crate::analysis::is_not_acted;
use crate::semantics::SemanticsError;
use crate::syntax::{Action, Config, DefinitionEnv, Process, RuntimePrefix};

/// Erases history. A choice loses a branch only once the other branch has
/// communicated; a decorated timeout keeps the branch it selected.
pub fn forget_history(x: &Config) -> Result<Process, SemanticsError> {
    Ok(match x {
        Config::Std(p) => p.clone(),
        Config::Keyed(_, _, c) => forget_history(c)?,
        Config::TimeoutL { main, .. } => forget_history(main)?,
        Config::TimeoutR { alt, .. } => forget_history(alt)?,
        Config::Par(l, r) => Process::par(forget_history(l)?, forget_history(r)?),
        Config::Restrict(c, a) => Process::restrict(forget_history(c)?, a.clone()),
        Config::Sum(l, r) => match (is_not_acted(l), is_not_acted(r)) {
            (false, true) => forget_history(l)?,
            (true, false) => forget_history(r)?,
            (true, true) => Process::sum(forget_history(l)?, forget_history(r)?),
            (false, false) => return Err(SemanticsError::BothActed(x.to_string())),
        },
    })
}

/// Erases time: ticks and ghosts vanish, every timeout becomes a choice.
/// Constants are kept by name and must be read against
/// [`forget_time_env`].
pub fn forget_time(x: &Config) -> Config {
    match x {
        Config::Std(p) => Config::Std(forget_time_process(p)),
        Config::Keyed(RuntimePrefix::Act(a), k, c) => {
            Config::keyed(RuntimePrefix::Act(a.clone()), *k, forget_time(c))
        }
        Config::Keyed(_, _, c) => forget_time(c),
        Config::TimeoutL { main, alt, .. } => {
            Config::sum(forget_time(main), Config::Std(forget_time_process(alt)))
        }
        Config::TimeoutR { main, alt, .. } => {
            Config::sum(Config::Std(forget_time_process(main)), forget_time(alt))
        }
        Config::Sum(l, r) => Config::sum(forget_time(l), forget_time(r)),
        Config::Par(l, r) => Config::par(forget_time(l), forget_time(r)),
        Config::Restrict(c, a) => Config::restrict(forget_time(c), a.clone()),
    }
}

pub fn forget_time_process(p: &Process) -> Process {
    match p {
        Process::Nil | Process::Const(_) => p.clone(),
        Process::Prefix(Action::Sigma, cont) => forget_time_process(cont),
        Process::Prefix(a, cont) => Process::prefix(a.clone(), forget_time_process(cont)),
        Process::Timeout(l, r) | Process::Sum(l, r) => {
            Process::sum(forget_time_process(l), forget_time_process(r))
        }
        Process::Par(l, r) => Process::par(forget_time_process(l), forget_time_process(r)),
        Process::Restrict(b, a) => Process::restrict(forget_time_process(b), a.clone()),
    }
}

/// The definitions with every body mapped through the time eraser.
///
/// Bodies are not re-checked for guardedness: erasing `s.A` leaves a bare
/// `A`, which the untimed engine unfolds with a depth bound.
pub fn forget_time_env(env: &DefinitionEnv) -> DefinitionEnv {
    DefinitionEnv::from_unchecked(env.iter().map(|(n, b)| (n.clone(), forget_time_process(b))))
}
