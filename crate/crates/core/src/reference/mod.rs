//! Reference engines for the untimed reversible calculus and the timed
//! forward calculus, the two forgetful maps onto them, and bounded
//! behavioural checks relating a configuration to its images.

mod bisim;
mod ccsk;
mod maps;
mod tpl;

pub use bisim::{check_bf_simulation, check_timed_bisimulation, Budget, Verdict};
pub use ccsk::Ccsk;
pub use maps::{forget_history, forget_time, forget_time_env, forget_time_process};
pub use tpl::Tpl;
