//! Bounded state-space exploration and checks of the reversibility
//! metatheory over the explored spaces.

mod causal;
mod checks;
mod explore;
mod parabolic;
mod path;

use serde::Serialize;

pub use causal::{check_causal_equivalence, CcBudget, CcVerdict};
pub use checks::{
    check_bti, check_loop, check_square, check_time_total_order, check_wf, check_tau_oracle,
};
pub use explore::{explore, fresh_key, Bounds, StateSpace};
pub use parabolic::{is_parabolic, parabolic_normalize, PlError};
pub use path::{enumerate_paths, random_path, Path, Stepper};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub state: String,
    pub detail: String,
}

/// `{check, states, edges, violations, truncated, seed}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub states: usize,
    pub edges: usize,
    pub violations: Vec<Violation>,
    pub truncated: bool,
    pub seed: Option<u64>,
    /// Checks that can give up (causal equivalence) count how often they did.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inconclusive: Option<usize>,
}

impl Report {
    pub fn new(check: &str, space: &StateSpace) -> Self {
        Report {
            check: check.to_string(),
            states: space.len(),
            edges: space.edge_count(),
            violations: Vec::new(),
            truncated: space.truncated,
            seed: None,
            inconclusive: None,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.inconclusive.unwrap_or(0) == 0
    }

    pub fn flag(&mut self, state: impl ToString, detail: impl Into<String>) {
        self.violations.push(Violation {
            state: state.to_string(),
            detail: detail.into(),
        });
    }
}
