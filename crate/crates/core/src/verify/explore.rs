use std::collections::{HashMap, VecDeque};

use crate::semantics::{canonicalize_keys, SemanticsError, Semantics, Transition};
use crate::syntax::{Config, Process};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub depth: usize,
    pub max_states: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            depth: 6,
            max_states: 20_000,
        }
    }
}

/// States reachable from a process by forward and backward moves, up to
/// key renaming. Each state is stored in canonical form; its outgoing
/// transitions are computed on that exact form, with the fresh key one
/// above its largest key.
#[derive(Clone, Debug)]
pub struct StateSpace {
    pub root: Config,
    pub states: Vec<Config>,
    pub depth: Vec<usize>,
    /// Outgoing transitions and the index of each target, for expanded
    /// states; `None` for states on the frontier.
    pub out: Vec<Option<Vec<(Transition, usize)>>>,
    pub bounds: Bounds,
    /// Some state at the depth bound has an unexplored successor.
    pub truncated: bool,
    /// The state budget ran out before the depth bound was reached.
    pub capped: bool,
    index: HashMap<Config, usize>,
}

impl StateSpace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().flatten().map(Vec::len).sum()
    }

    pub fn index_of(&self, x: &Config) -> Option<usize> {
        self.index.get(&canonicalize_keys(x)).copied()
    }

    /// Expanded states with their transitions.
    pub fn expanded(&self) -> impl Iterator<Item = (&Config, &[(Transition, usize)])> {
        self.states
            .iter()
            .zip(&self.out)
            .filter_map(|(s, o)| o.as_deref().map(|o| (s, o)))
    }

    pub fn edges(&self) -> impl Iterator<Item = &Transition> {
        self.out.iter().flatten().flatten().map(|(t, _)| t)
    }
}

pub fn fresh_key(x: &Config) -> u32 {
    x.max_key_id().map_or(0, |m| m + 1)
}

/// Breadth-first search over forward and backward moves from `p`.
pub fn explore(sem: &Semantics<'_>, p: &Process, bounds: Bounds) -> Result<StateSpace, SemanticsError> {
    let root = Config::Std(sem.env().fold(p));
    let mut space = StateSpace {
        root: root.clone(),
        states: vec![root.clone()],
        depth: vec![0],
        out: vec![None],
        bounds,
        truncated: false,
        capped: false,
        index: HashMap::from([(root, 0)]),
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(n) = queue.pop_front() {
        let d = space.depth[n];
        let x = space.states[n].clone();
        let steps = sem.all_steps(&x, fresh_key(&x))?;
        if d >= bounds.depth {
            if steps.iter().any(|t| !space.index.contains_key(&canonicalize_keys(&t.target))) {
                space.truncated = true;
            }
            continue;
        }
        let mut out = Vec::with_capacity(steps.len());
        for t in steps {
            let c = canonicalize_keys(&t.target);
            let m = match space.index.get(&c) {
                Some(&m) => m,
                None => {
                    if space.states.len() >= bounds.max_states {
                        space.truncated = true;
                        space.capped = true;
                        continue;
                    }
                    let m = space.states.len();
                    space.states.push(c.clone());
                    space.depth.push(d + 1);
                    space.out.push(None);
                    space.index.insert(c, m);
                    queue.push_back(m);
                    m
                }
            };
            out.push((t, m));
        }
        space.out[n] = Some(out);
    }
    Ok(space)
}
