use std::cell::RefCell;
use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::analysis::has_key;
use crate::semantics::{Direction, SemanticsError, Semantics, Transition};
use crate::syntax::Config;

/// A composable sequence of transitions from `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub source: Config,
    pub steps: Vec<Transition>,
}

impl Path {
    pub fn empty(source: Config) -> Self {
        Path {
            source,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn target(&self) -> &Config {
        self.steps.last().map_or(&self.source, |t| &t.target)
    }

    pub fn is_composable(&self) -> bool {
        let mut cur = &self.source;
        for t in &self.steps {
            if &t.source != cur {
                return false;
            }
            cur = &t.target;
        }
        true
    }
}

/// Memoised single-key step queries.
pub struct Stepper<'a, 'e> {
    pub sem: &'a Semantics<'e>,
    cache: RefCell<HashMap<(Config, Direction, u32), Vec<Transition>>>,
}

impl<'a, 'e> Stepper<'a, 'e> {
    pub fn new(sem: &'a Semantics<'e>) -> Self {
        Stepper {
            sem,
            cache: RefCell::new(HashMap::new()),
        }
    }

    /// Moves of `x` in direction `dir` carrying key `id`. Forward moves need
    /// `id` fresh in `x`; backward moves need it present.
    pub fn with_key(&self, x: &Config, dir: Direction, id: u32) -> Result<Vec<Transition>, SemanticsError> {
        let usable = match dir {
            Direction::Fwd => !has_key(x, id),
            Direction::Bk => has_key(x, id),
        };
        if !usable {
            return Ok(Vec::new());
        }
        let k = (x.clone(), dir, id);
        if let Some(v) = self.cache.borrow().get(&k) {
            return Ok(v.clone());
        }
        let v = match dir {
            Direction::Fwd => self.sem.forward_with_key(x, id)?,
            Direction::Bk => self.sem.backward_with_key(x, id)?,
        };
        self.cache.borrow_mut().insert(k, v.clone());
        Ok(v)
    }

    pub fn clear(&self) {
        self.cache.borrow_mut().clear();
    }
}

/// A random walk over forward and backward moves of at most `len` steps.
/// Forward keys come from a counter, so an undone key is never reissued.
pub fn random_path(
    sem: &Semantics<'_>,
    source: &Config,
    len: usize,
    rng: &mut impl Rng,
) -> Result<Path, SemanticsError> {
    let mut path = Path::empty(source.clone());
    let mut next = source.max_key_id().map_or(0, |m| m + 1);
    let mut cur = source.clone();
    for _ in 0..len {
        let steps = sem.all_steps(&cur, next)?;
        let Some(t) = steps.choose(rng).cloned() else {
            break;
        };
        if t.is_forward() {
            next += 1;
        }
        cur = t.target.clone();
        path.steps.push(t);
    }
    Ok(path)
}

/// Every path of length at most `len` from `source`, with forward keys
/// drawn from a per-path counter.
pub fn enumerate_paths(sem: &Semantics<'_>, source: &Config, len: usize) -> Result<Vec<Path>, SemanticsError> {
    let mut out = Vec::new();
    let next = source.max_key_id().map_or(0, |m| m + 1);
    let mut stack = vec![(Path::empty(source.clone()), next)];
    while let Some((p, next)) = stack.pop() {
        if p.len() < len {
            for t in sem.all_steps(p.target(), next)? {
                let bump = u32::from(t.is_forward());
                let mut q = p.clone();
                q.steps.push(t);
                stack.push((q, next + bump));
            }
        }
        out.push(p);
    }
    Ok(out)
}
