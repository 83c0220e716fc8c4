use std::collections::{BTreeMap, HashMap};

use super::term::{Config, Process};
use super::SyntaxError;

/// Recursive definitions `A = P`.
///
/// Every body is guarded: each constant occurrence sits under a prefix or in
/// the alternative branch of a timeout, which can only be entered by a tick.
#[derive(Clone, Debug, Default)]
pub struct DefinitionEnv {
    defs: BTreeMap<String, Process>,
    /// Bodies with their subterms folded, mapped to the first name that
    /// owns them.
    folded: HashMap<Process, String>,
}

impl PartialEq for DefinitionEnv {
    fn eq(&self, other: &Self) -> bool {
        self.defs == other.defs
    }
}

impl Eq for DefinitionEnv {}

impl DefinitionEnv {
    pub fn from_definitions(
        defs: impl IntoIterator<Item = (String, Process)>,
    ) -> Result<Self, SyntaxError> {
        let mut map = BTreeMap::new();
        for (name, body) in defs {
            if map.insert(name.clone(), body).is_some() {
                return Err(SyntaxError::Duplicate(name));
            }
        }
        let env = Self::from_unchecked(map);
        for (name, body) in &env.defs {
            env.check_bound(body)?;
            if !guarded(body) {
                return Err(SyntaxError::Unguarded(name.clone()));
            }
        }
        Ok(env)
    }

    pub(crate) fn from_unchecked(defs: impl IntoIterator<Item = (String, Process)>) -> Self {
        let mut env = DefinitionEnv {
            defs: defs.into_iter().collect(),
            folded: HashMap::new(),
        };
        let folded: Vec<_> = env
            .defs
            .iter()
            .map(|(n, b)| (env.fold_children(b), n.clone()))
            .collect();
        for (b, n) in folded {
            env.folded.entry(b).or_insert(n);
        }
        env
    }

    /// Replaces every subterm that is the body of a constant by the
    /// constant. A constant and its unfolding denote the same state; this
    /// picks the folded one so that undoing a step lands on a term equal
    /// to where it started.
    pub fn fold(&self, p: &Process) -> Process {
        if self.folded.is_empty() {
            return p.clone();
        }
        let q = self.fold_children(p);
        match self.folded.get(&q) {
            Some(n) => Process::Const(n.clone()),
            None => q,
        }
    }

    fn fold_children(&self, p: &Process) -> Process {
        match p {
            Process::Nil | Process::Const(_) => p.clone(),
            Process::Prefix(a, c) => Process::prefix(a.clone(), self.fold(c)),
            Process::Timeout(l, r) => Process::timeout(self.fold(l), self.fold(r)),
            Process::Sum(l, r) => Process::sum(self.fold(l), self.fold(r)),
            Process::Par(l, r) => Process::par(self.fold(l), self.fold(r)),
            Process::Restrict(b, a) => Process::restrict(self.fold(b), a.clone()),
        }
    }

    /// [`fold`](Self::fold) at every history-free position of `x`.
    pub fn fold_config(&self, x: &Config) -> Config {
        if self.folded.is_empty() {
            return x.clone();
        }
        match x {
            Config::Std(p) => Config::Std(self.fold(p)),
            Config::Keyed(rp, k, c) => Config::keyed(rp.clone(), *k, self.fold_config(c)),
            Config::TimeoutL { main, alt, key } => Config::TimeoutL {
                main: Box::new(self.fold_config(main)),
                alt: self.fold(alt),
                key: *key,
            },
            Config::TimeoutR { main, alt, key } => Config::TimeoutR {
                main: self.fold(main),
                alt: Box::new(self.fold_config(alt)),
                key: *key,
            },
            Config::Sum(l, r) => self.refold(Config::sum(self.fold_config(l), self.fold_config(r))),
            Config::Par(l, r) => self.refold(Config::par(self.fold_config(l), self.fold_config(r))),
            Config::Restrict(c, a) => self.refold(Config::restrict(self.fold_config(c), a.clone())),
        }
    }

    // smart constructors may merge history-free parts into a single term
    fn refold(&self, x: Config) -> Config {
        match x {
            Config::Std(p) => Config::Std(self.fold(&p)),
            x => x,
        }
    }

    pub fn body(&self, name: &str) -> Option<&Process> {
        self.defs.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Process)> {
        self.defs.iter()
    }

    /// Constants whose body is exactly `p`.
    pub fn names_with_body<'a>(&'a self, p: &'a Process) -> impl Iterator<Item = &'a String> + 'a {
        self.defs.iter().filter(move |(_, b)| *b == p).map(|(n, _)| n)
    }

    pub fn check_bound(&self, p: &Process) -> Result<(), SyntaxError> {
        match p.constants().into_iter().find(|c| !self.defs.contains_key(c)) {
            Some(c) => Err(SyntaxError::Unbound(c)),
            None => Ok(()),
        }
    }

    pub fn check_bound_config(&self, x: &Config) -> Result<(), SyntaxError> {
        match x {
            Config::Std(p) => self.check_bound(p),
            Config::Keyed(_, _, c) | Config::Restrict(c, _) => self.check_bound_config(c),
            Config::TimeoutL { main, alt, .. } => {
                self.check_bound_config(main)?;
                self.check_bound(alt)
            }
            Config::TimeoutR { main, alt, .. } => {
                self.check_bound(main)?;
                self.check_bound_config(alt)
            }
            Config::Sum(l, r) | Config::Par(l, r) => {
                self.check_bound_config(l)?;
                self.check_bound_config(r)
            }
        }
    }
}

fn guarded(p: &Process) -> bool {
    match p {
        Process::Const(_) => false,
        Process::Nil | Process::Prefix(..) => true,
        Process::Timeout(main, _) => guarded(main),
        Process::Sum(l, r) | Process::Par(l, r) => guarded(l) && guarded(r),
        Process::Restrict(b, _) => guarded(b),
    }
}
