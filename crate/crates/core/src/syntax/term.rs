use std::collections::BTreeSet;
use std::fmt;

/// A prefix action: a name, a co-name, the internal action or a time tick.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Name(String),
    CoName(String),
    Tau,
    Sigma,
}

impl Action {
    pub fn name(n: impl Into<String>) -> Self {
        Action::Name(n.into())
    }

    pub fn coname(n: impl Into<String>) -> Self {
        Action::CoName(n.into())
    }

    /// `Name(a) <-> CoName(a)`; `Tau` and `Sigma` have none.
    pub fn complement(&self) -> Option<Action> {
        match self {
            Action::Name(a) => Some(Action::CoName(a.clone())),
            Action::CoName(a) => Some(Action::Name(a.clone())),
            Action::Tau | Action::Sigma => None,
        }
    }

    pub fn is_complement_of(&self, other: &Action) -> bool {
        matches!(
            (self, other),
            (Action::Name(a), Action::CoName(b)) | (Action::CoName(a), Action::Name(b)) if a == b
        )
    }

    pub fn is_sigma(&self) -> bool {
        matches!(self, Action::Sigma)
    }

    /// Names and co-names, i.e. actions that can wait for a partner.
    pub fn is_visible(&self) -> bool {
        matches!(self, Action::Name(_) | Action::CoName(_))
    }

    /// The channel name carried by a visible action.
    pub fn channel(&self) -> Option<&str> {
        match self {
            Action::Name(a) | Action::CoName(a) => Some(a),
            _ => None,
        }
    }

    pub fn key_kind(&self) -> KeyKind {
        if self.is_sigma() {
            KeyKind::Time
        } else {
            KeyKind::Comm
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Name(a) => write!(f, "{a}"),
            Action::CoName(a) => write!(f, "'{a}"),
            Action::Tau => write!(f, "tau"),
            Action::Sigma => write!(f, "s"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KeyKind {
    Time,
    Comm,
}

impl fmt::Display for KeyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KeyKind::Time => "time",
            KeyKind::Comm => "comm",
        })
    }
}

/// Identity of an executed action. Actions that happened together share the id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Key {
    pub id: u32,
    pub kind: KeyKind,
}

impl Key {
    pub fn time(id: u32) -> Self {
        Key { id, kind: KeyKind::Time }
    }

    pub fn comm(id: u32) -> Self {
        Key { id, kind: KeyKind::Comm }
    }
}

/// Prefix that has already fired.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuntimePrefix {
    /// An executed communication prefix `a[i]`, `'a[i]`, `tau[i]`.
    Act(Action),
    /// An executed `s[i]`.
    SigmaDone,
    /// `s_[i]`: a patient process let one tick pass in this run.
    Ghost,
}

impl RuntimePrefix {
    pub fn key_kind(&self) -> KeyKind {
        match self {
            RuntimePrefix::Act(_) => KeyKind::Comm,
            RuntimePrefix::SigmaDone | RuntimePrefix::Ghost => KeyKind::Time,
        }
    }

    /// The label action this prefix records.
    pub fn action(&self) -> Action {
        match self {
            RuntimePrefix::Act(a) => a.clone(),
            RuntimePrefix::SigmaDone | RuntimePrefix::Ghost => Action::Sigma,
        }
    }
}

/// History-free term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Process {
    Nil,
    Prefix(Action, Box<Process>),
    Timeout(Box<Process>, Box<Process>),
    Sum(Box<Process>, Box<Process>),
    Par(Box<Process>, Box<Process>),
    Restrict(Box<Process>, String),
    Const(String),
}

impl Process {
    pub fn prefix(act: Action, cont: Process) -> Self {
        Process::Prefix(act, Box::new(cont))
    }

    pub fn timeout(main: Process, alt: Process) -> Self {
        Process::Timeout(Box::new(main), Box::new(alt))
    }

    pub fn sum(l: Process, r: Process) -> Self {
        Process::Sum(Box::new(l), Box::new(r))
    }

    pub fn par(l: Process, r: Process) -> Self {
        Process::Par(Box::new(l), Box::new(r))
    }

    pub fn restrict(body: Process, name: impl Into<String>) -> Self {
        Process::Restrict(Box::new(body), name.into())
    }

    pub fn constant(ident: impl Into<String>) -> Self {
        Process::Const(ident.into())
    }

    /// Constants referenced anywhere in the term.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeSet<String>) {
        match self {
            Process::Nil => {}
            Process::Const(a) => {
                out.insert(a.clone());
            }
            Process::Prefix(_, p) | Process::Restrict(p, _) => p.collect_constants(out),
            Process::Timeout(l, r) | Process::Sum(l, r) | Process::Par(l, r) => {
                l.collect_constants(out);
                r.collect_constants(out);
            }
        }
    }

    /// True when the term uses neither `s` prefixes nor timeouts.
    pub fn is_untimed(&self) -> bool {
        match self {
            Process::Nil | Process::Const(_) => true,
            Process::Prefix(a, p) => !a.is_sigma() && p.is_untimed(),
            Process::Timeout(..) => false,
            Process::Sum(l, r) | Process::Par(l, r) => l.is_untimed() && r.is_untimed(),
            Process::Restrict(p, _) => p.is_untimed(),
        }
    }
}

/// A term possibly carrying history: executed prefixes, ghost ticks and
/// decorated timeouts.
///
/// Built through the smart constructors, a `Sum`, `Par` or `Restrict` node
/// always has a non-standard child; fully standard subterms collapse into
/// `Std`, so structural equality coincides with term equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Config {
    Std(Process),
    Keyed(RuntimePrefix, Key, Box<Config>),
    /// `[X](Q)@L[i]`: the main branch fired with key `i`.
    TimeoutL {
        main: Box<Config>,
        alt: Process,
        key: Key,
    },
    /// `[P](Y)@R[i]`: the timeout expired at tick `i`.
    TimeoutR {
        main: Process,
        alt: Box<Config>,
        key: Key,
    },
    Sum(Box<Config>, Box<Config>),
    Par(Box<Config>, Box<Config>),
    Restrict(Box<Config>, String),
}

impl From<Process> for Config {
    fn from(p: Process) -> Self {
        Config::Std(p)
    }
}

impl Config {
    pub fn keyed(rp: RuntimePrefix, key: Key, cont: Config) -> Self {
        Config::Keyed(rp, key, Box::new(cont))
    }

    pub fn timeout_l(main: Config, alt: Process, key: Key) -> Self {
        Config::TimeoutL {
            main: Box::new(main),
            alt,
            key,
        }
    }

    pub fn timeout_r(main: Process, alt: Config, key: Key) -> Self {
        Config::TimeoutR {
            main,
            alt: Box::new(alt),
            key,
        }
    }

    pub fn sum(l: Config, r: Config) -> Self {
        match (l, r) {
            (Config::Std(p), Config::Std(q)) => Config::Std(Process::sum(p, q)),
            (l, r) => Config::Sum(Box::new(l), Box::new(r)),
        }
    }

    pub fn par(l: Config, r: Config) -> Self {
        match (l, r) {
            (Config::Std(p), Config::Std(q)) => Config::Std(Process::par(p, q)),
            (l, r) => Config::Par(Box::new(l), Box::new(r)),
        }
    }

    pub fn restrict(body: Config, name: impl Into<String>) -> Self {
        match body {
            Config::Std(p) => Config::Std(Process::restrict(p, name)),
            b => Config::Restrict(Box::new(b), name.into()),
        }
    }

    pub fn as_process(&self) -> Option<&Process> {
        match self {
            Config::Std(p) => Some(p),
            _ => None,
        }
    }

    pub fn into_process(self) -> Option<Process> {
        match self {
            Config::Std(p) => Some(p),
            _ => None,
        }
    }

    /// Visits every key occurrence in a left-to-right pre-order walk.
    pub fn for_each_key(&self, f: &mut impl FnMut(Key)) {
        match self {
            Config::Std(_) => {}
            Config::Keyed(_, k, x) => {
                f(*k);
                x.for_each_key(f);
            }
            Config::TimeoutL { main, key, .. } => {
                f(*key);
                main.for_each_key(f);
            }
            Config::TimeoutR { alt, key, .. } => {
                f(*key);
                alt.for_each_key(f);
            }
            Config::Sum(l, r) | Config::Par(l, r) => {
                l.for_each_key(f);
                r.for_each_key(f);
            }
            Config::Restrict(x, _) => x.for_each_key(f),
        }
    }

    /// Applies `f` to every key occurrence, rebuilding the term.
    pub fn map_keys(&self, f: &mut impl FnMut(Key) -> Key) -> Config {
        match self {
            Config::Std(p) => Config::Std(p.clone()),
            Config::Keyed(rp, k, x) => {
                let k = f(*k);
                Config::keyed(rp.clone(), k, x.map_keys(f))
            }
            Config::TimeoutL { main, alt, key } => {
                let key = f(*key);
                Config::timeout_l(main.map_keys(f), alt.clone(), key)
            }
            Config::TimeoutR { main, alt, key } => {
                let key = f(*key);
                Config::timeout_r(main.clone(), alt.map_keys(f), key)
            }
            Config::Sum(l, r) => Config::Sum(Box::new(l.map_keys(f)), Box::new(r.map_keys(f))),
            Config::Par(l, r) => Config::Par(Box::new(l.map_keys(f)), Box::new(r.map_keys(f))),
            Config::Restrict(x, a) => Config::Restrict(Box::new(x.map_keys(f)), a.clone()),
        }
    }

    /// Renames key id `from` to `to`, leaving kinds alone.
    pub fn rename_key(&self, from: u32, to: u32) -> Config {
        self.map_keys(&mut |k| if k.id == from { Key { id: to, kind: k.kind } } else { k })
    }

    pub fn max_key_id(&self) -> Option<u32> {
        let mut max = None;
        self.for_each_key(&mut |k| max = Some(max.map_or(k.id, |m: u32| m.max(k.id))));
        max
    }

    /// True when the term uses no time constructs (the reversible CCS fragment).
    pub fn is_untimed(&self) -> bool {
        match self {
            Config::Std(p) => p.is_untimed(),
            Config::Keyed(RuntimePrefix::Act(a), _, x) => !a.is_sigma() && x.is_untimed(),
            Config::Keyed(..) | Config::TimeoutL { .. } | Config::TimeoutR { .. } => false,
            Config::Sum(l, r) | Config::Par(l, r) => l.is_untimed() && r.is_untimed(),
            Config::Restrict(x, _) => x.is_untimed(),
        }
    }
}
