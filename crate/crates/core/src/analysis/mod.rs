//! Static predicates and the causal structure of configurations: key sets,
//! standardness, the not-acted predicate, the key order, forward
//! communication conflict and transition independence.

mod conflict;
mod order;

use std::collections::BTreeSet;

use crate::syntax::{Config, Key, RuntimePrefix};

pub use conflict::{conflicting, fcc, independent, ConflictError};
pub use order::{key_order, KeyOrder};

/// All keys occurring in `x`.
pub fn keys_of(x: &Config) -> BTreeSet<Key> {
    let mut out = BTreeSet::new();
    x.for_each_key(&mut |k| {
        out.insert(k);
    });
    out
}

pub fn key_ids(x: &Config) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    x.for_each_key(&mut |k| {
        out.insert(k.id);
    });
    out
}

pub fn has_key(x: &Config, id: u32) -> bool {
    match x {
        Config::Std(_) => false,
        Config::Keyed(_, k, c) => k.id == id || has_key(c, id),
        Config::TimeoutL { main, key, .. } => key.id == id || has_key(main, id),
        Config::TimeoutR { alt, key, .. } => key.id == id || has_key(alt, id),
        Config::Sum(l, r) | Config::Par(l, r) => has_key(l, id) || has_key(r, id),
        Config::Restrict(c, _) => has_key(c, id),
    }
}

pub fn is_standard(x: &Config) -> bool {
    // Smart constructors keep every keyless term in `Std` form, but terms
    // built by hand may not be normalised.
    match x {
        Config::Std(_) => true,
        Config::Keyed(..) | Config::TimeoutL { .. } | Config::TimeoutR { .. } => false,
        Config::Sum(l, r) | Config::Par(l, r) => is_standard(l) && is_standard(r),
        Config::Restrict(c, _) => is_standard(c),
    }
}

/// True when `x` has executed no communication action (ticks are allowed).
pub fn is_not_acted(x: &Config) -> bool {
    match x {
        Config::Std(_) => true,
        Config::Keyed(RuntimePrefix::Act(_), _, _) | Config::TimeoutL { .. } => false,
        Config::Keyed(_, _, c) | Config::Restrict(c, _) => is_not_acted(c),
        Config::TimeoutR { alt, .. } => is_not_acted(alt),
        Config::Sum(l, r) | Config::Par(l, r) => is_not_acted(l) && is_not_acted(r),
    }
}
