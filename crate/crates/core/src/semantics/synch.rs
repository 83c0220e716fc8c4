use std::collections::BTreeSet;

use crate::syntax::Action;

/// A family of barb sets; each member lists actions offered together.
pub type SynchSet = BTreeSet<BTreeSet<Action>>;

/// Pointwise union of two families. An empty family offers nothing and so
/// leaves the other side unchanged.
pub(crate) fn oplus(a: &SynchSet, b: &SynchSet) -> SynchSet {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let mut out = SynchSet::new();
    for x in a {
        for y in b {
            out.insert(x.union(y).cloned().collect());
        }
    }
    out
}

/// Drops `a` and its co-name from every member.
pub(crate) fn hide(s: SynchSet, a: &str) -> SynchSet {
    s.into_iter()
        .map(|m| m.into_iter().filter(|x| x.channel() != Some(a)).collect())
        .collect()
}

/// True when some member holds a complementary pair.
pub fn has_sync_pair(s: &SynchSet) -> bool {
    s.iter()
        .any(|m| m.iter().any(|a| a.complement().is_some_and(|c| m.contains(&c))))
}
