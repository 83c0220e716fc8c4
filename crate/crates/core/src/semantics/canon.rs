use std::collections::BTreeMap;

use crate::syntax::{Config, Key};

/// Maps each key id of `x` to its rank by first occurrence in a
/// left-to-right pre-order walk.
pub fn canonical_renaming(x: &Config) -> BTreeMap<u32, u32> {
    let mut map = BTreeMap::new();
    x.for_each_key(&mut |k| {
        let n = map.len() as u32;
        map.entry(k.id).or_insert(n);
    });
    map
}

/// `x` with its keys renamed to 0, 1, 2, ... in order of first occurrence.
/// Two configurations equal up to key renaming have the same image.
pub fn canonicalize_keys(x: &Config) -> Config {
    let map = canonical_renaming(x);
    x.map_keys(&mut |k| Key {
        id: map[&k.id],
        kind: k.kind,
    })
}
