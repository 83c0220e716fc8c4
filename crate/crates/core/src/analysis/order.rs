use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use super::key_ids;
use crate::syntax::{Config, Key, KeyKind};

/// The causal order on the keys of a configuration: the transitive closure
/// of `ord`. Reflexive pairs are implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KeyOrder {
    pub keys: BTreeSet<Key>,
    /// Strict pairs `i < j`, transitively closed.
    pub lt: BTreeSet<(u32, u32)>,
}

impl KeyOrder {
    pub fn leq(&self, i: u32, j: u32) -> bool {
        i == j || self.lt.contains(&(i, j))
    }

    pub fn kind_of(&self, id: u32) -> Option<KeyKind> {
        self.keys.iter().find(|k| k.id == id).map(|k| k.kind)
    }

    /// First pair of keys of `kind` that the order leaves incomparable.
    pub fn incomparable(&self, kind: KeyKind) -> Option<(u32, u32)> {
        let ids: Vec<u32> = self.keys.iter().filter(|k| k.kind == kind).map(|k| k.id).collect();
        for (n, &i) in ids.iter().enumerate() {
            for &j in &ids[n + 1..] {
                if !self.leq(i, j) && !self.leq(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_total_on(&self, kind: KeyKind) -> bool {
        self.incomparable(kind).is_none()
    }

    /// `{"lt": [[i, j], ...], "kinds": {"i": "time" | "comm"}}`
    pub fn to_json(&self) -> Value {
        let lt: Vec<[u32; 2]> = self.lt.iter().map(|&(i, j)| [i, j]).collect();
        let kinds: BTreeMap<String, String> = self
            .keys
            .iter()
            .map(|k| (k.id.to_string(), k.kind.to_string()))
            .collect();
        json!({ "lt": lt, "kinds": kinds })
    }
}

/// The direct pairs of `ord(x)`, not closed.
pub fn ord(x: &Config) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    collect(x, &mut out);
    out
}

fn collect(x: &Config, out: &mut BTreeSet<(u32, u32)>) {
    let below = |i: u32, c: &Config, out: &mut BTreeSet<(u32, u32)>| {
        for j in key_ids(c) {
            out.insert((i, j));
        }
        collect(c, out);
    };
    match x {
        Config::Std(_) => {}
        Config::Keyed(_, k, c) => below(k.id, c, out),
        Config::TimeoutL { main, key, .. } => below(key.id, main, out),
        Config::TimeoutR { alt, key, .. } => below(key.id, alt, out),
        Config::Sum(l, r) | Config::Par(l, r) => {
            collect(l, out);
            collect(r, out);
        }
        Config::Restrict(c, _) => collect(c, out),
    }
}

pub fn key_order(x: &Config) -> KeyOrder {
    let mut lt = ord(x);
    loop {
        let extra: Vec<(u32, u32)> = lt
            .iter()
            .flat_map(|&(i, j)| lt.range((j, 0)..=(j, u32::MAX)).map(move |&(_, k)| (i, k)))
            .filter(|p| !lt.contains(p))
            .collect();
        if extra.is_empty() {
            break;
        }
        lt.extend(extra);
    }
    lt.retain(|(i, j)| i != j);
    KeyOrder {
        keys: super::keys_of(x),
        lt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_configuration, DefinitionEnv};

    fn conf(s: &str) -> Config {
        parse_configuration(s, &DefinitionEnv::default()).unwrap()
    }

    #[test]
    fn standard_has_empty_order() {
        assert!(key_order(&conf("a.b.0 | [c.0](d.0)")).lt.is_empty());
    }

    #[test]
    fn chain_is_closed() {
        let o = key_order(&conf("a[1].b[2].c[3].0"));
        assert_eq!(o.lt, BTreeSet::from([(1, 2), (1, 3), (2, 3)]));
    }

    #[test]
    fn json_shape() {
        let o = key_order(&conf("s[1].a[2].0"));
        assert_eq!(
            o.to_json(),
            json!({"lt": [[1, 2]], "kinds": {"1": "time", "2": "comm"}})
        );
    }

    #[test]
    fn parallel_time_keys_incomparable_without_shared_ancestor() {
        let o = key_order(&conf("s[1].0 | s[2].0"));
        assert_eq!(o.incomparable(KeyKind::Time), Some((1, 2)));
    }
}
