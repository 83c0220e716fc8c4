use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rtpl_core::analysis::{conflicting, key_order, keys_of};
use rtpl_core::semantics::{canonicalize_keys, Semantics};
use rtpl_core::syntax::{parse_configuration, Action, Config, DefinitionEnv, KeyKind, Process};
use rtpl_core::verify::{
    check_bti, check_square, explore, fresh_key, is_parabolic, parabolic_normalize, random_path,
    Bounds, Stepper,
};

fn action() -> impl Strategy<Value = Action> {
    prop_oneof![
        Just(Action::name("a")),
        Just(Action::coname("a")),
        Just(Action::name("b")),
        Just(Action::coname("b")),
        Just(Action::Sigma),
        Just(Action::Tau),
    ]
}

fn process() -> impl Strategy<Value = Process> {
    let leaf = prop_oneof![
        Just(Process::Nil),
        action().prop_map(|a| Process::prefix(a, Process::Nil)),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (action(), inner.clone()).prop_map(|(a, p)| Process::prefix(a, p)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| Process::timeout(p, q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| Process::sum(p, q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| Process::par(p, q)),
            inner.prop_map(|p| Process::restrict(p, "a")),
        ]
    })
}

/// A configuration reached by a random walk from a random process.
fn reachable() -> impl Strategy<Value = Config> {
    (process(), 0usize..8, any::<u64>()).prop_map(|(p, len, seed)| {
        let env = DefinitionEnv::default();
        let sem = Semantics::new(&env);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_path(&sem, &p.into(), len, &mut rng)
            .unwrap()
            .target()
            .clone()
    })
}

fn env() -> DefinitionEnv {
    DefinitionEnv::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(x in reachable()) {
        let back = parse_configuration(&x.to_string(), &env()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn canonicalize_is_idempotent(x in reachable()) {
        let c = canonicalize_keys(&x);
        prop_assert_eq!(canonicalize_keys(&c), c.clone());
        prop_assert_eq!(keys_of(&c).len(), keys_of(&x).len());
    }

    #[test]
    fn complement_is_an_involution(a in action()) {
        match a.complement() {
            Some(c) => {
                prop_assert!(a.is_visible());
                prop_assert_eq!(c.complement(), Some(a.clone()));
                prop_assert!(a.is_complement_of(&c));
            }
            None => prop_assert!(!a.is_visible()),
        }
    }

    #[test]
    fn every_step_is_undone_by_its_reverse(x in reachable()) {
        let e = env();
        let sem = Semantics::new(&e);
        for t in sem.all_steps(&x, fresh_key(&x)).unwrap() {
            let back = if t.is_forward() {
                sem.backward_with_key(&t.target, t.label.key.id).unwrap()
            } else {
                sem.forward_with_key(&t.target, t.label.key.id).unwrap()
            };
            prop_assert!(back.iter().any(|b| b.label == t.label && b.target == x), "{}", t);
        }
    }

    #[test]
    fn at_most_one_tick(x in reachable()) {
        let e = env();
        let sem = Semantics::new(&e);
        let ticks = sem
            .forward_with_key(&x, fresh_key(&x))
            .unwrap()
            .into_iter()
            .filter(|t| t.is_sigma())
            .count();
        prop_assert!(ticks <= 1);
    }

    #[test]
    fn tau_excludes_ticks(x in reachable()) {
        let e = env();
        let sem = Semantics::new(&e);
        let ts = sem.forward_with_key(&x, fresh_key(&x)).unwrap();
        let tau = ts.iter().any(|t| t.label.action == Action::Tau);
        prop_assert_eq!(tau, sem.can_tau(&x).unwrap());
        prop_assert!(!(tau && ts.iter().any(|t| t.is_sigma())));
    }

    #[test]
    fn time_keys_are_totally_ordered(x in reachable()) {
        prop_assert_eq!(key_order(&x).incomparable(KeyKind::Time), None);
    }

    #[test]
    fn backward_moves_drop_one_key(x in reachable()) {
        let e = env();
        let n = keys_of(&x).len();
        for t in Semantics::new(&e).backward_steps(&x).unwrap() {
            prop_assert_eq!(keys_of(&t.target).len() + 1, n);
        }
    }

    #[test]
    fn conflict_is_symmetric(x in reachable()) {
        let e = env();
        let sem = Semantics::new(&e);
        let f = fresh_key(&x);
        let mut ts = sem.forward_with_key(&x, f).unwrap();
        ts.extend(sem.forward_with_key(&x, f + 1).unwrap());
        ts.extend(sem.backward_steps(&x).unwrap());
        for t in &ts {
            for s in &ts {
                prop_assert_eq!(conflicting(t, s).ok(), conflicting(s, t).ok());
            }
        }
    }

    #[test]
    fn independent_pairs_commute(p in process()) {
        let e = env();
        let sem = Semantics::new(&e);
        let space = explore(&sem, &p, Bounds { depth: 3, max_states: 2_000 }).unwrap();
        let sq = check_square(&sem, &space).unwrap();
        prop_assert!(sq.is_clean(), "{:?}", sq.violations);
        let bti = check_bti(&sem, &space).unwrap();
        prop_assert!(bti.is_clean(), "{:?}", bti.violations);
    }

    #[test]
    fn paths_have_parabolic_forms(p in process(), len in 0usize..10, seed in any::<u64>()) {
        let e = env();
        let sem = Semantics::new(&e);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let path = random_path(&sem, &p.into(), len, &mut rng).unwrap();
        let q = parabolic_normalize(&Stepper::new(&sem), &path).unwrap();
        prop_assert!(is_parabolic(&q));
        prop_assert!(q.len() <= path.len());
        prop_assert_eq!(q.target(), path.target());
    }
}
