//! Randomized invariants over small permutation groups.

use std::collections::HashSet;

use cayley_ci::blocks::all_block_systems;
use cayley_ci::ci::are_conjugate_subgroups;
use cayley_ci::closures::{k_closure, orbit_coloring};
use cayley_ci::oracle;
use cayley_ci::{BlockSystem, PermGroup, Permutation, DEFAULT_CAP};
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn group(n: usize, max_gens: usize) -> impl Strategy<Value = PermGroup> {
    prop::collection::vec(perm(n), 1..=max_gens).prop_map(move |g| PermGroup::new(n, g).unwrap())
}

/// Transitive groups: a random group joined with the `n`-cycle.
fn transitive(n: usize) -> impl Strategy<Value = PermGroup> {
    prop::collection::vec(perm(n), 0..=1).prop_map(move |mut g| {
        g.push(PermGroup::cyclic(n).generators()[0].clone());
        PermGroup::new(n, g).unwrap()
    })
}

fn sized<S: Strategy + 'static>(f: fn(usize) -> S) -> impl Strategy<Value = S::Value> {
    (3usize..=6).prop_flat_map(f)
}

fn element_set(g: &PermGroup) -> HashSet<Permutation> {
    g.element_set(DEFAULT_CAP).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn inverse_and_associativity((a, b, c) in (3usize..=8).prop_flat_map(|n| (perm(n), perm(n), perm(n)))) {
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn membership_matches_enumeration((g, x) in (3usize..=6).prop_flat_map(|n| (group(n, 2), perm(n)))) {
        let elems = element_set(&g);
        prop_assert_eq!(elems.len() as u128, g.order());
        prop_assert_eq!(g.contains(&x), elems.contains(&x));
        for e in elems.iter().take(20) {
            prop_assert!(g.contains(e));
        }
    }

    #[test]
    fn closure_chain_and_idempotence(g in sized(|n| group(n, 2))) {
        let c3 = k_closure(&g, 3).unwrap();
        let c2 = k_closure(&g, 2).unwrap();
        prop_assert!(g.is_subgroup_of(&c3));
        prop_assert!(c3.is_subgroup_of(&c2));
        prop_assert_eq!(k_closure(&c2, 2).unwrap().order(), c2.order());
        prop_assert_eq!(c2.order(), oracle::k_closure_order(&g, 2).unwrap());
    }

    #[test]
    fn closure_is_monotone(gens in (3usize..=6).prop_flat_map(|n| prop::collection::vec(perm(n), 1..=3))) {
        let n = gens[0].degree();
        let g = PermGroup::new(n, gens.clone()).unwrap();
        let h = PermGroup::new(n, vec![gens[0].clone()]).unwrap();
        prop_assert!(k_closure(&h, 2).unwrap().is_subgroup_of(&k_closure(&g, 2).unwrap()));
    }

    #[test]
    fn block_systems_match_partition_scan(g in sized(transitive)) {
        let mut found = all_block_systems(&g).unwrap();
        found.sort_by(|a, b| (a.block_size(), a.blocks()).cmp(&(b.block_size(), b.blocks())));
        prop_assert_eq!(found, oracle::block_systems(&g).unwrap());
    }

    #[test]
    fn coloring_is_canonical(g in sized(|n| group(n, 2))) {
        let s = orbit_coloring(&g, 2).unwrap();
        let mut next = 0;
        for &c in s.colors() {
            prop_assert!(c <= next);
            if c == next {
                next += 1;
            }
        }
        prop_assert_eq!(next as usize, s.num_colors());
    }

    #[test]
    fn serde_round_trips(g in sized(transitive)) {
        let back: PermGroup = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(back.degree(), g.degree());
        prop_assert_eq!(back.generators(), g.generators());
        let s = orbit_coloring(&g, 2).unwrap();
        let s2 = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(s, s2);
        for sys in all_block_systems(&g).unwrap() {
            let back: BlockSystem = serde_json::from_str(&serde_json::to_string(&sys).unwrap()).unwrap();
            prop_assert_eq!(back, sys);
        }
    }

    #[test]
    fn conjugator_is_sound((g, pick) in sized(|n| group(n, 2)).prop_flat_map(|g| {
        let size = g.enumerate_elements(DEFAULT_CAP).unwrap().len();
        (Just(g), 0..size)
    })) {
        let elems = g.enumerate_elements(DEFAULT_CAP).unwrap();
        let h = PermGroup::new(g.degree(), vec![elems[elems.len() / 2].clone()]).unwrap();
        let k = h.conjugate(&elems[pick]).unwrap();
        let c = are_conjugate_subgroups(&g, &h, &k, DEFAULT_CAP).unwrap();
        let c = c.expect("a conjugator exists");
        prop_assert!(g.contains(&c));
        prop_assert_eq!(element_set(&h.conjugate(&c).unwrap()), element_set(&k));
    }
}
