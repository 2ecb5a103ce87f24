mod common;

use std::collections::HashSet;

use common::*;
use num_bigint::BigUint;
use proptest::prelude::*;
use treemono::permgrp::{
    build_chain, derived_subgroup, equal_groups, is_subgroup, is_transitive, normal_closure, uniform_sample,
    wn_generators, wreath_order, PermGroup,
};
use treemono::rng;
use treemono::wreath_core::{Element, LevelPermutation};

/// All products of the generators, by breadth-first closure.
fn closure(gens: &[LevelPermutation], n: usize) -> HashSet<LevelPermutation> {
    let id = LevelPermutation::identity(3, n);
    let mut seen: HashSet<LevelPermutation> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = &x * g;
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

fn two_fixed_tables(n: usize) -> Vec<LevelPermutation> {
    let m = two_fixed_machine();
    (0..2).map(|i| Element::state(&m, i).restrict(n).unwrap()).collect()
}

#[test]
fn wreath_orders_exact() {
    for n in 1..=3u32 {
        let expect = BigUint::from(6u32).pow((3u32.pow(n) - 1) / 2);
        assert_eq!(wn_generators(n as usize).unwrap().order(), expect);
        assert_eq!(wreath_order(n as usize), expect);
    }
    assert_eq!(wn_generators(3).unwrap().order().to_string(), "13060694016");
}

#[test]
fn w2_membership_exhaustive() {
    let w2 = wn_generators(2).unwrap();
    let all = closure(w2.generators(), 2);
    assert_eq!(all.len(), 1296);
    let elts = w2.chain().elements();
    assert_eq!(elts.len(), 1296);
    assert!(elts.iter().all(|e| all.contains(e)));
    let g2 = PermGroup::new(3, 2, two_fixed_tables(2)).unwrap();
    let brute = closure(g2.generators(), 2);
    assert_eq!(brute.len(), 648);
    assert_eq!(g2.order(), BigUint::from(648u32));
    for e in &elts {
        assert_eq!(g2.contains(e).unwrap(), brute.contains(e));
    }
}

#[test]
fn model_group_orders() {
    let expect = ["6", "648", "816293376"];
    for (n, &o) in (1..=3).zip(expect.iter()) {
        let g = PermGroup::new(3, n, two_fixed_tables(n)).unwrap();
        assert_eq!(g.order().to_string(), o);
        let d = derived_subgroup(&g);
        assert_eq!(&g.order() / d.order(), BigUint::from(2u32));
    }
}

#[test]
fn derived_subgroup_is_normal_and_contains_commutators() {
    let g = PermGroup::new(3, 3, two_fixed_tables(3)).unwrap();
    let d = derived_subgroup(&g);
    for h in d.generators() {
        for x in g.generators() {
            assert!(d.contains(&h.conjugated_by(x)).unwrap());
        }
    }
    let (a, b) = (&g.generators()[0], &g.generators()[1]);
    assert!(d.contains(&a.commutator(b)).unwrap());
    assert!(!d.contains(a).unwrap());
    assert!(is_subgroup(&d, &g).unwrap());
    let nc = normal_closure(&g, vec![a.commutator(b)]);
    assert!(equal_groups(&nc, &d).unwrap());
}

#[test]
fn derived_of_w1_is_a3() {
    let w1 = wn_generators(1).unwrap();
    assert_eq!(derived_subgroup(&w1).order(), BigUint::from(3u32));
}

#[test]
fn transitivity() {
    let g = PermGroup::new(3, 3, two_fixed_tables(3)).unwrap();
    assert!(is_transitive(&g));
    let a_only = PermGroup::new(3, 3, vec![two_fixed_tables(3)[0].clone()]).unwrap();
    assert!(!is_transitive(&a_only));
}

#[test]
fn chain_independent_of_seed() {
    let g = PermGroup::new(3, 3, two_fixed_tables(3)).unwrap();
    let o = g.order();
    for seed in 0..4 {
        let c = build_chain(&g, seed);
        assert_eq!(*c.order(), o);
        for x in g.generators() {
            assert!(c.contains(x));
        }
    }
}

#[test]
fn membership_rejects_other_shapes() {
    let g = PermGroup::new(3, 2, two_fixed_tables(2)).unwrap();
    assert!(g.contains(&LevelPermutation::identity(3, 3)).is_err());
    assert!(PermGroup::new(3, 2, vec![LevelPermutation::identity(3, 3)]).is_err());
}

#[test]
fn uniform_sampling_chi_squared() {
    // W_1 = S_3; 6000 draws, 5 degrees of freedom, 0.1% critical value 20.52
    let chain = wn_generators(1).unwrap().chain();
    let elts = chain.elements();
    let mut counts = vec![0usize; elts.len()];
    let mut r = rng::stream(11, 0);
    let draws = 6000;
    for _ in 0..draws {
        let e = uniform_sample(&chain, &mut r);
        counts[elts.iter().position(|x| *x == e).unwrap()] += 1;
    }
    let expect = draws as f64 / 6.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    assert!(chi2 < 20.52, "chi2 = {chi2}, counts {counts:?}");
}

#[test]
fn uniform_sampling_chi_squared_on_stabilizer_orbits() {
    // image of vertex 0 under uniform elements of G_3 is uniform on 27 points
    let g = PermGroup::new(3, 3, two_fixed_tables(3)).unwrap();
    let chain = g.chain();
    let mut counts = vec![0usize; 27];
    let mut r = rng::stream(5, 1);
    let draws = 5400;
    for _ in 0..draws {
        counts[uniform_sample(&chain, &mut r).image(0)] += 1;
    }
    // 26 degrees of freedom, 0.1% critical value 54.05
    let expect = draws as f64 / 27.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    assert!(chi2 < 54.05, "chi2 = {chi2}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn order_and_membership_match_closure(gens in prop::collection::vec(level_strategy(2), 1..=3), probes in prop::collection::vec(level_strategy(2), 20)) {
        let g = PermGroup::new(3, 2, gens.clone()).unwrap();
        let brute = closure(&gens, 2);
        prop_assert_eq!(g.order(), BigUint::from(brute.len()));
        for p in probes.iter().chain(brute.iter().take(20)) {
            prop_assert_eq!(g.contains(p).unwrap(), brute.contains(p));
        }
        let c = g.chain();
        let mut r = rng::stream(3, 0);
        for _ in 0..10 {
            prop_assert!(brute.contains(&c.random_element(&mut r)));
        }
    }

    #[test]
    fn base_images_locate_elements(gens in prop::collection::vec(level_strategy(3), 1..=2), seed in any::<u64>()) {
        let g = PermGroup::new(3, 3, gens).unwrap();
        let c = g.chain();
        let mut r = rng::stream(seed, 0);
        let e = uniform_sample(&c, &mut r);
        let images: Vec<u32> = c.base().iter().map(|&b| e.image(b as usize) as u32).collect();
        prop_assert_eq!(c.find_with_base_images(&images), Some(e));
    }

    #[test]
    fn sift_residue_identity_iff_member(gens in prop::collection::vec(level_strategy(2), 1..=2), p in level_strategy(2)) {
        let g = PermGroup::new(3, 2, gens.clone()).unwrap();
        let c = g.chain();
        let (res, _) = c.sift(&p);
        prop_assert_eq!(res.is_identity(), closure(&gens, 2).contains(&p));
    }
}
