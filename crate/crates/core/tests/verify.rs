mod common;

use num_bigint::BigUint;
use treemono::permgrp::{uniform_sample, wn_generators};
use treemono::portrait::builtin;
use treemono::rng;
use treemono::verify::{
    check_branch, check_class_not_closed, check_commutator_framing, check_conjugacy_oracle, check_filtration,
    check_forms, check_invariable_generation, check_self_replication, check_simultaneous_conjugation, check_torsion,
    check_witness, commutator_framing, example_counterexample_order, forms_witnesses, move_generators,
    order2_correction, self_replication_witness, simultaneous_conjugator, torsion_element, ExperimentReport,
    FamilyParams, ModelGroup, Verdict,
};
use treemono::wreath_core::{LevelPermutation, Vertex};

fn fp(s: &str) -> [FamilyParams; 2] {
    FamilyParams::parse_pair(s).unwrap()
}

fn relation(r: &ExperimentReport, n: usize) -> String {
    let l = r.levels.iter().find(|l| l.n == n).unwrap();
    let t = l
        .trials
        .iter()
        .find(|t| t.witness.as_ref().is_some_and(|w| w["check"] == "comparison"))
        .unwrap();
    t.witness.as_ref().unwrap()["relation"].as_str().unwrap().to_string()
}

/// Every local permutation of `t` is even.
fn in_a3_tower(t: &LevelPermutation) -> bool {
    (0..t.level()).all(|k| {
        (0..3usize.pow(k as u32)).all(|i| t.section_at(&Vertex::from_index(3, k, i)).root().sign() == 1)
    })
}

#[test]
fn conjugated_generating_set_fails_at_level_one() {
    let g = ModelGroup::two_fixed();
    assert_eq!(example_counterexample_order(&g, 1).unwrap(), BigUint::from(2u32));
    assert_eq!(g.level_group(1).unwrap().order(), BigUint::from(6u32));
    for n in 2..=3 {
        assert!(example_counterexample_order(&g, n).unwrap() < g.level_group(n).unwrap().order());
    }
}

#[test]
fn invariable_generation_small() {
    for g in [ModelGroup::two_fixed(), ModelGroup::from_families((0, 2), (0, 1)).unwrap()] {
        let r = check_invariable_generation(&g, 2, 5, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.trial_count(), 10);
    }
}

#[test]
fn branch_index_bounds() {
    for (g, r) in [
        (ModelGroup::two_fixed(), 0),
        (ModelGroup::from_families((0, 2), (0, 1)).unwrap(), 1),
        (ModelGroup::from_portrait(&builtin("basilica-like").unwrap()).unwrap(), 1),
    ] {
        assert_eq!(g.r(), r);
        let rep = check_branch(&g, 3).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{}", rep.to_text());
        for n in 1..=3 {
            let idx = g.level_group(n).unwrap().order() / g.derived_group(n).unwrap().order();
            assert!(idx <= BigUint::from(1u32 << (r + 2)));
        }
    }
    assert!(check_branch(&ModelGroup::two_fixed(), 0).is_err());
}

#[test]
fn corrections_square_to_one() {
    for g in [ModelGroup::two_fixed(), ModelGroup::from_families((1, 2), (0, 2)).unwrap()] {
        for gen in 0..g.machine().len() {
            for k in 1..=4 {
                let (p, q) = order2_correction(&g, gen, k).unwrap();
                let t = &g.generator_tables(k).unwrap()[gen];
                let x = &(&p * t) * &q;
                assert!(x.pow(2).is_identity(), "gen {gen} level {k}");
                assert!(in_a3_tower(&p) && in_a3_tower(&q));
            }
        }
        assert!(order2_correction(&g, 99, 2).is_err());
    }
}

#[test]
fn torsion_orders() {
    let g = ModelGroup::two_fixed();
    for (m, n3) in [(0, 1), (0, 3), (1, 0), (2, 0), (1, 1), (2, 2), (3, 1)] {
        let t = torsion_element(&g, m, n3).unwrap();
        let want = BigUint::from(2u32).pow(m as u32) * BigUint::from(3u32).pow(n3 as u32);
        assert_eq!(t.order, want);
        assert_eq!(t.table.order(), want);
        assert!(t.k_star <= m + n3 + 4);
        assert!(t.table.truncate(t.k_star).order() == want);
        if t.k_star > 0 {
            assert!(t.table.truncate(t.k_star - 1).order() < want);
        }
        assert_eq!(check_torsion(&g, m, n3).unwrap().verdict, Verdict::Pass);
    }
}

#[test]
fn example_filtration() {
    let n = 3;
    let strict = check_filtration(fp("0,1:0,1"), fp("0,2:0,1"), n).unwrap();
    assert_eq!(strict.verdict, Verdict::Pass);
    assert_eq!(relation(&strict, 1), "equal");
    for k in 2..=n {
        assert_eq!(relation(&strict, k), "strict");
    }
    for (sub, sup) in [("0,2:0,1", "0,2:0,2"), ("0,1:0,2", "0,2:0,1"), ("0,1:0,2", "0,2:0,2")] {
        let r = check_filtration(fp(sub), fp(sup), n).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        for k in 1..=n {
            assert_eq!(relation(&r, k), "equal", "{sub} vs {sup} at {k}");
        }
    }
}

#[test]
fn filtration_hypothesis_unmet_is_not_applicable() {
    let r = check_filtration(fp("0,2:0,1"), fp("0,3:0,1"), 2).unwrap();
    assert_eq!(r.verdict, Verdict::NotApplicable);
}

#[test]
fn family_params_parse() {
    assert_eq!(FamilyParams::parse("1,2").unwrap().to_string(), "1,2");
    assert!(FamilyParams::parse("1,0").is_err());
    assert!(FamilyParams::parse("x").is_err());
    assert!(FamilyParams::parse_pair("0,1").is_err());
}

#[test]
fn move_generators_relate_families() {
    for (s, m) in [(0, 1), (0, 2), (1, 1), (2, 3)] {
        let a = ModelGroup::from_families((s, m), (0, 1)).unwrap();
        let b = ModelGroup::from_families((0, 1), (s, m)).unwrap();
        for n in 1..=4 {
            let mv = move_generators(s, m, n).unwrap();
            let ta = a.generator_tables(n).unwrap();
            let tb = b.generator_tables(n).unwrap();
            let k = s + m;
            for j in 0..k {
                // a-family member j sits at 0 (head) or 1 + j; b-family at 1 or k + j
                let ia = if j == 0 { 0 } else { 1 + j };
                let ib = if j == 0 { 1 } else { 1 + j };
                assert_eq!(&mv[j] * &tb[ib], ta[ia], "(s,m)=({s},{m}) j={j} n={n}");
                assert!(in_a3_tower(&mv[j]));
            }
        }
    }
}

#[test]
fn simultaneous_conjugation_small_levels() {
    let g = ModelGroup::two_fixed();
    for n in 1..=2 {
        assert_eq!(check_simultaneous_conjugation(&g, n, 4, 9).unwrap().verdict, Verdict::Pass);
    }
    let g = ModelGroup::from_families((0, 2), (0, 1)).unwrap();
    assert_eq!(check_simultaneous_conjugation(&g, 2, 3, 1).unwrap().verdict, Verdict::Pass);
}

#[test]
fn simultaneous_conjugation_with_common_conjugator() {
    // H = (w x) G_n (w x)^{-1} always contains a transitive element
    let g = ModelGroup::two_fixed();
    let n = 3;
    let chain = g.level_group(n).unwrap().chain();
    let wn = wn_generators(n).unwrap().chain();
    for seed in 0..5 {
        let mut r = rng::stream(seed, 0);
        let v = &uniform_sample(&wn, &mut r) * &uniform_sample(&chain, &mut r);
        let mats: Vec<LevelPermutation> = g.generator_tables(n).unwrap().iter().map(|t| t.conjugated_by(&v)).collect();
        let wit = simultaneous_conjugator(&g, n, &mats).unwrap().expect("construction succeeds");
        assert_eq!(check_witness(&g, n, &mats, &wit).unwrap(), None);
    }
}

#[test]
fn simultaneous_conjugator_rejects_malformed_input() {
    let g = ModelGroup::two_fixed();
    assert!(simultaneous_conjugator(&g, 2, &[LevelPermutation::identity(3, 2)]).is_err());
}

#[test]
fn replication_forms_and_framing() {
    for g in [ModelGroup::two_fixed(), ModelGroup::from_portrait(&builtin("basilica-like").unwrap()).unwrap()] {
        assert_eq!(check_self_replication(&g, 3).unwrap().verdict, Verdict::Pass);
        assert_eq!(check_forms(&g, 2).unwrap().verdict, Verdict::Pass);
        assert_eq!(check_commutator_framing(&g, 2, 6, 5).unwrap().verdict, Verdict::Pass);
        for l in 0..g.machine().len() {
            let w = self_replication_witness(&g, l).unwrap().restrict(3).unwrap();
            assert!(w.root().is_identity());
            assert_eq!(w.section(0), g.generator_tables(2).unwrap()[l]);
            assert!(w.section(2).is_identity());
            assert_eq!(forms_witnesses(&g, l).unwrap().forms.len(), 6);
        }
    }
    let g = ModelGroup::two_fixed();
    let h = g.generator_tables(2).unwrap()[0].clone();
    let c = commutator_framing(&g, &h).unwrap().unwrap();
    assert_eq!(c.section(0), h);
    assert_eq!(c.section(1), h.inverse());
    assert!(c.section(2).is_identity() && c.root().is_identity());
}

#[test]
fn class_not_closed() {
    let g = ModelGroup::two_fixed();
    assert_eq!(check_class_not_closed(&g, 1, 0).unwrap().verdict, Verdict::NotApplicable);
    let r = check_class_not_closed(&g, 2, 0).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    let w = &r.levels[0].trials[0].witness.as_ref().unwrap();
    assert_eq!(w["section_closure_violated"], true);
    assert_eq!(w["control"], true);
}

#[test]
fn conjugacy_oracle_small() {
    for n in 1..=2 {
        assert_eq!(check_conjugacy_oracle(n, 20, 2).unwrap().verdict, Verdict::Pass);
    }
    assert!(matches!(check_conjugacy_oracle(3, 1, 0), Err(treemono::Error::Resource { .. })));
}

#[test]
fn group_level_cap_is_enforced() {
    let g = ModelGroup::two_fixed();
    let cap = treemono::limits::group_level_cap();
    assert!(matches!(g.level_group(cap + 1), Err(treemono::Error::Resource { .. })));
}

#[test]
fn lifts_have_prescribed_sections() {
    let g = ModelGroup::two_fixed();
    let chain = g.level_group(2).unwrap().chain();
    let mut r = rng::stream(8, 0);
    let id = LevelPermutation::identity(3, 2);
    for _ in 0..5 {
        let h = uniform_sample(&chain, &mut r);
        let l = g.lift(3, [Some(&h), None, Some(&id)]).unwrap().unwrap();
        assert!(l.root().is_identity());
        assert_eq!(l.section(0), h);
        assert!(l.section(2).is_identity());
        assert!(g.level_group(3).unwrap().contains(&l).unwrap());
    }
}

#[test]
fn reports_roundtrip_and_are_reproducible() {
    let g = ModelGroup::two_fixed();
    let a = check_invariable_generation(&g, 2, 3, 42).unwrap();
    let b = check_invariable_generation(&ModelGroup::two_fixed(), 2, 3, 42).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(ExperimentReport::from_json(&a.to_json().unwrap()).unwrap(), a);
}
