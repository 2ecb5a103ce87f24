mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use treemono::conjugacy::is_odometer;
use treemono::permgrp::PermGroup;
use treemono::portrait::{
    builtin, compose_families, disjoint_orbit_family, random_y_portrait, relabel, synthesize_model, Portrait, Role,
    BUILTIN_NAMES,
};
use treemono::rng;
use treemono::wreath_core::{eq_at_level, finite_depth_element, Element, LevelPermutation, Permutation};

const DIR: &str = env!("CARGO_MANIFEST_DIR");

fn portrait_file(name: &str) -> Portrait {
    Portrait::parse(&std::fs::read_to_string(format!("{DIR}/portraits/{name}.portrait")).unwrap()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{DIR}/tests/golden/{name}")).unwrap()
}

/// `(source, target) -> count` from the edge lines of a DOT export.
fn dot_edges(dot: &str) -> BTreeMap<(String, String), usize> {
    let mut out = BTreeMap::new();
    for line in dot.lines() {
        let Some((l, r)) = line.trim().strip_suffix(';').and_then(|s| s.split_once(" -> ")) else {
            continue;
        };
        *out.entry((l.trim_matches('"').to_string(), r.trim_matches('"').to_string())).or_insert(0) += 1;
    }
    out
}

fn three_cycle() -> Element {
    finite_depth_element(&LevelPermutation::from_root(&Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap(), 1))
}

#[test]
fn bundled_files_match_builtins() {
    assert_eq!(portrait_file("two-fixed"), builtin("two-fixed").unwrap());
    assert_eq!(portrait_file("fig1"), builtin("fig1").unwrap());
    assert_eq!(portrait_file("period-two"), builtin("basilica-like").unwrap());
    for n in BUILTIN_NAMES {
        assert!(builtin(n).unwrap().validate_y().valid);
    }
    assert!(builtin("nope").is_none());
}

#[test]
fn y_violation_names_vertex() {
    let p = portrait_file("not-y");
    let rep = p.validate_y();
    assert!(!rep.valid);
    assert_eq!(rep.violators, vec![("p".to_string(), 3)]);
    assert!(matches!(synthesize_model(&p), Err(treemono::Error::Precondition(_))));
}

#[test]
fn dot_edge_multiplicities() {
    let p = portrait_file("fig1");
    let edges = dot_edges(&p.export_dot());
    let mut expect = BTreeMap::new();
    for v in 0..p.len() {
        let e = (p.name(v).to_string(), p.name(p.image(v)).to_string());
        *expect.entry(e).or_insert(0) += if p.name(v).starts_with('c') { 2 } else { 1 };
    }
    expect.insert(("inf".to_string(), "inf".to_string()), 3);
    assert_eq!(edges, expect);
    assert_eq!(p.export_dot(), golden("fig1.dot"));
    assert_eq!(format!("{}\n", serde_json::to_string_pretty(&p.to_json()).unwrap()), golden("fig1.json"));
}

#[test]
fn fig1_structure() {
    let p = portrait_file("fig1");
    let c1 = p.index_of("c1").unwrap();
    let c2 = p.index_of("c2").unwrap();
    assert_eq!(p.orbit_params(c1), (2, 3));
    assert_eq!(p.orbit_params(c2), (0, 2));
    assert!(p.disjoint_orbits());
    assert_eq!(p.postcritical().len(), 7);
    assert_eq!(p.incoming_multiplicity(p.index_of("p3").unwrap()), 2);
    assert_eq!(p.preimages(p.index_of("p1").unwrap()), vec![c1]);
}

#[test]
fn model_listings() {
    let m = synthesize_model(&portrait_file("two-fixed")).unwrap();
    assert_eq!(m.listing(), "a=(a,1,1)(1 2); b=(1,1,b)(2 3); r=0");
    for name in ["two-fixed", "period-two", "both-period-two", "fig1"] {
        let listing = synthesize_model(&portrait_file(name)).unwrap().listing();
        assert_eq!(golden(&format!("model-{name}.txt")).lines().next().unwrap(), listing);
    }
}

#[test]
fn families() {
    let f = disjoint_orbit_family(1, 1, Role::A).unwrap();
    assert_eq!(f.machine().unwrap().listing(), "a1=(1 2); a2=(a1,a2,1)");
    let f = disjoint_orbit_family(0, 2, Role::B).unwrap();
    assert_eq!(f.machine().unwrap().listing(), "b1=(1,1,b2)(2 3); b2=(b1,1,1)");
    assert!(disjoint_orbit_family(1, 0, Role::A).is_err());
    let m = compose_families(
        &disjoint_orbit_family(0, 1, Role::A).unwrap(),
        &disjoint_orbit_family(0, 1, Role::B).unwrap(),
    )
    .unwrap();
    assert_eq!(m.listing(), "a=(a,1,1)(1 2); b=(1,1,b)(2 3); r=0");
    let m = compose_families(
        &disjoint_orbit_family(2, 2, Role::A).unwrap(),
        &disjoint_orbit_family(0, 1, Role::B).unwrap(),
    )
    .unwrap();
    assert_eq!(m.r(), 3);
    assert!(m.check().is_empty());
}

#[test]
fn family_matches_portrait_synthesis() {
    // both-period-two is the family pair (0,2):(0,2); compare level-3 groups
    let p = synthesize_model(&portrait_file("both-period-two")).unwrap();
    let f = compose_families(
        &disjoint_orbit_family(0, 2, Role::A).unwrap(),
        &disjoint_orbit_family(0, 2, Role::B).unwrap(),
    )
    .unwrap();
    let gp = PermGroup::new(3, 3, p.machine.level_tables(3).unwrap().to_vec()).unwrap();
    let gf = PermGroup::new(3, 3, f.machine.level_tables(3).unwrap().to_vec()).unwrap();
    assert!(treemono::permgrp::equal_groups(&gp, &gf).unwrap());
}

#[test]
fn parse_errors_carry_positions() {
    let cases = [
        ("critical c1 deg=3\n", 1, 13),
        ("critical c1 deg=2\ncritical c1 deg=2\n", 2, 10),
        ("critical c1 deg=2\nmap c1 -> c1\nmap c1 -> c2\n", 3, 5),
        ("frobnicate x\n", 1, 1),
        ("map inf -> c1\n", 1, 5),
    ];
    for (text, line, column) in cases {
        match Portrait::parse(text) {
            Err(treemono::Error::Parse { line: l, column: c, .. }) => assert_eq!((l, c), (line, column), "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
    assert!(Portrait::parse("critical c1 deg=2\ncritical c2 deg=2\nmap c1 -> c1\n").is_err());
    assert!(Portrait::parse("critical c1 deg=2\ncritical c2 deg=2\nmap c1 -> z\nmap c2 -> c2\n").is_err());
}

#[test]
fn comments_and_blank_lines() {
    let p = Portrait::parse("# hi\n\ncritical c2 deg=2 # second\ncritical c1 deg=2\nmap c2 -> c2\nmap c1 -> c1\n").unwrap();
    assert_eq!(p, builtin("two-fixed").unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn exports_roundtrip(seed in any::<u64>()) {
        let p = random_y_portrait(&mut rng::stream(seed, 0), 8);
        prop_assert_eq!(Portrait::parse(&p.to_dsl()).unwrap(), p.clone());
        prop_assert_eq!(Portrait::from_dot_meta(&p.export_dot()).unwrap(), p.clone());
        prop_assert_eq!(Portrait::from_json(&p.to_json()).unwrap(), p.clone());
    }

    #[test]
    fn synthesized_models_satisfy_identities(seed in any::<u64>()) {
        let p = random_y_portrait(&mut rng::stream(seed, 0), 8);
        prop_assert!(p.validate_y().valid);
        prop_assert!(p.postcritical().len() <= 8);
        let m = synthesize_model(&p).unwrap();
        prop_assert!(m.check().is_empty());
        prop_assert_eq!(m.r(), p.postcritical().len() - 2);
        let a = Element::state(&m.machine, m.a());
        let b = Element::state(&m.machine, m.b());
        for n in 1..=6 {
            prop_assert!(eq_at_level(&a.commutator(&b), &three_cycle(), n).unwrap());
        }
        let all: Vec<usize> = (0..m.machine.len()).collect();
        let prod = all.iter().fold(Element::identity(&m.machine), |acc, &i| acc.mul(&Element::state(&m.machine, i)));
        for n in 1..=5 {
            prop_assert!(is_odometer(&prod, n).unwrap());
        }
    }

    #[test]
    fn relabelling_preserves_the_model(seed in any::<u64>()) {
        let mut r = rng::stream(seed, 0);
        let p = random_y_portrait(&mut r, 6);
        let (q, map) = relabel(&p, &mut r);
        prop_assert_eq!(map.len(), p.len());
        let mp = synthesize_model(&p).unwrap();
        let mq = synthesize_model(&q).unwrap();
        prop_assert_eq!(mp.r(), mq.r());
        let order = |m: &treemono::portrait::ModelGenerators| {
            PermGroup::new(3, 2, m.machine.level_tables(2).unwrap().to_vec()).unwrap().order()
        };
        prop_assert_eq!(order(&mp), order(&mq));
    }
}
