//! Acceptance suite: one line per criterion, each checked against its time
//! limit. Exits nonzero if any criterion fails.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use treemono::conjugacy::is_odometer;
use treemono::permgrp::wn_generators;
use treemono::portrait::{builtin, random_y_portrait, synthesize_model, Portrait};
use treemono::rng;
use treemono::verify::{
    check_branch, check_class_not_closed, check_conjugacy_oracle, check_filtration, check_invariable_generation,
    check_simultaneous_conjugation, check_torsion, example_counterexample_order, ExperimentReport, FamilyParams,
    ModelGroup, Verdict,
};
use treemono::wreath_core::{eq_at_level, finite_depth_element, Element, LevelPermutation, Permutation};

type Check = fn() -> Result<String, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn groups_r012() -> Result<Vec<(usize, ModelGroup)>, String> {
    let both = Portrait::parse(include_str!("../portraits/both-period-two.portrait")).map_err(err)?;
    let out = vec![
        (0, ModelGroup::two_fixed()),
        (1, ModelGroup::from_portrait(&builtin("basilica-like").unwrap()).map_err(err)?),
        (2, ModelGroup::from_portrait(&both).map_err(err)?),
    ];
    for (r, g) in &out {
        if g.r() != *r {
            return Err(format!("expected r={r}, model has r={}", g.r()));
        }
    }
    Ok(out)
}

fn corpus() -> Vec<Portrait> {
    (0..20).map(|i| random_y_portrait(&mut rng::stream(2024, i), 8)).collect()
}

fn c1_wreath_orders() -> Result<String, String> {
    let mut got = Vec::new();
    for n in 1..=3u32 {
        let o = wn_generators(n as usize).map_err(err)?.order();
        let want = BigUint::from(6u32).pow((3u32.pow(n) - 1) / 2);
        if o != want {
            return Err(format!("n={n}: {o} != {want}"));
        }
        got.push(o.to_string());
    }
    Ok(got.join(", "))
}

fn c2_commutator() -> Result<String, String> {
    let t = finite_depth_element(&LevelPermutation::from_root(
        &Permutation::from_cycles(3, &[&[1, 2, 3]]).map_err(err)?,
        1,
    ));
    let ps = corpus();
    for (i, p) in ps.iter().enumerate() {
        let m = synthesize_model(p).map_err(err)?;
        let a = Element::state(&m.machine, m.a());
        let b = Element::state(&m.machine, m.b());
        for n in 1..=6 {
            if !eq_at_level(&a.commutator(&b), &t, n).map_err(err)? {
                return Err(format!("portrait {i} level {n}"));
            }
        }
    }
    Ok(format!("{} portraits, n <= 6", ps.len()))
}

fn c3_odometer() -> Result<String, String> {
    let ps = corpus();
    for (i, p) in ps.iter().enumerate() {
        let m = synthesize_model(p).map_err(err)?;
        let mut r = rng::stream(77, i as u64);
        for k in 0..5 {
            let mut idx: Vec<usize> = (0..m.machine.len()).collect();
            idx.shuffle(&mut r);
            let prod = idx
                .iter()
                .fold(Element::identity(&m.machine), |acc, &j| acc.mul(&Element::state(&m.machine, j)));
            for n in 1..=5 {
                if !is_odometer(&prod, n).map_err(err)? {
                    return Err(format!("portrait {i} order {k} level {n}"));
                }
            }
        }
    }
    Ok(format!("{} portraits x 5 orders, n <= 5", ps.len()))
}

fn c4_invgen() -> Result<String, String> {
    let mut trials = 0;
    for (r, g) in groups_r012()? {
        let rep = check_invariable_generation(&g, 4, 100, 4).map_err(err)?;
        if rep.verdict != Verdict::Pass {
            return Err(format!("r={r}: exit 3\n{}", rep.to_text()));
        }
        trials += rep.trial_count();
    }
    Ok(format!("{trials} trials over r = 0,1,2, levels 1..4"))
}

fn c5_counterexample() -> Result<String, String> {
    let g = ModelGroup::two_fixed();
    let sub = example_counterexample_order(&g, 1).map_err(err)?;
    let full = g.level_group(1).map_err(err)?.order();
    if sub != BigUint::from(2u32) || full != BigUint::from(6u32) {
        return Err(format!("orders {sub} vs {full}"));
    }
    Ok(format!("|<a, b^(ba)>_1| = {sub} != {full} = |G_1|"))
}

fn c6_oracle() -> Result<String, String> {
    let rep = check_conjugacy_oracle(2, 200, 6).map_err(err)?;
    if rep.verdict != Verdict::Pass {
        return Err(rep.to_text());
    }
    Ok(format!(
        "{} pairs, {} conjugate, {} conjugators each",
        rep.trial_count(),
        rep.params["conjugate_pairs"],
        rep.params["conjugators"]
    ))
}

fn c7_simconj() -> Result<String, String> {
    let groups = [
        ModelGroup::two_fixed(),
        ModelGroup::from_portrait(&builtin("basilica-like").unwrap()).map_err(err)?,
    ];
    let mut notes = Vec::new();
    for g in &groups {
        let rep = check_simultaneous_conjugation(g, 3, 25, 7).map_err(err)?;
        if rep.verdict != Verdict::Pass || rep.trial_count() != 25 {
            return Err(rep.to_text());
        }
        notes.push(format!("r={}: 25/25 (draws {})", g.r(), rep.params["draws"]));
    }
    Ok(notes.join("; "))
}

fn c8_branch() -> Result<String, String> {
    let mut notes = Vec::new();
    for (r, g) in groups_r012()? {
        let rep = check_branch(&g, 4).map_err(err)?;
        if rep.verdict != Verdict::Pass {
            return Err(format!("r={r}\n{}", rep.to_text()));
        }
        let idx = g.level_group(4).map_err(err)?.order() / g.derived_group(4).map_err(err)?.order();
        notes.push(format!("r={r}: index {idx} <= {}", 1u32 << (r + 2)));
    }
    Ok(notes.join("; "))
}

fn c9_torsion() -> Result<String, String> {
    let g = ModelGroup::two_fixed();
    let mut cases: Vec<(usize, usize)> = (1..=4).map(|n3| (0, n3)).chain((1..=4).map(|m| (m, 0))).collect();
    for m in 1..=3 {
        for n3 in 1..=3 {
            cases.push((m, n3));
        }
    }
    let mut worst = 0;
    for &(m, n3) in &cases {
        let rep = check_torsion(&g, m, n3).map_err(err)?;
        if rep.verdict != Verdict::Pass {
            return Err(format!("(m,n3)=({m},{n3})\n{}", rep.to_text()));
        }
        let k = rep.levels[0].trials[0].witness.as_ref().unwrap()["k_star"].as_u64().unwrap() as usize;
        worst = worst.max(k as isize - (m + n3 + 4) as isize);
    }
    Ok(format!("{} (m,n3) pairs, max k* - bound = {worst}", cases.len()))
}

fn c10_filtration() -> Result<String, String> {
    let fp = |s: &str| FamilyParams::parse_pair(s).map_err(err);
    let relation = |rep: &ExperimentReport, n: usize, check: &str| -> serde_json::Value {
        rep.levels
            .iter()
            .find(|l| l.n == n)
            .and_then(|l| l.trials.iter().find(|t| t.witness.as_ref().is_some_and(|w| w["check"] == check)))
            .and_then(|t| t.witness.clone())
            .unwrap_or(serde_json::Value::Null)
    };
    let n = 4;
    let strict = check_filtration(fp("0,1:0,1")?, fp("0,1:0,2")?, n).map_err(err)?;
    if strict.verdict != Verdict::Pass {
        return Err(strict.to_text());
    }
    for k in 2..=n {
        if relation(&strict, k, "comparison")["relation"] != "strict" {
            return Err(format!("level {k} not strict"));
        }
        let u = relation(&strict, k, "upsilon");
        // leading (Υ_0, Υ_1) of each generator profile
        let lead = |key: &str| -> Vec<Vec<i64>> {
            u[key]
                .as_array()
                .map(|v| v.iter().map(|p| p.as_array().unwrap()[..2].iter().map(|x| x.as_i64().unwrap()).collect()).collect())
                .unwrap_or_default()
        };
        let sub_ok = lead("sub").iter().all(|p| *p == [-1, -1]);
        let sup = lead("sup");
        let sup_ok = sup.iter().any(|p| *p == [-1, 1] || *p == [1, -1]);
        if !(sub_ok && sup_ok && u["strict"] == true) {
            return Err(format!("level {k}: sign profiles {u}"));
        }
    }
    for (a, b) in [("0,1:0,2", "0,2:0,1"), ("0,2:0,1", "0,2:0,2"), ("0,1:0,2", "0,2:0,2")] {
        let rep = check_filtration(fp(a)?, fp(b)?, n).map_err(err)?;
        for k in 1..=n {
            if rep.verdict != Verdict::Pass || relation(&rep, k, "comparison")["relation"] != "equal" {
                return Err(format!("{a} vs {b} at level {k}"));
            }
        }
    }
    Ok("<a,b> < <a,b1,b2> = <a1,a2,b> = <a1,a2,b1,b2> for n = 2..4 (equal at n = 1)".into())
}

fn hash(bytes: &[u8]) -> u64 {
    let mut h = DefaultHasher::new();
    bytes.hash(&mut h);
    h.finish()
}

fn c11_determinism() -> Result<String, String> {
    let reports = || -> Result<Vec<String>, String> {
        let g = ModelGroup::two_fixed();
        let fp = |s: &str| FamilyParams::parse_pair(s).unwrap();
        [
            check_invariable_generation(&g, 3, 10, 11),
            check_simultaneous_conjugation(&g, 3, 5, 11),
            check_class_not_closed(&g, 3, 11),
            check_conjugacy_oracle(2, 20, 11),
            check_branch(&g, 3),
            check_torsion(&g, 2, 2),
            check_filtration(fp("0,1:0,1"), fp("0,2:0,1"), 3),
        ]
        .into_iter()
        .map(|r| r.and_then(|r| r.to_json()).map_err(err))
        .collect()
    };
    let (a, b) = (reports()?, reports()?);
    for (x, y) in a.iter().zip(&b) {
        if hash(x.as_bytes()) != hash(y.as_bytes()) {
            return Err(format!("report differs:\n{x}"));
        }
    }
    let args = ["verify", "simconj", "--level", "3", "--trials", "5", "--seed", "3", "--format", "json"];
    let run = || Command::new(env!("CARGO_BIN_EXE_treemono")).args(args).output().map_err(err);
    let (o1, o2) = (run()?, run()?);
    if o1.status.code() != Some(0) || hash(&o1.stdout) != hash(&o2.stdout) {
        return Err("CLI output differs between runs".into());
    }
    Ok(format!("{} library reports + 1 CLI report hash-identical", a.len()))
}

fn main() {
    let criteria: [(&str, u64, Check); 11] = [
        ("wreath order formula", 10, c1_wreath_orders),
        ("commutator identity", 5, c2_commutator),
        ("odometer product", 10, c3_odometer),
        ("invariable generation", 300, c4_invgen),
        ("counterexample fidelity", 1, c5_counterexample),
        ("conjugacy oracle equivalence", 60, c6_oracle),
        ("simultaneous conjugation", 180, c7_simconj),
        ("branch index", 180, c8_branch),
        ("torsion orders", 120, c9_torsion),
        ("filtration", 120, c10_filtration),
        ("determinism", 60, c11_determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (status, detail) = match (&result, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over time limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {name} [{:.2}s / {limit}s]: {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
