use serde_json::json;

use super::{tuple, ExperimentReport, LevelReport, ModelGroup, TrialOutcome, Verdict};
use crate::conjugacy::conjugate_levelwise;
use crate::permgrp::{equal_groups, uniform_sample, wn_generators, PermGroup};
use crate::wreath_core::{Child, LevelPermutation, Permutation};
use crate::{limits, rng, Result};

/// Uniform elements of `H` inspected when looking for a transitive one.
const CERTIFY_SAMPLES: usize = 400;
/// Draws allowed per requested trial before giving up.
const DRAWS_PER_TRIAL: usize = 50;

/// `w ∈ W_n` and `X_ℓ ∈ G_n` with `L_ℓ = (w X_ℓ) ℓ (w X_ℓ)^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimConjWitness {
    pub w: LevelPermutation,
    pub x: Vec<LevelPermutation>,
}

/// Why the procedure stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimConjFailure {
    /// The input cannot satisfy the transitivity hypothesis.
    Hypothesis(String),
    /// A step that the hypothesis guarantees did not go through.
    Procedure(String),
}

type Step<T> = std::result::Result<T, SimConjFailure>;

fn all_s3() -> Vec<Permutation> {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
        .iter()
        .map(|im| Permutation::from_images(im.to_vec()).expect("permutation of 3"))
        .collect()
}

/// Runs the level-by-level construction for `mats`, one level-`n` table per
/// generator (state order), each conjugate in `W_n` to that generator.
pub fn simultaneous_conjugator(
    g: &ModelGroup,
    n: usize,
    mats: &[LevelPermutation],
) -> Result<std::result::Result<SimConjWitness, SimConjFailure>> {
    limits::check_group_level(n, "simultaneous_conjugator")?;
    if mats.len() != g.machine().len() || mats.iter().any(|m| m.degree() != 3 || m.level() != n) {
        return Err(crate::Error::arg("need one level-n table per generator"));
    }
    descend(g, n, mats.to_vec())
}

fn descend(g: &ModelGroup, n: usize, mats: Vec<LevelPermutation>) -> Result<Step<SimConjWitness>> {
    if n == 0 {
        let id = LevelPermutation::identity(3, 0);
        return Ok(Ok(SimConjWitness {
            w: id.clone(),
            x: vec![id; mats.len()],
        }));
    }
    let m = g.machine();
    let (ia, ib) = (g.gens().a(), g.gens().b());
    let cs: Vec<usize> = g.gens().cs().collect();
    let ra = mats[ia].root();
    let rb = mats[ib].root();
    if ra.sign() != -1 || rb.sign() != -1 || ra == rb {
        return Ok(Err(SimConjFailure::Hypothesis(
            "first-level actions of A and B are not distinct transpositions".into(),
        )));
    }
    if cs.iter().any(|&i| !mats[i].root().is_identity()) {
        return Ok(Err(SimConjFailure::Procedure("C with nontrivial root".into())));
    }
    // Root normalization.
    let (t12, t23) = (
        Permutation::from_cycles(3, &[&[1, 2]]).expect("(1 2)"),
        Permutation::from_cycles(3, &[&[2, 3]]).expect("(2 3)"),
    );
    let rho = all_s3()
        .into_iter()
        .find(|p| &(p * &ra) * &p.inverse() == t12 && &(p * &rb) * &p.inverse() == t23);
    let Some(rho) = rho else {
        return Ok(Err(SimConjFailure::Procedure("no root normalization".into())));
    };
    let r = LevelPermutation::from_root(&rho, n);
    let framed: Vec<LevelPermutation> = mats.iter().map(|x| x.conjugated_by(&r)).collect();
    // The (u2, 1, v2) move.
    let id = LevelPermutation::identity(3, n - 1);
    let u2 = framed[ia].section(1);
    let v2 = framed[ib].section(1);
    let mv = tuple([&u2, &id, &v2]);
    let frame = &mv * &r;
    let mut cur: Vec<LevelPermutation> = framed.iter().map(|x| x.conjugated_by(&mv)).collect();
    let (a1, b1) = (cur[ia].clone(), cur[ib].clone());
    if !a1.section(1).is_identity() || !a1.section(2).is_identity() {
        return Ok(Err(SimConjFailure::Procedure("A not of the form (α,1,1)(1 2)".into())));
    }
    if !b1.section(0).is_identity() || !b1.section(1).is_identity() {
        return Ok(Err(SimConjFailure::Procedure("B not of the form (1,1,β)(2 3)".into())));
    }
    // Align the sections of each C by an element of ⟨A, B⟩.
    let targets = g.generator_tables(n - 1)?;
    let child_table = |c: Child| match c {
        Child::Identity => id.clone(),
        Child::State(j) => targets[j].clone(),
    };
    let mut aligners = Vec::with_capacity(cs.len());
    for &i in &cs {
        let want: Vec<LevelPermutation> = m.state(i).children.iter().map(|&c| child_table(c)).collect();
        let secs = cur[i].sections();
        let mut mu = None;
        for p in all_s3() {
            let mut ok = true;
            for x in 0..3 {
                if conjugate_levelwise(&secs[p.image(x)], &want[x])?.is_none() {
                    ok = false;
                    break;
                }
            }
            if ok {
                mu = Some(p);
                break;
            }
        }
        let Some(mu) = mu else {
            return Ok(Err(SimConjFailure::Procedure(format!(
                "sections of {} match no arrangement",
                m.state(i).name
            ))));
        };
        let gi = element_with_root(&a1, &b1, &mu);
        cur[i] = cur[i].conjugated_by(&gi);
        aligners.push(gi);
    }
    // Sections form a tuple of the same kind one level down.
    let mut sub = vec![id.clone(); m.len()];
    for (p, st) in m.states().iter().enumerate() {
        for (x, &c) in st.children.iter().enumerate() {
            if let Child::State(j) = c {
                sub[j] = cur[p].section(x);
            }
        }
    }
    let inner = match descend(g, n - 1, sub)? {
        Ok(w) => w,
        Err(e) => return Ok(Err(e)),
    };
    let wn = tuple([&inner.w, &inner.w, &inner.w]);
    let mut xs = vec![LevelPermutation::identity(3, n); m.len()];
    for (p, st) in m.states().iter().enumerate() {
        let prescribed: Vec<Option<LevelPermutation>> = if p == ia {
            match st.children[0] {
                Child::State(j) => vec![Some(inner.x[j].clone()), Some(inner.x[j].clone()), None],
                Child::Identity => vec![None, None, None],
            }
        } else if p == ib {
            match st.children[2] {
                Child::State(j) => vec![None, Some(inner.x[j].clone()), Some(inner.x[j].clone())],
                Child::Identity => vec![None, None, None],
            }
        } else {
            st.children
                .iter()
                .map(|c| match c {
                    Child::State(j) => Some(inner.x[*j].clone()),
                    Child::Identity => None,
                })
                .collect()
        };
        let Some(z) = g.lift(n, [prescribed[0].as_ref(), prescribed[1].as_ref(), prescribed[2].as_ref()])? else {
            return Ok(Err(SimConjFailure::Procedure(format!(
                "no element of G_{n} with the sections required for {}",
                st.name
            ))));
        };
        xs[p] = z;
    }
    let gn = g.level_group(n)?;
    let wn_inv = wn.inverse();
    for (k, &i) in cs.iter().enumerate() {
        let h = &(&wn_inv * &aligners[k]) * &wn;
        if !gn.contains(&h)? {
            return Ok(Err(SimConjFailure::Procedure("aligning element leaves G_n".into())));
        }
        xs[i] = &h.inverse() * &xs[i];
    }
    Ok(Ok(SimConjWitness {
        w: &frame.inverse() * &wn,
        x: xs,
    }))
}

/// Shortest product of `a` and `b` (breadth first) with root `mu`.
fn element_with_root(a: &LevelPermutation, b: &LevelPermutation, mu: &Permutation) -> LevelPermutation {
    let mut frontier = vec![LevelPermutation::identity(3, a.level())];
    let mut seen = vec![frontier[0].root()];
    loop {
        for e in &frontier {
            if e.root() == *mu {
                return e.clone();
            }
        }
        let mut next = Vec::new();
        for e in &frontier {
            for s in [a, b] {
                let f = e * s;
                if !seen.contains(&f.root()) {
                    seen.push(f.root());
                    next.push(f);
                }
            }
        }
        frontier = next;
    }
}

/// Checks `L_ℓ = (w X_ℓ) ℓ (w X_ℓ)^{-1}`, `X_ℓ ∈ G_n` and `w^{-1} H w = G_n`;
/// returns the first violated condition.
pub fn check_witness(g: &ModelGroup, n: usize, mats: &[LevelPermutation], wit: &SimConjWitness) -> Result<Option<String>> {
    let gn = g.level_group(n)?;
    let tables = g.generator_tables(n)?;
    for (i, l) in mats.iter().enumerate() {
        if !gn.contains(&wit.x[i])? {
            return Ok(Some(format!("X for {} not in G_n", g.machine().state(i).name)));
        }
        let v = &wit.w * &wit.x[i];
        if tables[i].conjugated_by(&v) != *l {
            return Ok(Some(format!("conjugation fails for {}", g.machine().state(i).name)));
        }
    }
    let winv = wit.w.inverse();
    let back = PermGroup::new(3, n, mats.iter().map(|l| l.conjugated_by(&winv)).collect())?;
    if !equal_groups(&back, &gn)? {
        return Ok(Some("conjugated group differs from G_n".into()));
    }
    Ok(None)
}

/// Whether `H` visibly contains a transitive element.
fn certify(h: &PermGroup, r: &mut rng::Rng) -> bool {
    let chain = h.chain();
    let npts = h.npoints();
    (0..CERTIFY_SAMPLES).any(|_| {
        let e = uniform_sample(&chain, r);
        e.cycles().first().map(|c| c.len()) == Some(npts)
    })
}

/// Trials of simultaneous conjugation at level `n`: each generator is
/// conjugated by an independent uniform element of `W_n` and the
/// construction must recover `w` and `X_ℓ`.
///
/// A draw whose group is certified to hold a transitive element must
/// succeed; uncertified draws count only when the construction succeeds.
pub fn check_simultaneous_conjugation(g: &ModelGroup, n: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    limits::check_group_level(n, "check_simultaneous_conjugation")?;
    let wn = wn_generators(n)?.chain();
    let tables = g.generator_tables(n)?;
    let mut outcomes = Vec::with_capacity(trials);
    let mut draw = 0usize;
    let mut rejected = 0usize;
    while outcomes.len() < trials && draw < trials.max(1) * DRAWS_PER_TRIAL {
        let mut r = rng::stream(seed, draw as u64);
        draw += 1;
        let mats: Vec<LevelPermutation> = tables
            .iter()
            .map(|t| t.conjugated_by(&uniform_sample(&wn, &mut r)))
            .collect();
        let h = PermGroup::new(3, n, mats.clone())?;
        let certified = certify(&h, &mut r);
        let outcome = simultaneous_conjugator(g, n, &mats)?;
        let failure = match &outcome {
            Ok(wit) => check_witness(g, n, &mats, wit)?,
            Err(SimConjFailure::Hypothesis(s)) | Err(SimConjFailure::Procedure(s)) => Some(s.clone()),
        };
        match failure {
            None => outcomes.push(TrialOutcome::new(
                Verdict::Pass,
                Some(json!({ "draw": draw - 1, "certified": certified })),
            )),
            Some(reason) if certified => {
                outcomes.push(TrialOutcome::new(
                    Verdict::Counterexample,
                    Some(json!({ "draw": draw - 1, "certified": true, "reason": reason })),
                ));
                break;
            }
            Some(_) => rejected += 1,
        }
    }
    let params = json!({
        "model": g.gens().listing(),
        "level": n,
        "trials": trials,
        "draws": draw,
        "rejected": rejected,
    });
    let report = ExperimentReport::new("simconj", params, seed, vec![LevelReport::new(n, outcomes)]);
    Ok(report)
}
