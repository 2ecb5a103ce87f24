use serde_json::json;

use super::{tuple, ExperimentReport, LevelReport, ModelGroup, TrialOutcome, Verdict};
use crate::permgrp::uniform_sample;
use crate::wreath_core::{Child, Element, LevelPermutation};
use crate::{limits, rng, Error, Result};

/// The six section patterns: `(slot holding g, slot holding 1)`, 0-based.
const FORMS: [(&str, usize, usize); 6] = [
    ("(g,*,1)", 0, 2),
    ("(g,1,*)", 0, 1),
    ("(*,1,g)", 2, 1),
    ("(*,g,1)", 1, 2),
    ("(1,*,g)", 2, 0),
    ("(1,g,*)", 1, 0),
];

/// A word of the form `(ℓ, *, 1)` for the generator with index `l`.
pub fn self_replication_witness(g: &ModelGroup, l: usize) -> Result<Element> {
    let m = g.machine();
    if l >= m.len() {
        return Err(Error::arg(format!("no generator with index {l}")));
    }
    let (p, j) = m
        .states()
        .iter()
        .enumerate()
        .find_map(|(p, s)| s.children.iter().position(|&c| c == Child::State(l)).map(|j| (p, j)))
        .ok_or_else(|| Error::Precondition(format!("{} is not a section", m.state(l).name)))?;
    let (a, b) = (g.generator(g.gens().a()), g.generator(g.gens().b()));
    let t = a.commutator(&b);
    Ok(if p == g.gens().a() {
        a.pow(2)
    } else if p == g.gens().b() {
        b.pow(2).conjugated_by(&t)
    } else {
        let w = g.generator(p).conjugated_by(&t.pow(j as i64));
        if m.state(p).children[(j + 2) % 3] == Child::Identity {
            w
        } else {
            w.conjugated_by(&b)
        }
    })
}

/// Witnesses for every section pattern, for one generator.
#[derive(Clone, Debug)]
pub struct FormWitnesses {
    pub generator: usize,
    pub forms: Vec<(&'static str, Element)>,
}

/// A short word in `a, b` whose root maps `t` to slot 0 and `u` to slot 2.
fn frame_word(g: &ModelGroup, t: usize, u: usize) -> Element {
    let (a, b) = (g.generator(g.gens().a()), g.generator(g.gens().b()));
    let mut words = vec![Element::identity(g.machine())];
    let mut start = 0;
    loop {
        for w in &words[start..] {
            let r = w.root();
            if r.image(t) == 0 && r.image(u) == 2 {
                return w.clone();
            }
        }
        let next: Vec<Element> = words[start..]
            .iter()
            .flat_map(|w| [w.mul(&a), w.mul(&b)])
            .collect();
        start = words.len();
        words.extend(next);
    }
}

/// `(w, *, 1)` for an arbitrary word `w`, letter by letter.
fn replicate_word(g: &ModelGroup, w: &Element) -> Result<Element> {
    let mut out = Element::identity(g.machine());
    for l in w.word() {
        let base = self_replication_witness(g, l.state)?;
        out = out.mul(&if l.inverse { base.inverse() } else { base });
    }
    Ok(out)
}

/// All six section patterns for generator `l`, by conjugating a
/// replication witness with a word of suitable root.
pub fn forms_witnesses(g: &ModelGroup, l: usize) -> Result<FormWitnesses> {
    let ell = g.generator(l);
    let mut forms = Vec::with_capacity(FORMS.len());
    for (name, t, u) in FORMS {
        let h = frame_word(g, t, u);
        let ht = h.section_letter(t);
        let inner = ell.conjugated_by(&ht.inverse());
        forms.push((name, replicate_word(g, &inner)?.conjugated_by(&h)));
    }
    Ok(FormWitnesses { generator: l, forms })
}

/// Whether the level-`n+1` table has trivial root, `h` in slot `t` and the
/// identity in slot `u`.
fn has_form(w: &LevelPermutation, h: &LevelPermutation, t: usize, u: usize) -> bool {
    w.root().is_identity() && w.section(t) == *h && w.section(u).is_identity()
}

fn member_if_small(g: &ModelGroup, x: &LevelPermutation) -> Result<Option<bool>> {
    if x.level() > limits::group_level_cap() {
        return Ok(None);
    }
    Ok(Some(g.level_group(x.level())?.contains(x)?))
}

/// Replication witnesses of every generator at levels `1..=n`.
pub fn check_self_replication(g: &ModelGroup, n: usize) -> Result<ExperimentReport> {
    let mut levels = Vec::new();
    for k in 1..=n {
        let tables = g.generator_tables(k)?;
        let mut trials = Vec::new();
        for l in 0..g.machine().len() {
            let w = self_replication_witness(g, l)?.restrict(k + 1)?;
            let shape = has_form(&w, &tables[l], 0, 2);
            let member = member_if_small(g, &w)?;
            trials.push(TrialOutcome::new(
                Verdict::from_bool(shape && member != Some(false)),
                Some(json!({ "generator": g.machine().state(l).name, "member": member })),
            ));
        }
        levels.push(LevelReport::new(k, trials));
    }
    let params = json!({ "model": g.gens().listing(), "level": n });
    Ok(ExperimentReport::new("self-replication", params, 0, levels))
}

/// The six section patterns for every generator at levels `1..=n`.
pub fn check_forms(g: &ModelGroup, n: usize) -> Result<ExperimentReport> {
    let witnesses: Vec<FormWitnesses> = (0..g.machine().len())
        .map(|l| forms_witnesses(g, l))
        .collect::<Result<_>>()?;
    let mut levels = Vec::new();
    for k in 1..=n {
        let tables = g.generator_tables(k)?;
        let mut trials = Vec::new();
        for fw in &witnesses {
            for ((name, w), (_, t, u)) in fw.forms.iter().zip(FORMS) {
                let table = w.restrict(k + 1)?;
                let shape = has_form(&table, &tables[fw.generator], t, u);
                let member = member_if_small(g, &table)?;
                trials.push(TrialOutcome::new(
                    Verdict::from_bool(shape && member != Some(false)),
                    Some(json!({
                        "generator": g.machine().state(fw.generator).name,
                        "form": name,
                        "member": member,
                    })),
                ));
            }
        }
        levels.push(LevelReport::new(k, trials));
    }
    let params = json!({ "model": g.gens().listing(), "level": n });
    Ok(ExperimentReport::new("forms", params, 0, levels))
}

/// `(h, h^{-1}, 1)` as `[κ^{-1}, a^{-1}]` with `κ = (h,1,*) ∈ G_{n+1}`, where
/// `h` is a level-`n` member of `G_n`.
pub fn commutator_framing(g: &ModelGroup, h: &LevelPermutation) -> Result<Option<LevelPermutation>> {
    let n = h.level() + 1;
    let id = LevelPermutation::identity(3, h.level());
    let Some(kappa) = g.lift(n, [Some(h), Some(&id), None])? else {
        return Ok(None);
    };
    let a = &g.generator_tables(n)?[g.gens().a()];
    Ok(Some(kappa.inverse().commutator(&a.inverse())))
}

/// For `samples` uniform `h ∈ G_n`, checks that `(h, h^{-1}, 1)` is obtained
/// by [`commutator_framing`] and lies in `[G_{n+1}, G_{n+1}]`.
pub fn check_commutator_framing(g: &ModelGroup, n: usize, samples: usize, seed: u64) -> Result<ExperimentReport> {
    limits::check_group_level(n + 1, "check_commutator_framing")?;
    let chain = g.level_group(n)?.chain();
    let derived = g.derived_group(n + 1)?;
    let id = LevelPermutation::identity(3, n);
    let mut trials = Vec::with_capacity(samples);
    for s in 0..samples {
        let mut r = rng::stream(rng::derive(seed, n as u64), s as u64);
        let h = uniform_sample(&chain, &mut r);
        let want = tuple([&h, &h.inverse(), &id]);
        let ok = match commutator_framing(g, &h)? {
            Some(c) => c == want && derived.contains(&c)?,
            None => false,
        };
        trials.push(TrialOutcome::new(Verdict::from_bool(ok), None));
    }
    let params = json!({ "model": g.gens().listing(), "level": n, "samples": samples });
    Ok(ExperimentReport::new("commutator-framing", params, seed, vec![LevelReport::new(n, trials)]))
}
