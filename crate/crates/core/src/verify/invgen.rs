use num_bigint::BigUint;
use serde_json::json;

use super::{ExperimentReport, LevelReport, ModelGroup, TrialOutcome, Verdict};
use crate::permgrp::{equal_groups, uniform_sample, PermGroup};
use crate::rng;
use crate::Result;

/// For every level `1..=n`, `trials` draws of independent uniform `G_k`
/// conjugates of `a, b, c_1, …, c_r` and of the odometer; each draw passes
/// when the conjugates still generate `G_k`. Stops at the first failure.
pub fn check_invariable_generation(g: &ModelGroup, n: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let mut levels = Vec::new();
    let d = g.odometer();
    'levels: for k in 1..=n {
        let gk = g.level_group(k)?;
        let chain = gk.chain();
        let mut gens = g.generator_tables(k)?.to_vec();
        gens.push(d.restrict(k)?);
        let mut outcomes = Vec::with_capacity(trials);
        for t in 0..trials {
            let mut r = rng::stream(rng::derive(seed, k as u64), t as u64);
            let conj: Vec<_> = gens
                .iter()
                .map(|x| x.conjugated_by(&uniform_sample(&chain, &mut r)))
                .collect();
            let h = PermGroup::new(3, k, conj)?;
            let ok = equal_groups(&h, &gk)?;
            let witness = (!ok).then(|| {
                json!({
                    "generated_order": h.order().to_string(),
                    "level_order": gk.order().to_string(),
                })
            });
            outcomes.push(TrialOutcome::new(Verdict::from_bool(ok), witness));
            if !ok {
                levels.push(LevelReport::new(k, outcomes));
                break 'levels;
            }
        }
        levels.push(LevelReport::new(k, outcomes));
    }
    let params = json!({ "model": g.gens().listing(), "level": n, "trials": trials });
    Ok(ExperimentReport::new("invgen", params, seed, levels))
}

/// Order at level `n` of `⟨a, (ba) b (ba)^{-1}⟩`, the conjugate family that
/// drops the odometer and fails to generate.
pub fn example_counterexample_order(g: &ModelGroup, n: usize) -> Result<BigUint> {
    let t = g.generator_tables(n)?;
    let (a, b) = (&t[g.gens().a()], &t[g.gens().b()]);
    let ba = b * a;
    let h = PermGroup::new(3, n, vec![a.clone(), b.conjugated_by(&ba)])?;
    Ok(h.order())
}
