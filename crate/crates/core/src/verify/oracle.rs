use rand::Rng as _;
use serde_json::json;

use super::{ExperimentReport, LevelReport, TrialOutcome, Verdict};
use crate::conjugacy::conjugate_in_wn;
use crate::permgrp::{uniform_sample, wn_generators};
use crate::wreath_core::finite_depth_element;
use crate::{rng, Error, Result};

/// Largest level at which all of `W_n` is enumerated.
pub const ORACLE_MAX_LEVEL: usize = 2;

/// Compares [`conjugate_in_wn`] with a search over every element of `W_n`
/// on `pairs` seeded pairs. Half the pairs are conjugate by construction.
pub fn check_conjugacy_oracle(n: usize, pairs: usize, seed: u64) -> Result<ExperimentReport> {
    if n == 0 {
        return Err(Error::arg("conjugacy oracle needs n >= 1"));
    }
    if n > ORACLE_MAX_LEVEL {
        return Err(Error::Resource {
            what: "conjugacy oracle enumeration",
            level: n,
            cap: ORACLE_MAX_LEVEL,
        });
    }
    let chain = wn_generators(n)?.chain();
    let all = chain.elements();
    let mut trials = Vec::with_capacity(pairs);
    let mut conjugate_pairs = 0;
    for t in 0..pairs {
        let mut r = rng::stream(seed, t as u64);
        let g = uniform_sample(&chain, &mut r);
        let h = if r.gen_bool(0.5) {
            g.conjugated_by(&uniform_sample(&chain, &mut r))
        } else {
            uniform_sample(&chain, &mut r)
        };
        let brute = all.iter().any(|w| h.conjugated_by(w) == g);
        let cert = conjugate_in_wn(&finite_depth_element(&g), &finite_depth_element(&h), n)?;
        let valid = cert.as_ref().is_none_or(|c| c.verify(&g, &h));
        conjugate_pairs += usize::from(brute);
        let ok = brute == cert.is_some() && valid;
        let witness = (!ok).then(|| json!({ "g": g.to_string(), "h": h.to_string(), "exhaustive": brute }));
        trials.push(TrialOutcome::new(Verdict::from_bool(ok), witness));
    }
    let params = json!({
        "level": n,
        "pairs": pairs,
        "conjugators": all.len(),
        "conjugate_pairs": conjugate_pairs,
    });
    Ok(ExperimentReport::new("conjugacy-oracle", params, seed, vec![LevelReport::new(n, trials)]))
}
