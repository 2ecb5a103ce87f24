use num_bigint::BigUint;
use serde_json::json;

use super::{in_slot, ExperimentReport, LevelReport, ModelGroup, TrialOutcome, Verdict};
use crate::{limits, Error, Result};

/// Branch structure over the derived subgroup at levels `1..=n`: the
/// commutator `[a,b]` lies in `[G_k,G_k]`, the index `[G_k : [G_k,G_k]]` is
/// at most `2^{r+2}`, and for `k < n` every generator `h` of `[G_k,G_k]`
/// gives `(h,1,1)`, `(1,h,1)`, `(1,1,h)` in `[G_{k+1},G_{k+1}]`.
pub fn check_branch(g: &ModelGroup, n: usize) -> Result<ExperimentReport> {
    if n == 0 {
        return Err(Error::arg("branch check needs level at least 1"));
    }
    limits::check_group_level(n, "check_branch")?;
    let bound = BigUint::from(1u32) << (g.r() + 2);
    let mut levels = Vec::new();
    for k in 1..=n {
        let gk = g.level_group(k)?;
        let dk = g.derived_group(k)?;
        let t = g.generator_tables(k)?;
        let comm = t[g.gens().a()].commutator(&t[g.gens().b()]);
        let mut trials = vec![TrialOutcome::new(
            Verdict::from_bool(dk.contains(&comm)?),
            Some(json!({ "check": "commutator", "element": comm.to_string() })),
        )];
        let index = gk.order() / dk.order();
        trials.push(TrialOutcome::new(
            Verdict::from_bool(index <= bound),
            Some(json!({ "check": "index", "index": index.to_string(), "bound": bound.to_string() })),
        ));
        if k < n {
            let next = g.derived_group(k + 1)?;
            let mut failures = Vec::new();
            for (i, h) in dk.generators().iter().enumerate() {
                for x in 0..3 {
                    if !next.contains(&in_slot(h, x))? {
                        failures.push(json!({ "generator": i, "slot": x + 1 }));
                    }
                }
            }
            trials.push(TrialOutcome::new(
                Verdict::from_bool(failures.is_empty()),
                Some(json!({
                    "check": "branching",
                    "generators": dk.generators().len(),
                    "failures": failures,
                })),
            ));
        }
        levels.push(LevelReport::new(k, trials));
    }
    let params = json!({ "model": g.gens().listing(), "level": n });
    Ok(ExperimentReport::new("branch", params, 0, levels))
}
