use serde_json::json;

use super::{in_slot, root_table, ExperimentReport, LevelReport, ModelGroup, TrialOutcome, Verdict};
use crate::permgrp::{uniform_sample, wn_generators, PermGroup};
use crate::wreath_core::LevelPermutation;
use crate::{limits, rng, Result};

const MAX_DRAWS: usize = 10_000;

/// Conjugates `G_{n+1}` by `(w,1,1)` for some `w ∈ W_n ∖ G_n` and shows the
/// result `H` loses section closure: `H` holds `(w,1,w^{-1})(1 2 3)` with
/// section `w`, yet no `(w,*,1)` with trivial root. The control repeats the
/// search with `w ∈ G_n`, where such an element must exist.
pub fn check_class_not_closed(g: &ModelGroup, n: usize, seed: u64) -> Result<ExperimentReport> {
    let params = json!({ "model": g.gens().listing(), "level": n });
    if n < 2 {
        let t = TrialOutcome::new(Verdict::NotApplicable, Some(json!({ "reason": "G_1 = W_1" })));
        let report = ExperimentReport::new("class-not-closed", params, seed, vec![LevelReport::new(n, vec![t])]);
        return Ok(report.with_verdict(Verdict::NotApplicable));
    }
    limits::check_group_level(n + 1, "check_class_not_closed")?;
    let gn = g.level_group(n)?;
    let wn = wn_generators(n)?.chain();
    let mut r = rng::stream(seed, 0);
    let mut draws = 0;
    let w = loop {
        draws += 1;
        let w = uniform_sample(&wn, &mut r);
        if !gn.contains(&w)? {
            break Some(w);
        }
        if draws >= MAX_DRAWS {
            break None;
        }
    };
    let Some(w) = w else {
        let t = TrialOutcome::new(Verdict::NotApplicable, Some(json!({ "reason": "G_n = W_n", "draws": draws })));
        return Ok(ExperimentReport::new("class-not-closed", params, seed, vec![LevelReport::new(n, vec![t])])
            .with_verdict(Verdict::NotApplicable));
    };
    let big_w = in_slot(&w, 0);
    let tables = g.generator_tables(n + 1)?;
    let h = PermGroup::new(3, n + 1, tables.iter().map(|x| x.conjugated_by(&big_w)).collect())?;
    let t = root_table(&[&[1, 2, 3]], n + 1).conjugated_by(&big_w);
    let t_in_h = h.contains(&t)? && t.section(0) == w;
    let id = LevelPermutation::identity(3, n);
    // (w,*,1) ∈ H iff (w,*,1) ∈ G_{n+1}, as (w,1,1) commutes with the form.
    let closure_violated = g.lift(n + 1, [Some(&w), None, Some(&id)])?.is_none();
    let wt = w.truncate(n - 1);
    let hn_gens = g
        .generator_tables(n)?
        .iter()
        .map(|x| x.conjugated_by(&in_slot(&wt, 0)))
        .collect();
    let w_in_hn = PermGroup::new(3, n, hn_gens)?.contains(&w)?;
    let control_elt = uniform_sample(&gn.chain(), &mut r);
    let control = g.lift(n + 1, [Some(&control_elt), None, Some(&id)])?.is_some();
    let ok = t_in_h && closure_violated && control;
    let witness = json!({
        "w": w.to_string(),
        "draws": draws,
        "conjugated_cycle_in_h": t_in_h,
        "section_closure_violated": closure_violated,
        "w_in_h_n": w_in_hn,
        "control": control,
    });
    let levels = vec![LevelReport::new(n, vec![TrialOutcome::new(Verdict::from_bool(ok), Some(witness))])];
    Ok(ExperimentReport::new("class-not-closed", params, seed, levels))
}
