use num_bigint::BigUint;
use serde_json::json;

use super::{in_slot, root_table, tuple, ExperimentReport, LevelReport, ModelGroup, TrialOutcome, Verdict};
use crate::wreath_core::{finite_depth_element, Child, Element, LevelPermutation};
use crate::{limits, Error, Result};

/// Level-`k` multipliers `(p, q)` in `[A_3]^k` with `(p ℓ q)^2 = 1` for the
/// generator `ℓ` with state index `gen`.
pub fn order2_correction(g: &ModelGroup, gen: usize, k: usize) -> Result<(LevelPermutation, LevelPermutation)> {
    if gen >= g.machine().len() {
        return Err(Error::arg(format!("no generator with index {gen}")));
    }
    limits::check_level(k, "order2_correction")?;
    Ok(corrections(g, k)?.swap_remove(gen))
}

/// Multipliers for all generators at level `k`, built bottom-up.
fn corrections(g: &ModelGroup, k: usize) -> Result<Vec<(LevelPermutation, LevelPermutation)>> {
    let m = g.machine();
    let mut cur = vec![(LevelPermutation::identity(3, 0), LevelPermutation::identity(3, 0)); m.len()];
    for level in 1..=k {
        let id = LevelPermutation::identity(3, level - 1);
        let child = |c: Child| match c {
            Child::Identity => (id.clone(), id.clone()),
            Child::State(j) => cur[j].clone(),
        };
        let mut next = Vec::with_capacity(m.len());
        for (j, st) in m.states().iter().enumerate() {
            let pair = if j == g.gens().a() {
                let (p, q) = child(st.children[0]);
                (in_slot(&p, 0), &in_slot(&q, 1) * &root_table(&[&[1, 3, 2]], level))
            } else if j == g.gens().b() {
                let (p, q) = child(st.children[2]);
                (in_slot(&p, 2), &in_slot(&q, 1) * &root_table(&[&[1, 2, 3]], level))
            } else {
                let pq: Vec<_> = st.children.iter().map(|&c| child(c)).collect();
                (
                    tuple([&pq[0].0, &pq[1].0, &pq[2].0]),
                    tuple([&pq[0].1, &pq[1].1, &pq[2].1]),
                )
            };
            next.push(pair);
        }
        cur = next;
    }
    Ok(cur)
}

/// A torsion element built from the model group, with its verification data.
#[derive(Clone, Debug)]
pub struct TorsionElement {
    pub element: Element,
    /// Level of `table`; all sections below it are trivial.
    pub level: usize,
    pub table: LevelPermutation,
    pub order: BigUint,
    /// First level at which the restriction reaches the full order.
    pub k_star: usize,
}

/// `h_j = (h_{j-1},1,1)(1 2 3)` with trivial sections below level `j`.
fn three_cycle_tower(j: usize) -> LevelPermutation {
    let mut h = LevelPermutation::identity(3, 0);
    for level in 1..=j {
        let id = LevelPermutation::identity(3, level - 1);
        h = &tuple([&h, &id, &id]) * &root_table(&[&[1, 2, 3]], level);
    }
    h
}

/// An element of order `2^m 3^{n3}` in the closure of `[G,G]`, as a
/// finite-depth automorphism.
pub fn torsion_element(g: &ModelGroup, m: usize, n3: usize) -> Result<TorsionElement> {
    let target = BigUint::from(2u32).pow(m as u32) * BigUint::from(3u32).pow(n3 as u32);
    let (level, table) = if m == 0 {
        limits::check_level(n3, "torsion_element")?;
        (n3, three_cycle_tower(n3))
    } else {
        let level = (m + n3 + 4).min(limits::level_cap());
        let need = (2 * m - 1).max(n3) + 1;
        if level < need {
            return Err(Error::Resource {
                what: "torsion_element",
                level: need,
                cap: limits::level_cap(),
            });
        }
        (level, two_part(g, m, n3, level)?)
    };
    let element = finite_depth_element(&table);
    let order = element.order_at_level(level)?;
    if order != target {
        return Err(Error::Precondition(format!(
            "construction reached order {order} instead of {target} by level {level}"
        )));
    }
    let mut k_star = level;
    for k in 0..=level {
        if element.order_at_level(k)? == target {
            k_star = k;
            break;
        }
    }
    Ok(TorsionElement {
        element,
        level,
        table,
        order,
        k_star,
    })
}

/// `(F_m, F_m^{-1}, h)` at `level`, where `F_1 = a'`,
/// `F_{j+1} = ((F_j, F_j^{-1}, 1), 1, x')(1 2)` and `a' = (1,1,x')(1 2)`.
fn two_part(g: &ModelGroup, m: usize, n3: usize, level: usize) -> Result<LevelPermutation> {
    let top = level - 1;
    let x = g.gens().x();
    let xp_top = match x {
        Child::Identity => LevelPermutation::identity(3, top - 1),
        Child::State(j) => {
            let (p, q) = order2_correction(g, j, top - 1)?;
            let xt = &g.generator_tables(top - 1)?[j];
            &(&p * xt) * &q
        }
    };
    if !xp_top.pow(2).is_identity() {
        return Err(Error::Precondition("corrected section is not an involution".into()));
    }
    let swap = |l: usize| root_table(&[&[1, 2]], l);
    // F_1 sits at level l0; each step goes two levels deeper.
    let l0 = top - 2 * (m - 1);
    let mut e = LevelPermutation::identity(3, l0 - 1);
    let mut fm = e.clone();
    for i in 1..=m {
        let lf = l0 + 2 * (i - 1);
        let id = LevelPermutation::identity(3, lf - 1);
        fm = &tuple([&e, &id, &xp_top.truncate(lf - 1)]) * &swap(lf);
        e = tuple([&fm, &fm.inverse(), &LevelPermutation::identity(3, lf)]);
    }
    let h = three_cycle_tower(n3).extend(top);
    Ok(tuple([&fm, &fm.inverse(), &h]))
}

/// Builds the element of order `2^m 3^{n3}` and checks its order and, within
/// the group level cap, membership in `[G_k, G_k]`.
pub fn check_torsion(g: &ModelGroup, m: usize, n3: usize) -> Result<ExperimentReport> {
    let t = torsion_element(g, m, n3)?;
    let bound = m + n3 + 4;
    let k = t.level.min(limits::group_level_cap());
    let member = g.derived_group(k)?.contains(&t.table.truncate(k))?;
    let ok = t.k_star <= bound && member;
    let witness = json!({
        "order": t.order.to_string(),
        "k_star": t.k_star,
        "level": t.level,
        "membership_level": k,
        "in_derived": member,
    });
    let levels = vec![LevelReport::new(t.level, vec![TrialOutcome::new(Verdict::from_bool(ok), Some(witness))])];
    let params = json!({ "model": g.gens().listing(), "m": m, "n3": n3 });
    Ok(ExperimentReport::new("torsion", params, 0, levels))
}
