//! Level-wise conjugacy in the iterated wreath product `W_n`.
//!
//! Two automorphisms are conjugate on `T_n` iff their root permutations have
//! the same cycle type and the cycles can be matched length-preservingly so
//! that matched cyclic section products are conjugate on `T_{n-1}`.

mod square;

pub use square::{check_square_condition, FreeWord, SquareReport, SymbolicRecursion, SymbolicSystem};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::wreath_core::{Element, LevelPermutation, Permutation};
use crate::{limits, Error, Result};

/// Cycles of a permutation (0-based), fixed points included, each starting
/// at its least letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn of(p: &Permutation) -> Self {
        CycleDecomposition { cycles: p.cycles() }
    }

    /// Sorted cycle lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles.iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }
}

/// The matching chosen at one recursion node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeMatching {
    /// Level of the pair being compared at this node.
    pub level: usize,
    /// `μ` as a 1-based image list, with `σ_g = μ σ_h μ⁻¹`.
    pub mu: Vec<usize>,
}

/// Witness `w` with `w · h · w⁻¹ = g` on `T_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyCertificate {
    pub level: usize,
    pub witness: LevelPermutation,
    pub matching: Vec<NodeMatching>,
}

impl ConjugacyCertificate {
    /// Re-checks the witness by direct computation.
    pub fn verify(&self, g: &LevelPermutation, h: &LevelPermutation) -> bool {
        g.level() == self.level && h.conjugated_by(&self.witness) == *g
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "level": self.level,
            "conjugator": self.witness.images(),
            "mu": self.matching.iter().map(|m| serde_json::json!({"level": m.level, "mu": m.mu})).collect::<Vec<_>>(),
        })
    }
}

type Memo = HashMap<(Vec<u32>, Vec<u32>), Option<(LevelPermutation, Vec<NodeMatching>)>>;

/// Cyclic section products of `g` along the cycles of its root (level `n-1`).
pub fn cyclic_products(g: &LevelPermutation) -> (Vec<Vec<usize>>, Vec<LevelPermutation>) {
    let root = g.root();
    let cycles = root.cycles();
    let prods = cycles
        .iter()
        .map(|c| {
            let mut p = LevelPermutation::identity(g.degree(), g.level() - 1);
            for &x in c {
                p = &p * &g.section(x);
            }
            p
        })
        .collect();
    (cycles, prods)
}

/// `V` with trivial root and `V g V⁻¹ = ĝ`, the first-level canonical form
/// carrying each cyclic product at the least letter of its cycle.
fn normalizer(g: &LevelPermutation, cycles: &[Vec<usize>]) -> LevelPermutation {
    let d = g.degree();
    let sub = g.level() - 1;
    let mut secs = vec![LevelPermutation::identity(d, sub); d];
    for c in cycles {
        // V_{x_i} = (g_{x_i} ⋯ g_{x_r})⁻¹ for i ≥ 2, V_{x_1} = 1
        let mut tail = LevelPermutation::identity(d, sub);
        for i in (1..c.len()).rev() {
            tail = &g.section(c[i]) * &tail;
            secs[c[i]] = tail.inverse();
        }
    }
    LevelPermutation::from_wreath(&secs, &Permutation::identity(d))
}

fn augment(j: usize, adj: &[Vec<bool>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
    for k in 0..adj[j].len() {
        if adj[j][k] && !seen[k] {
            seen[k] = true;
            if owner[k].is_none_or(|o| augment(o, adj, seen, owner)) {
                owner[k] = Some(j);
                return true;
            }
        }
    }
    false
}

/// Whether the rows not in `fixed` can be matched into the unused columns.
fn has_perfect_matching(adj: &[Vec<bool>], fixed: &[Option<usize>]) -> bool {
    let m = adj.len();
    let used: Vec<bool> = (0..m).map(|k| fixed.contains(&Some(k))).collect();
    let rest: Vec<Vec<bool>> = (0..m)
        .map(|j| {
            (0..m)
                .map(|k| fixed[j].is_none() && !used[k] && adj[j][k])
                .collect()
        })
        .collect();
    let mut owner = vec![None; m];
    (0..m)
        .filter(|&j| fixed[j].is_none())
        .all(|j| augment(j, &rest, &mut vec![false; m], &mut owner))
}

fn conj_rec(
    g: &LevelPermutation,
    h: &LevelPermutation,
    memo: &mut Memo,
) -> Option<(LevelPermutation, Vec<NodeMatching>)> {
    let n = g.level();
    let d = g.degree();
    if n == 0 {
        return Some((LevelPermutation::identity(d, 0), Vec::new()));
    }
    let key = (g.images().to_vec(), h.images().to_vec());
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let result = conj_node(g, h, memo);
    memo.insert(key, result.clone());
    result
}

fn conj_node(
    g: &LevelPermutation,
    h: &LevelPermutation,
    memo: &mut Memo,
) -> Option<(LevelPermutation, Vec<NodeMatching>)> {
    let n = g.level();
    let d = g.degree();
    let (cg, pg) = cyclic_products(g);
    let (ch, ph) = cyclic_products(h);
    let type_g = CycleDecomposition { cycles: cg.clone() }.cycle_type();
    let type_h = CycleDecomposition { cycles: ch.clone() }.cycle_type();
    if type_g != type_h {
        return None;
    }
    let m = cg.len();
    // adj[j][k]: cycle j of g can be matched with cycle k of h
    let mut sub: Vec<Vec<Option<(LevelPermutation, Vec<NodeMatching>)>>> = vec![vec![None; m]; m];
    let mut adj = vec![vec![false; m]; m];
    for j in 0..m {
        for k in 0..m {
            if cg[j].len() == ch[k].len() {
                if let Some(r) = conj_rec(&pg[j], &ph[k], memo) {
                    adj[j][k] = true;
                    sub[j][k] = Some(r);
                }
            }
        }
    }
    // Lexicographically least μ: fix rows in order, smallest feasible column.
    let mut fixed: Vec<Option<usize>> = vec![None; m];
    for j in 0..m {
        let mut chosen = None;
        for k in 0..m {
            if !adj[j][k] || fixed.contains(&Some(k)) {
                continue;
            }
            fixed[j] = Some(k);
            if has_perfect_matching(&adj, &fixed) {
                chosen = Some(k);
                break;
            }
            fixed[j] = None;
        }
        chosen?;
    }
    let mut mu = vec![0usize; d];
    let mut w0_secs = vec![LevelPermutation::identity(d, n - 1); d];
    let mut records = Vec::new();
    for j in 0..m {
        let k = fixed[j].expect("matched");
        for (i, &x) in cg[j].iter().enumerate() {
            mu[x] = ch[k][i];
        }
        let (u, recs) = sub[j][k].clone().expect("edge witness");
        for &x in &cg[j] {
            w0_secs[x] = u.clone();
        }
        records.extend(recs);
    }
    let mu = Permutation::from_images(mu).expect("matching is a bijection");
    let w0 = LevelPermutation::from_wreath(&w0_secs, &mu);
    let vg = normalizer(g, &cg);
    let vh = normalizer(h, &ch);
    // g = Vg⁻¹ ĝ Vg, ĥ = Vh h Vh⁻¹, ĝ = w0 ĥ w0⁻¹
    let w = &(&vg.inverse() * &w0) * &vh;
    let mut matching = vec![NodeMatching {
        level: n,
        mu: mu.images_1based(),
    }];
    matching.extend(records);
    debug_assert_eq!(h.conjugated_by(&w), *g);
    Some((w, matching))
}

/// Decides `g ∼ h` in `W_n` for level tables; the witness satisfies `w h w⁻¹ = g`.
pub fn conjugate_levelwise(
    g: &LevelPermutation,
    h: &LevelPermutation,
) -> Result<Option<ConjugacyCertificate>> {
    if (g.degree(), g.level()) != (h.degree(), h.level()) {
        return Err(Error::arg("conjugacy test on tables of different shape"));
    }
    limits::check_level(g.level(), "conjugacy")?;
    let mut memo = Memo::new();
    Ok(conj_rec(g, h, &mut memo).map(|(witness, matching)| ConjugacyCertificate {
        level: g.level(),
        witness,
        matching,
    }))
}

/// `restrict(g, n) ∼ restrict(h, n)` in `W_n`.
pub fn conjugate_in_wn(g: &Element, h: &Element, n: usize) -> Result<Option<ConjugacyCertificate>> {
    if g.machine().degree() != h.machine().degree() {
        return Err(Error::arg("elements over different degrees"));
    }
    conjugate_levelwise(&g.restrict(n)?, &h.restrict(n)?)
}

/// Canonical form of a level table: at each node the cyclic
/// product sits at the least letter of its cycle, other sections trivial.
pub fn canonical_table(g: &LevelPermutation) -> LevelPermutation {
    let n = g.level();
    let d = g.degree();
    if n == 0 {
        return g.clone();
    }
    let (cycles, prods) = cyclic_products(g);
    let mut secs = vec![LevelPermutation::identity(d, n - 1); d];
    for (c, p) in cycles.iter().zip(&prods) {
        secs[c[0]] = canonical_table(p);
    }
    LevelPermutation::from_wreath(&secs, &g.root())
}

pub fn canonical_representative(g: &Element, n: usize) -> Result<LevelPermutation> {
    if n == 0 {
        return Err(Error::arg("canonical representative needs n >= 1"));
    }
    Ok(canonical_table(&g.restrict(n)?))
}

/// Acts transitively on level `n`, i.e. is a single `d^n`-cycle there.
pub fn is_odometer(e: &Element, n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::arg("odometer test needs n >= 1"));
    }
    let t = e.restrict(n)?;
    Ok(t.cycles().len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(3, c).unwrap()
    }

    #[test]
    fn single_cycle_collects_product() {
        // (g1,g2,g3)(1 2 3) ∼ (g1 g2 g3, 1, 1)(1 2 3)
        let s = [
            LevelPermutation::from_root(&p(&[&[1, 2]]), 1),
            LevelPermutation::from_root(&p(&[&[2, 3]]), 1),
            LevelPermutation::from_root(&p(&[&[1, 3]]), 1),
        ];
        let g = LevelPermutation::from_wreath(&s, &p(&[&[1, 2, 3]]));
        let prod = &(&s[0] * &s[1]) * &s[2];
        let id = LevelPermutation::identity(3, 1);
        let h = LevelPermutation::from_wreath(&[prod, id.clone(), id], &p(&[&[1, 2, 3]]));
        let cert = conjugate_levelwise(&g, &h).unwrap().expect("conjugate");
        assert!(cert.verify(&g, &h));
        let vg = normalizer(&g, &g.root().cycles());
        assert_eq!(g.conjugated_by(&vg), h);
    }

    #[test]
    fn different_cycle_types_fail() {
        let g = LevelPermutation::from_root(&p(&[&[1, 2]]), 2);
        let h = LevelPermutation::from_root(&p(&[&[1, 2, 3]]), 2);
        assert!(conjugate_levelwise(&g, &h).unwrap().is_none());
    }
}
