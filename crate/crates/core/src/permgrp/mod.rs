//! Permutation groups on the `d^n` vertices of a level: stabilizer chains,
//! membership, exact orders, derived subgroups and uniform sampling.

mod chain;

pub use chain::StabilizerChain;

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;

use crate::rng::Rng;
use crate::wreath_core::{LevelPermutation, Permutation};
use crate::{limits, Error, Result};

/// A group given by generators, all level tables of one shape.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    level: usize,
    generators: Vec<LevelPermutation>,
    chain: OnceLock<Arc<StabilizerChain>>,
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("level", &self.level)
            .field("generators", &self.generators.len())
            .finish()
    }
}

impl PermGroup {
    pub fn new(degree: usize, level: usize, generators: Vec<LevelPermutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::arg("degree must be positive"));
        }
        if generators
            .iter()
            .any(|g| g.degree() != degree || g.level() != level)
        {
            return Err(Error::arg("generators of mixed shape"));
        }
        Ok(PermGroup {
            degree,
            level,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Number of points `d^n`.
    pub fn npoints(&self) -> usize {
        crate::wreath_core::pow_usize(self.degree, self.level)
    }

    pub fn generators(&self) -> &[LevelPermutation] {
        &self.generators
    }

    /// The verified chain, built on first use.
    pub fn chain(&self) -> Arc<StabilizerChain> {
        self.chain
            .get_or_init(|| Arc::new(build_chain(self, 0)))
            .clone()
    }

    pub fn order(&self) -> BigUint {
        self.chain().order().clone()
    }

    pub fn contains(&self, p: &LevelPermutation) -> Result<bool> {
        contains(&self.chain(), p)
    }

    fn same_shape(&self, other: &PermGroup) -> Result<()> {
        if (self.degree, self.level) != (other.degree, other.level) {
            return Err(Error::arg("groups act on different levels"));
        }
        Ok(())
    }
}

/// Verified stabilizer chain. The construction is deterministic; `seed` is
/// accepted for interface stability and does not affect the result.
pub fn build_chain(g: &PermGroup, seed: u64) -> StabilizerChain {
    let _ = seed;
    StabilizerChain::build(g.degree, g.level, &g.generators, &[])
}

/// Chain whose base starts with `prefix`, for prescribed-image searches.
pub fn build_chain_with_base(g: &PermGroup, prefix: &[u32]) -> StabilizerChain {
    StabilizerChain::build(g.degree, g.level, &g.generators, prefix)
}

pub fn contains(chain: &StabilizerChain, p: &LevelPermutation) -> Result<bool> {
    if (p.degree(), p.level()) != (chain.degree(), chain.level()) {
        return Err(Error::arg("degree mismatch in membership test"));
    }
    Ok(chain.contains(p))
}

/// Equal as subgroups of `Sym(d^n)`.
pub fn equal_groups(g1: &PermGroup, g2: &PermGroup) -> Result<bool> {
    g1.same_shape(g2)?;
    let (c1, c2) = (g1.chain(), g2.chain());
    if c1.order() != c2.order() {
        return Ok(false);
    }
    Ok(g1.generators.iter().all(|g| c2.contains(g)) && g2.generators.iter().all(|g| c1.contains(g)))
}

/// `H ≤ G` by generator membership.
pub fn is_subgroup(h: &PermGroup, g: &PermGroup) -> Result<bool> {
    h.same_shape(g)?;
    let c = g.chain();
    Ok(h.generators.iter().all(|x| c.contains(x)))
}

/// Normal closure of `subgens` under conjugation by the generators of `g`.
pub fn normal_closure(g: &PermGroup, subgens: Vec<LevelPermutation>) -> PermGroup {
    let mut gens: Vec<LevelPermutation> = subgens.into_iter().filter(|x| !x.is_identity()).collect();
    loop {
        let chain = StabilizerChain::build(g.degree, g.level, &gens, &[]);
        let mut added = None;
        'scan: for h in &gens {
            for s in &g.generators {
                let c = h.conjugated_by(&s.inverse());
                if !chain.contains(&c) {
                    added = Some(c);
                    break 'scan;
                }
            }
        }
        match added {
            Some(c) => gens.push(c),
            None => {
                let out = PermGroup::new(g.degree, g.level, gens).expect("same shape");
                let _ = out.chain.set(Arc::new(chain));
                return out;
            }
        }
    }
}

/// Derived subgroup: normal closure of generator commutators.
pub fn derived_subgroup(g: &PermGroup) -> PermGroup {
    let gens = &g.generators;
    let mut comms = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            comms.push(gens[i].commutator(&gens[j]));
        }
    }
    normal_closure(g, comms)
}

pub fn is_transitive(g: &PermGroup) -> bool {
    let n = g.npoints();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(p) = stack.pop() {
        for s in &g.generators {
            let q = s.image(p);
            if !seen[q] {
                seen[q] = true;
                count += 1;
                stack.push(q);
            }
        }
    }
    count == n
}

pub fn uniform_sample(chain: &StabilizerChain, rng: &mut Rng) -> LevelPermutation {
    chain.random_element(rng)
}

/// Generators of `W_n = Aut(T_n)` acting as `(1 2)` and `(1 2 … d)` at the
/// root and at the vertices `0^k`; for `d = 3` these are `(1 2)` and `(2 3)`.
pub fn wn_generators_d(d: usize, n: usize) -> Result<PermGroup> {
    if n == 0 {
        return PermGroup::new(d, 0, Vec::new());
    }
    limits::check_level(n, "wn_generators")?;
    let locals: Vec<Permutation> = if d == 3 {
        vec![
            Permutation::from_cycles(3, &[&[1, 2]])?,
            Permutation::from_cycles(3, &[&[2, 3]])?,
        ]
    } else {
        let cyc: Vec<usize> = (1..=d).collect();
        vec![
            Permutation::from_cycles(d, &[&[1, 2]])?,
            Permutation::from_cycles(d, &[&cyc])?,
        ]
    };
    let mut gens = Vec::new();
    for k in 0..n {
        for s in &locals {
            gens.push(acting_at_zero_path(d, n, k, s));
        }
    }
    PermGroup::new(d, n, gens)
}

/// `W_n` for the ternary tree.
pub fn wn_generators(n: usize) -> Result<PermGroup> {
    wn_generators_d(3, n)
}

/// Acts as `s` on the children of vertex `0^k`, trivially elsewhere.
fn acting_at_zero_path(d: usize, n: usize, k: usize, s: &Permutation) -> LevelPermutation {
    let size = crate::wreath_core::pow_usize(d, n);
    let block = crate::wreath_core::pow_usize(d, n - k - 1);
    let images = (0..size)
        .map(|i| {
            if i < block * d {
                let x = i / block;
                (s.image(x) * block + i % block) as u32
            } else {
                i as u32
            }
        })
        .collect();
    LevelPermutation::from_images(d, n, images).expect("tree automorphism")
}

/// `6^((3^n - 1) / 2)`, the order of `W_n` for the ternary tree.
pub fn wreath_order(n: usize) -> BigUint {
    let exp = (3usize.pow(n as u32) - 1) / 2;
    BigUint::from(6u32).pow(exp as u32)
}
