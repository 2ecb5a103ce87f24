//! Finite-level checks of model-group properties.
//!
//! Each check works with the level quotients `G_n` of a [`ModelGroup`] and
//! emits an [`ExperimentReport`].

mod branch;
mod filtration;
mod invgen;
mod notclosed;
mod oracle;
mod replication;
mod report;
mod simconj;
mod torsion;

pub use branch::check_branch;
pub use filtration::{check_filtration, move_generators, FamilyParams};
pub use invgen::{check_invariable_generation, example_counterexample_order};
pub use notclosed::check_class_not_closed;
pub use oracle::{check_conjugacy_oracle, ORACLE_MAX_LEVEL};
pub use replication::{
    check_commutator_framing, check_forms, check_self_replication, commutator_framing,
    forms_witnesses, self_replication_witness, FormWitnesses,
};
pub use report::{ExperimentReport, LevelReport, TrialOutcome, Verdict};
pub use simconj::{check_simultaneous_conjugation, check_witness, simultaneous_conjugator, SimConjFailure, SimConjWitness};
pub use torsion::{check_torsion, order2_correction, torsion_element, TorsionElement};

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::permgrp::{PermGroup, StabilizerChain};
use crate::portrait::{compose_families, disjoint_orbit_family, synthesize_model, ModelGenerators, Portrait, Role};
use crate::wreath_core::{pow_usize, Element, LevelPermutation, RecursionMachine};
use crate::{limits, Result};

/// A model group with per-level quotients cached.
pub struct ModelGroup {
    gens: ModelGenerators,
    groups: Mutex<BTreeMap<usize, Arc<PermGroup>>>,
    derived: Mutex<BTreeMap<usize, Arc<PermGroup>>>,
    lift_chains: Mutex<HashMap<(usize, u8), Arc<StabilizerChain>>>,
}

impl std::fmt::Debug for ModelGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModelGroup").field("gens", &self.gens.listing()).finish()
    }
}

impl ModelGroup {
    pub fn new(gens: ModelGenerators) -> Self {
        ModelGroup {
            gens,
            groups: Mutex::new(BTreeMap::new()),
            derived: Mutex::new(BTreeMap::new()),
            lift_chains: Mutex::new(HashMap::new()),
        }
    }

    pub fn from_portrait(p: &Portrait) -> Result<Self> {
        Ok(Self::new(synthesize_model(p)?))
    }

    /// Two disjoint critical orbits with parameters `(s, m)` for `a` and `b`.
    pub fn from_families(fa: (usize, usize), fb: (usize, usize)) -> Result<Self> {
        let a = disjoint_orbit_family(fa.0, fa.1, Role::A)?;
        let b = disjoint_orbit_family(fb.0, fb.1, Role::B)?;
        Ok(Self::new(compose_families(&a, &b)?))
    }

    /// `⟨a, b⟩` with `a = (a,1,1)(1 2)` and `b = (1,1,b)(2 3)`.
    pub fn two_fixed() -> Self {
        Self::from_families((0, 1), (0, 1)).expect("valid families")
    }

    pub fn gens(&self) -> &ModelGenerators {
        &self.gens
    }

    pub fn machine(&self) -> &Arc<RecursionMachine> {
        &self.gens.machine
    }

    pub fn r(&self) -> usize {
        self.gens.r()
    }

    pub fn generator(&self, i: usize) -> Element {
        Element::state(self.machine(), i)
    }

    /// The odometer `d = a·b·c_1⋯c_r`.
    pub fn odometer(&self) -> Element {
        let mut d = Element::identity(self.machine());
        for i in 0..self.machine().len() {
            d = d.mul(&self.generator(i));
        }
        d
    }

    /// Level-`n` tables of the generators, in state order.
    pub fn generator_tables(&self, n: usize) -> Result<Arc<Vec<LevelPermutation>>> {
        self.machine().level_tables(n)
    }

    /// `G_n`, generated by the level-`n` restrictions of the generators.
    pub fn level_group(&self, n: usize) -> Result<Arc<PermGroup>> {
        limits::check_group_level(n, "level_group")?;
        if let Some(g) = self.groups.lock().expect("poisoned").get(&n) {
            return Ok(g.clone());
        }
        let tables = self.generator_tables(n)?;
        let g = Arc::new(PermGroup::new(3, n, tables.to_vec())?);
        g.chain();
        Ok(self.groups.lock().expect("poisoned").entry(n).or_insert(g).clone())
    }

    /// `[G_n, G_n]`.
    pub fn derived_group(&self, n: usize) -> Result<Arc<PermGroup>> {
        if let Some(g) = self.derived.lock().expect("poisoned").get(&n) {
            return Ok(g.clone());
        }
        let g = self.level_group(n)?;
        let d = Arc::new(crate::permgrp::derived_subgroup(&g));
        Ok(self.derived.lock().expect("poisoned").entry(n).or_insert(d).clone())
    }

    /// A member of `G_n` with trivial root and the prescribed first-level
    /// sections (tables of level `n - 1`); `None` slots are unconstrained.
    pub fn lift(&self, n: usize, sections: [Option<&LevelPermutation>; 3]) -> Result<Option<LevelPermutation>> {
        if n == 0 {
            return Ok(Some(LevelPermutation::identity(3, 0)));
        }
        let mask: u8 = (0..3).filter(|&x| sections[x].is_some()).map(|x| 1u8 << x).sum();
        if mask == 0 {
            return Ok(Some(LevelPermutation::identity(3, n)));
        }
        for s in sections.iter().flatten() {
            if s.degree() != 3 || s.level() + 1 != n {
                return Err(crate::Error::arg("section tables must have level n - 1"));
            }
        }
        let block = pow_usize(3, n - 1);
        let chain = self.lift_chain(n, mask)?;
        let mut images = Vec::new();
        for (x, s) in sections.iter().enumerate() {
            if let Some(s) = s {
                images.extend((0..block).map(|u| (x * block + s.image(u)) as u32));
            }
        }
        if mask.count_ones() >= 2 {
            return Ok(chain.find_with_base_images(&images));
        }
        // One prescribed slot: also keep the next slot in place.
        let y = free_slot(mask);
        for t in 0..block {
            images.push((y * block + t) as u32);
            if let Some(g) = chain.find_with_base_images(&images) {
                return Ok(Some(g));
            }
            images.pop();
        }
        Ok(None)
    }

    fn lift_chain(&self, n: usize, mask: u8) -> Result<Arc<StabilizerChain>> {
        if let Some(c) = self.lift_chains.lock().expect("poisoned").get(&(n, mask)) {
            return Ok(c.clone());
        }
        let g = self.level_group(n)?;
        let block = pow_usize(3, n - 1);
        let mut prefix: Vec<u32> = Vec::new();
        for x in 0..3 {
            if mask & (1 << x) != 0 {
                prefix.extend((x * block..(x + 1) * block).map(|p| p as u32));
            }
        }
        if mask.count_ones() == 1 {
            prefix.push((free_slot(mask) * block) as u32);
        }
        let c = Arc::new(crate::permgrp::build_chain_with_base(&g, &prefix));
        Ok(self
            .lift_chains
            .lock()
            .expect("poisoned")
            .entry((n, mask))
            .or_insert(c)
            .clone())
    }
}

fn free_slot(mask: u8) -> usize {
    (0..3).find(|&x| mask & (1 << x) == 0).expect("a free slot")
}

/// `(s_1, s_2, s_3)` with trivial root, from level `n - 1` sections.
pub(crate) fn tuple(sections: [&LevelPermutation; 3]) -> LevelPermutation {
    LevelPermutation::from_wreath(
        &[sections[0].clone(), sections[1].clone(), sections[2].clone()],
        &crate::wreath_core::Permutation::identity(3),
    )
}

/// `(1,…,h,…,1)` with `h` in slot `x`.
pub(crate) fn in_slot(h: &LevelPermutation, x: usize) -> LevelPermutation {
    let id = LevelPermutation::identity(3, h.level());
    let mut s = [&id, &id, &id];
    s[x] = h;
    tuple(s)
}

/// The level-`n` table of the root permutation given by 1-based cycles.
pub(crate) fn root_table(cycles: &[&[usize]], n: usize) -> LevelPermutation {
    let p = crate::wreath_core::Permutation::from_cycles(3, cycles).expect("valid cycles");
    LevelPermutation::from_root(&p, n)
}
