use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng as _;

use crate::rng::Rng;
use crate::wreath_core::LevelPermutation;

#[derive(Clone, Debug)]
struct ChainLevel {
    point: u32,
    gens: Vec<LevelPermutation>,
    orbit: Vec<u32>,
    /// `rep[p]` indexes `reps`/`reps_inv` for orbit points.
    rep: Vec<Option<u32>>,
    reps: Vec<LevelPermutation>,
    reps_inv: Vec<LevelPermutation>,
    tested: HashSet<(u32, u32)>,
}

impl ChainLevel {
    fn new(point: u32, npoints: usize, identity: &LevelPermutation) -> Self {
        let mut rep = vec![None; npoints];
        rep[point as usize] = Some(0);
        ChainLevel {
            point,
            gens: Vec::new(),
            orbit: vec![point],
            rep,
            reps: vec![identity.clone()],
            reps_inv: vec![identity.clone()],
            tested: HashSet::new(),
        }
    }

    /// Extends the orbit after `gens` grew; old representatives are kept.
    fn extend_orbit(&mut self) {
        // New generators must also act on old points, so rescan everything.
        let mut k = 0;
        while k < self.orbit.len() {
            let p = self.orbit[k];
            let u = self.reps[self.rep[p as usize].expect("orbit point") as usize].clone();
            for g in &self.gens {
                let q = g.image(p as usize);
                if self.rep[q].is_none() {
                    let v = &u * g;
                    self.rep[q] = Some(self.reps.len() as u32);
                    self.reps_inv.push(v.inverse());
                    self.reps.push(v);
                    self.orbit.push(q as u32);
                }
            }
            k += 1;
        }
    }

    fn transversal(&self, p: usize) -> Option<(&LevelPermutation, &LevelPermutation)> {
        self.rep[p].map(|i| (&self.reps[i as usize], &self.reps_inv[i as usize]))
    }
}

/// Base and strong generating set for a group of level permutations.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    level: usize,
    npoints: usize,
    levels: Vec<ChainLevel>,
    order: BigUint,
}

impl StabilizerChain {
    /// Deterministic Schreier–Sims. `base_prefix` fixes the first base points
    /// (redundant points allowed); further points are first moved points.
    pub fn build(
        degree: usize,
        level: usize,
        gens: &[LevelPermutation],
        base_prefix: &[u32],
    ) -> Self {
        let identity = LevelPermutation::identity(degree, level);
        let npoints = identity.size();
        let mut seen = HashSet::new();
        let gens: Vec<LevelPermutation> = gens
            .iter()
            .filter(|g| !g.is_identity())
            .filter(|g| seen.insert((*g).clone()))
            .cloned()
            .collect();
        let mut levels: Vec<ChainLevel> = base_prefix
            .iter()
            .map(|&p| ChainLevel::new(p, npoints, &identity))
            .collect();
        for g in &gens {
            if !levels.iter().any(|l| g.image(l.point as usize) != l.point as usize) {
                let p = g.first_moved().expect("non-identity") as u32;
                levels.push(ChainLevel::new(p, npoints, &identity));
            }
        }
        for g in &gens {
            for l in levels.iter_mut() {
                l.gens.push(g.clone());
                if g.image(l.point as usize) != l.point as usize {
                    break;
                }
            }
        }
        for l in levels.iter_mut() {
            l.extend_orbit();
        }
        let mut chain = StabilizerChain {
            degree,
            level,
            npoints,
            levels,
            order: BigUint::one(),
        };
        chain.complete();
        chain.order = chain
            .levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
        chain
    }

    /// Sifts every Schreier generator until all of them reduce to the identity.
    fn complete(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let iu = i as usize;
            let mut k = 0;
            while k < self.levels[iu].orbit.len() {
                let beta = self.levels[iu].orbit[k];
                for gi in 0..self.levels[iu].gens.len() {
                    if self.levels[iu].tested.contains(&(beta, gi as u32)) {
                        continue;
                    }
                    self.levels[iu].tested.insert((beta, gi as u32));
                    let lvl = &self.levels[iu];
                    let s = &lvl.gens[gi];
                    let (u, _) = lvl.transversal(beta as usize).expect("orbit point");
                    let img = s.image(beta as usize);
                    let (_, v_inv) = lvl.transversal(img).expect("orbit closed");
                    let us = u * s;
                    if us == *lvl.transversal(img).expect("orbit").0 {
                        continue;
                    }
                    let h = &us * v_inv;
                    let (res, j) = self.strip_from(h, iu + 1);
                    if j < self.levels.len() || !res.is_identity() {
                        if j == self.levels.len() {
                            let p = res.first_moved().expect("non-identity residue") as u32;
                            let identity = LevelPermutation::identity(self.degree, self.level);
                            self.levels.push(ChainLevel::new(p, self.npoints, &identity));
                        }
                        for l in iu + 1..=j {
                            self.levels[l].gens.push(res.clone());
                            self.levels[l].extend_orbit();
                        }
                        i = j as isize;
                        continue 'outer;
                    }
                }
                k += 1;
            }
            i -= 1;
        }
    }

    /// Sifts `h` through levels `from..`; returns residue and stopping level.
    fn strip_from(&self, mut h: LevelPermutation, from: usize) -> (LevelPermutation, usize) {
        for l in from..self.levels.len() {
            let lvl = &self.levels[l];
            let g = h.image(lvl.point as usize);
            match lvl.transversal(g) {
                None => return (h, l),
                Some((_, inv)) => h = &h * inv,
            }
        }
        let n = self.levels.len();
        (h, n)
    }

    /// Sifting residue and depth reached; members give `(identity, base_len)`.
    pub fn sift(&self, p: &LevelPermutation) -> (LevelPermutation, usize) {
        self.strip_from(p.clone(), 0)
    }

    pub fn contains(&self, p: &LevelPermutation) -> bool {
        let (res, j) = self.sift(p);
        j == self.levels.len() && res.is_identity()
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// All strong generators, deduplicated, in chain order.
    pub fn strong_generators(&self) -> Vec<LevelPermutation> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if seen.insert(g.clone()) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn npoints(&self) -> usize {
        self.npoints
    }

    /// Product of uniformly chosen coset representatives: exactly uniform.
    pub fn random_element(&self, rng: &mut Rng) -> LevelPermutation {
        let mut g = LevelPermutation::identity(self.degree, self.level);
        for l in self.levels.iter().rev() {
            let k = rng.gen_range(0..l.orbit.len());
            let (u, _) = l.transversal(l.orbit[k] as usize).expect("orbit point");
            g = &g * u;
        }
        g
    }

    /// A member mapping each prefix base point to the given image, if any.
    ///
    /// `images[k]` is the required image of `base()[k]`.
    pub fn find_with_base_images(&self, images: &[u32]) -> Option<LevelPermutation> {
        assert!(images.len() <= self.levels.len());
        let mut targets: Vec<u32> = images.to_vec();
        let mut reps = Vec::with_capacity(images.len());
        for l in 0..images.len() {
            let lvl = &self.levels[l];
            let (u, u_inv) = lvl.transversal(targets[l] as usize)?;
            for t in targets.iter_mut().skip(l + 1) {
                *t = u_inv.image(*t as usize) as u32;
            }
            reps.push(u);
        }
        let mut g = LevelPermutation::identity(self.degree, self.level);
        for u in reps.iter().rev() {
            g = &g * u;
        }
        Some(g)
    }

    /// Every member, for small groups only.
    pub fn elements(&self) -> Vec<LevelPermutation> {
        let mut out = vec![LevelPermutation::identity(self.degree, self.level)];
        for l in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * l.orbit.len());
            for g in &out {
                for &p in &l.orbit {
                    let (u, _) = l.transversal(p as usize).expect("orbit point");
                    next.push(g * u);
                }
            }
            out = next;
        }
        out
    }
}
