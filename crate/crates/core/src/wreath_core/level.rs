use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{Permutation, Vertex};
use crate::{Error, Result};

/// The action of a tree automorphism on the `d^n` vertices of level `n`.
///
/// Vertex `x_1 … x_n` has index `Σ x_i d^(n-i)`. Products follow the right
/// action: `(p * q)[i] = q[p[i]]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelPermutation {
    degree: usize,
    level: usize,
    images: Vec<u32>,
}

pub(crate) fn pow_usize(d: usize, n: usize) -> usize {
    d.checked_pow(n as u32).expect("level table size overflow")
}

impl LevelPermutation {
    pub fn identity(degree: usize, level: usize) -> Self {
        let size = pow_usize(degree, level);
        LevelPermutation {
            degree,
            level,
            images: (0..size as u32).collect(),
        }
    }

    /// Checked constructor: `images` must be a tree automorphism of `T_n`.
    pub fn from_images(degree: usize, level: usize, images: Vec<u32>) -> Result<Self> {
        let p = LevelPermutation {
            degree,
            level,
            images,
        };
        p.validate()?;
        Ok(p)
    }

    /// An automorphism acting only at the root.
    pub fn from_root(root: &Permutation, level: usize) -> Self {
        let d = root.degree();
        let children = vec![Self::identity(d, level.saturating_sub(1)); d];
        if level == 0 {
            return Self::identity(d, 0);
        }
        Self::from_wreath(&children, root)
    }

    /// Builds `(s_0, …, s_{d-1}) σ` from sections of level `n - 1`.
    pub fn from_wreath(sections: &[LevelPermutation], root: &Permutation) -> Self {
        let d = root.degree();
        assert_eq!(sections.len(), d, "need one section per letter");
        let sub = sections[0].level;
        assert!(sections.iter().all(|s| s.level == sub && s.degree == d));
        let block = pow_usize(d, sub);
        let mut images = Vec::with_capacity(block * d);
        for (x, s) in sections.iter().enumerate() {
            let base = (root.image(x) * block) as u32;
            images.extend(s.images.iter().map(|&u| base + u));
        }
        LevelPermutation {
            degree: d,
            level: sub + 1,
            images,
        }
    }

    /// Checks bijectivity and that every prefix level is permuted consistently.
    pub fn validate(&self) -> Result<()> {
        let size = pow_usize(self.degree, self.level);
        if self.images.len() != size {
            return Err(Error::arg(format!(
                "table has {} entries, expected {size}",
                self.images.len()
            )));
        }
        let mut seen = vec![false; size];
        for &i in &self.images {
            let i = i as usize;
            if i >= size || seen[i] {
                return Err(Error::arg("level table is not a bijection"));
            }
            seen[i] = true;
        }
        let mut block = 1;
        for _ in 0..self.level {
            block *= self.degree;
            for start in (0..size).step_by(block) {
                let head = self.images[start] as usize / block;
                if (start..start + block).any(|i| self.images[i] as usize / block != head) {
                    return Err(Error::arg("level table does not preserve the tree"));
                }
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        LevelPermutation {
            degree: self.degree,
            level: self.level,
            images: inv,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.degree, self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `w · self · w⁻¹`.
    pub fn conjugated_by(&self, w: &LevelPermutation) -> Self {
        &(w * self) * &w.inverse()
    }

    /// Commutator `[self, other] = self⁻¹ other⁻¹ self other`.
    pub fn commutator(&self, other: &LevelPermutation) -> Self {
        &(&(&self.inverse() * &other.inverse()) * self) * other
    }

    /// The root permutation `σ`.
    pub fn root(&self) -> Permutation {
        if self.level == 0 {
            return Permutation::identity(self.degree);
        }
        let block = self.images.len() / self.degree;
        let images = (0..self.degree)
            .map(|x| self.images[x * block] as usize / block)
            .collect();
        Permutation::from_images(images).expect("valid level table")
    }

    /// The section at letter `x`, a table of level `n - 1`.
    pub fn section(&self, x: usize) -> Self {
        assert!(self.level >= 1 && x < self.degree);
        let block = self.images.len() / self.degree;
        let images = self.images[x * block..(x + 1) * block]
            .iter()
            .map(|&i| i % block as u32)
            .collect();
        LevelPermutation {
            degree: self.degree,
            level: self.level - 1,
            images,
        }
    }

    /// All first-level sections.
    pub fn sections(&self) -> Vec<Self> {
        (0..self.degree).map(|x| self.section(x)).collect()
    }

    /// Section at an arbitrary vertex of length at most `n`.
    pub fn section_at(&self, v: &Vertex) -> Self {
        let mut cur = self.clone();
        for &x in v.letters() {
            cur = cur.section(x);
        }
        cur
    }

    /// Restriction to level `k ≤ n`.
    pub fn truncate(&self, k: usize) -> Self {
        assert!(k <= self.level);
        let shift = pow_usize(self.degree, self.level - k);
        let images = (0..pow_usize(self.degree, k))
            .map(|i| self.images[i * shift] / shift as u32)
            .collect();
        LevelPermutation {
            degree: self.degree,
            level: k,
            images,
        }
    }

    /// Extends by trivial sections below level `n`.
    pub fn extend(&self, k: usize) -> Self {
        assert!(k >= self.level);
        let shift = pow_usize(self.degree, k - self.level) as u32;
        let mut images = Vec::with_capacity(self.images.len() * shift as usize);
        for &x in &self.images {
            images.extend((0..shift).map(|u| x * shift + u));
        }
        LevelPermutation {
            degree: self.degree,
            level: k,
            images,
        }
    }

    /// Image of a vertex of length exactly `n`.
    pub fn apply(&self, v: &Vertex) -> Vertex {
        assert_eq!(v.len(), self.level);
        Vertex::from_index(self.degree, self.level, self.image(v.index(self.degree)))
    }

    /// Cycle decomposition on points, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s as u32];
            seen[s] = true;
            let mut x = self.images[s] as usize;
            while x != s {
                seen[x] = true;
                c.push(x as u32);
                x = self.images[x] as usize;
            }
            out.push(c);
        }
        out
    }

    /// Lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.sort_unstable();
        lens.dedup();
        lens.into_iter()
            .fold(BigUint::one(), |acc, l| acc.lcm(&BigUint::from(l)))
    }

    /// Parity of the permutation of the `d^n` points.
    pub fn sign(&self) -> i8 {
        let t: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if t.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// The local permutation at every vertex of level `k < n`, as signs.
    pub(crate) fn local_sign_product(&self, k: usize) -> i8 {
        assert!(k < self.level);
        let t = self.truncate(k + 1);
        let d = self.degree;
        let mut prod = 1i8;
        for v in 0..pow_usize(d, k) {
            let local: Vec<usize> = (0..d).map(|x| t.image(v * d + x) % d).collect();
            prod *= Permutation::from_images(local).expect("local perm").sign();
        }
        prod
    }

    /// First point moved, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i)
    }
}

impl Mul for &LevelPermutation {
    type Output = LevelPermutation;
    fn mul(self, rhs: &LevelPermutation) -> LevelPermutation {
        assert_eq!(
            (self.degree, self.level),
            (rhs.degree, rhs.level),
            "level tables of different shape"
        );
        LevelPermutation {
            degree: self.degree,
            level: self.level,
            images: self.images.iter().map(|&x| rhs.images[x as usize]).collect(),
        }
    }
}

impl Mul for LevelPermutation {
    type Output = LevelPermutation;
    fn mul(self, rhs: LevelPermutation) -> LevelPermutation {
        &self * &rhs
    }
}

/// Wreath notation, recursively: `((…),1,1)(1 2)`.
impl fmt::Display for LevelPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let secs = self.sections();
        let root = self.root();
        if secs.iter().any(|s| !s.is_identity()) {
            let parts: Vec<String> = secs.iter().map(|s| s.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        if !root.is_identity() {
            write!(f, "{root}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LevelPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}[{}]", self.level, self)
    }
}
