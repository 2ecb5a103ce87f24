//! Ramification portraits of cubic polynomials with two finite critical
//! points, and the model generators they determine.
//!
//! DSL, one statement per line, `#` starts a comment:
//!
//! ```text
//! critical c1 deg=2
//! critical c2 deg=2
//! map c1 -> c1
//! map c2 -> c2
//! ```
//!
//! Every vertex needs exactly one `map` line; the point at infinity is
//! implicit.

mod enumerate;
mod model;
mod parse;

pub use enumerate::{random_y_portrait, relabel};
pub use model::{
    compose_families, disjoint_orbit_family, synthesize_model, FamilyChild, FamilyState,
    ModelGenerators, OrbitFamily, Role,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Finite part of a ramification portrait. Vertices are sorted by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Portrait {
    names: Vec<String>,
    image: Vec<usize>,
    deg: Vec<u8>,
}

/// Result of checking incoming multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct YReport {
    pub valid: bool,
    /// `(vertex, incoming multiplicity)` for every vertex above 2.
    pub violators: Vec<(String, usize)>,
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    name: String,
    deg: u8,
    image: String,
}

#[derive(Serialize, Deserialize)]
struct PortraitJson {
    vertices: Vec<VertexJson>,
}

const META_OPEN: &str = "/* portrait-dsl";

impl Portrait {
    pub fn parse(text: &str) -> Result<Self> {
        parse::parse(text)
    }

    /// Builds from `(name, image, deg)` triples and checks the structure.
    pub fn from_edges(edges: &[(&str, &str, u8)]) -> Result<Self> {
        let mut text = String::new();
        for (n, _, d) in edges {
            if *d == 2 {
                text.push_str(&format!("critical {n} deg=2\n"));
            } else if *d != 1 {
                return Err(Error::arg(format!("degree {d} not allowed")));
            }
        }
        for (n, i, _) in edges {
            text.push_str(&format!("map {n} -> {i}\n"));
        }
        Self::parse(&text)
    }

    /// Invariants beyond syntax; the error names the offending vertex.
    fn structural_check(&self) -> std::result::Result<(), (String, String)> {
        let crit = self.critical();
        if self.image[crit[0]] == self.image[crit[1]] {
            return Err((
                self.names[crit[0]].clone(),
                "the two critical points have the same image".into(),
            ));
        }
        let post = self.postcritical_mask();
        for v in 0..self.len() {
            if self.deg[v] == 1 && !post[v] {
                return Err((
                    self.names[v].clone(),
                    format!("{} is not in a critical orbit", self.names[v]),
                ));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn image(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn deg(&self, v: usize) -> u8 {
        self.deg[v]
    }

    /// The two critical points, lexicographically ordered.
    pub fn critical(&self) -> [usize; 2] {
        let c: Vec<usize> = (0..self.len()).filter(|&v| self.deg[v] == 2).collect();
        [c[0], c[1]]
    }

    /// `P = ⋃_{n ≥ 1} f^n(C)`.
    pub fn postcritical_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        for c in self.critical() {
            let mut v = self.image[c];
            while !mask[v] {
                mask[v] = true;
                v = self.image[v];
            }
        }
        mask
    }

    pub fn postcritical(&self) -> Vec<usize> {
        let m = self.postcritical_mask();
        (0..self.len()).filter(|&v| m[v]).collect()
    }

    /// Preimages inside the portrait, in name order.
    pub fn preimages(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.image[u] == v).collect()
    }

    pub fn incoming_multiplicity(&self, v: usize) -> usize {
        self.preimages(v).iter().map(|&u| self.deg[u] as usize).sum()
    }

    /// `(s, m)`: preperiod and period of the orbit of `f(c)`.
    pub fn orbit_params(&self, c: usize) -> (usize, usize) {
        let mut seen: Vec<Option<usize>> = vec![None; self.len()];
        let mut v = self.image[c];
        let mut t = 0;
        while seen[v].is_none() {
            seen[v] = Some(t);
            v = self.image[v];
            t += 1;
        }
        let first = seen[v].expect("revisited");
        (first, t - first)
    }

    /// Whether the forward orbits of the two critical points are disjoint.
    pub fn disjoint_orbits(&self) -> bool {
        let orbit = |c: usize| {
            let mut s = vec![false; self.len()];
            let mut v = c;
            while !s[v] {
                s[v] = true;
                v = self.image[v];
            }
            s
        };
        let [c1, c2] = self.critical();
        let (o1, o2) = (orbit(c1), orbit(c2));
        !(0..self.len()).any(|v| o1[v] && o2[v])
    }

    /// Every vertex other than `∞` has at most two incoming edges.
    pub fn validate_y(&self) -> YReport {
        let violators: Vec<(String, usize)> = (0..self.len())
            .filter_map(|v| {
                let m = self.incoming_multiplicity(v);
                (m > 2).then(|| (self.names[v].clone(), m))
            })
            .collect();
        YReport {
            valid: violators.is_empty(),
            violators,
        }
    }

    /// Canonical DSL text: critical lines, then map lines, in name order.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        for c in self.critical() {
            out.push_str(&format!("critical {} deg=2\n", self.names[c]));
        }
        for v in 0..self.len() {
            out.push_str(&format!(
                "map {} -> {}\n",
                self.names[v], self.names[self.image[v]]
            ));
        }
        out
    }

    /// Graphviz digraph with `deg` parallel edges per vertex and the triple
    /// loop at `∞`. The DSL text is embedded in a comment block.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph portrait {\n");
        out.push_str(META_OPEN);
        out.push('\n');
        for l in self.to_dsl().lines() {
            out.push_str(&format!("{l}\n"));
        }
        out.push_str("*/\n");
        out.push_str("  \"inf\" [label=\"∞\"];\n");
        for v in 0..self.len() {
            let shape = if self.deg[v] == 2 { "doublecircle" } else { "circle" };
            out.push_str(&format!("  \"{}\" [shape={shape}];\n", self.names[v]));
        }
        for v in 0..self.len() {
            for _ in 0..self.deg[v] {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\";\n",
                    self.names[v], self.names[self.image[v]]
                ));
            }
        }
        for _ in 0..3 {
            out.push_str("  \"inf\" -> \"inf\";\n");
        }
        out.push_str("}\n");
        out
    }

    /// Recovers the portrait from the comment block of [`Portrait::export_dot`].
    pub fn from_dot_meta(dot: &str) -> Result<Self> {
        let start = dot
            .find(META_OPEN)
            .ok_or_else(|| Error::arg("no portrait-dsl block"))?
            + META_OPEN.len();
        let end = dot[start..]
            .find("*/")
            .ok_or_else(|| Error::arg("unterminated portrait-dsl block"))?;
        Self::parse(&dot[start..start + end])
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = PortraitJson {
            vertices: (0..self.len())
                .map(|v| VertexJson {
                    name: self.names[v].clone(),
                    deg: self.deg[v],
                    image: self.names[self.image[v]].clone(),
                })
                .collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: PortraitJson = serde_json::from_value(v.clone())?;
        let edges: Vec<(&str, &str, u8)> = j
            .vertices
            .iter()
            .map(|x| (x.name.as_str(), x.image.as_str(), x.deg))
            .collect();
        Self::from_edges(&edges)
    }
}

/// Portraits bundled with the crate, addressable by name from the CLI.
pub fn builtin(name: &str) -> Option<Portrait> {
    let text = match name {
        "two-fixed" => TWO_FIXED,
        "fig1" => FIG1,
        "basilica-like" => PERIOD_TWO,
        _ => return None,
    };
    Some(Portrait::parse(text).expect("builtin portrait parses"))
}

pub const BUILTIN_NAMES: &[&str] = &["two-fixed", "fig1", "basilica-like"];

const TWO_FIXED: &str = "critical c1 deg=2\ncritical c2 deg=2\nmap c1 -> c1\nmap c2 -> c2\n";

const FIG1: &str = "\
critical c1 deg=2
critical c2 deg=2
map c1 -> p1
map p1 -> p2
map p2 -> p3
map p3 -> p4
map p4 -> p5
map p5 -> p3
map c2 -> q2
map q2 -> c2
";

const PERIOD_TWO: &str = "\
critical c1 deg=2
critical c2 deg=2
map c1 -> c1
map c2 -> q2
map q2 -> c2
";
