use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use super::{Child, LevelPermutation, RecursionMachine, Vertex};
use crate::{limits, Error, Result};

/// One factor `s^{±1}` of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub state: usize,
    pub inverse: bool,
}

/// An unreduced signed word over the states of a machine.
#[derive(Clone)]
pub struct Element {
    machine: Arc<RecursionMachine>,
    word: Vec<Letter>,
}

impl Element {
    pub fn identity(machine: &Arc<RecursionMachine>) -> Self {
        Element {
            machine: machine.clone(),
            word: Vec::new(),
        }
    }

    pub fn state(machine: &Arc<RecursionMachine>, state: usize) -> Self {
        assert!(state < machine.len(), "state index out of range");
        Element {
            machine: machine.clone(),
            word: vec![Letter {
                state,
                inverse: false,
            }],
        }
    }

    pub fn from_word(machine: &Arc<RecursionMachine>, word: Vec<Letter>) -> Result<Self> {
        if word.iter().any(|l| l.state >= machine.len()) {
            return Err(Error::arg("word refers to a missing state"));
        }
        Ok(Element {
            machine: machine.clone(),
            word,
        })
    }

    /// Words as in the JSON format: `["a", "b^-1"]`.
    pub fn from_names<S: AsRef<str>>(machine: &Arc<RecursionMachine>, names: &[S]) -> Result<Self> {
        let mut word = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref().trim();
            let (base, inverse) = match n.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (n, false),
            };
            let state = machine
                .lookup(base)
                .ok_or_else(|| Error::arg(format!("unknown state {base:?}")))?;
            word.push(Letter { state, inverse });
        }
        Ok(Element {
            machine: machine.clone(),
            word,
        })
    }

    /// Whitespace-separated form of [`Element::from_names`].
    pub fn parse(machine: &Arc<RecursionMachine>, text: &str) -> Result<Self> {
        let names: Vec<&str> = text.split_whitespace().collect();
        Self::from_names(machine, &names)
    }

    pub fn machine(&self) -> &Arc<RecursionMachine> {
        &self.machine
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn word_names(&self) -> Vec<String> {
        self.word
            .iter()
            .map(|l| {
                let n = &self.machine.state(l.state).name;
                if l.inverse {
                    format!("{n}^-1")
                } else {
                    n.clone()
                }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty_word(&self) -> bool {
        self.word.is_empty()
    }

    fn same_machine(&self, other: &Element) {
        assert!(
            Arc::ptr_eq(&self.machine, &other.machine) || *self.machine == *other.machine,
            "elements of different machines"
        );
    }

    pub fn mul(&self, other: &Element) -> Element {
        self.same_machine(other);
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Element {
            machine: self.machine.clone(),
            word,
        }
    }

    pub fn inverse(&self) -> Element {
        Element {
            machine: self.machine.clone(),
            word: self
                .word
                .iter()
                .rev()
                .map(|l| Letter {
                    state: l.state,
                    inverse: !l.inverse,
                })
                .collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Element {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut word = Vec::with_capacity(base.word.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            word.extend_from_slice(&base.word);
        }
        Element {
            machine: self.machine.clone(),
            word,
        }
    }

    /// `w · self · w⁻¹`.
    pub fn conjugated_by(&self, w: &Element) -> Element {
        w.mul(self).mul(&w.inverse())
    }

    /// `[self, other] = self⁻¹ other⁻¹ self other`.
    pub fn commutator(&self, other: &Element) -> Element {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }

    /// `(letter image, child)` of a single factor at letter `x`.
    fn step(&self, l: Letter, x: usize) -> (usize, Option<Letter>) {
        let s = self.machine.state(l.state);
        let (y, child_at) = if l.inverse {
            let y = s.root.inverse().image(x);
            (y, y)
        } else {
            (s.root.image(x), x)
        };
        let child = match s.children[child_at] {
            Child::Identity => None,
            Child::State(j) => Some(Letter {
                state: j,
                inverse: l.inverse,
            }),
        };
        (y, child)
    }

    /// `v · self`.
    pub fn apply(&self, v: &Vertex) -> Vertex {
        let mut letters = v.letters().to_vec();
        for &l in &self.word {
            let mut cur = Some(l);
            for x in letters.iter_mut() {
                let Some(c) = cur else { break };
                let (y, next) = self.step(c, *x);
                *x = y;
                cur = next;
            }
        }
        Vertex::new(letters, self.machine.degree()).expect("letters stay in range")
    }

    /// Section at a single letter as a word.
    pub fn section_letter(&self, x: usize) -> Element {
        let mut x = x;
        let mut word = Vec::with_capacity(self.word.len());
        for &l in &self.word {
            let (y, child) = self.step(l, x);
            if let Some(c) = child {
                word.push(c);
            }
            x = y;
        }
        Element {
            machine: self.machine.clone(),
            word,
        }
    }

    /// `self|_v`.
    pub fn section(&self, v: &Vertex) -> Element {
        let mut cur = self.clone();
        for &x in v.letters() {
            cur = cur.section_letter(x);
        }
        cur
    }

    /// `self|_{T_n}`.
    pub fn restrict(&self, n: usize) -> Result<LevelPermutation> {
        let tables = self.machine.level_tables(n)?;
        let d = self.machine.degree();
        let mut acc = LevelPermutation::identity(d, n);
        for l in &self.word {
            let t = &tables[l.state];
            acc = if l.inverse {
                &acc * &t.inverse()
            } else {
                &acc * t
            };
        }
        Ok(acc)
    }

    /// Root permutation, i.e. the level-1 action.
    pub fn root(&self) -> super::Permutation {
        let mut p = super::Permutation::identity(self.machine.degree());
        for l in &self.word {
            let r = &self.machine.state(l.state).root;
            p = if l.inverse { &p * &r.inverse() } else { &p * r };
        }
        p
    }

    pub fn order_at_level(&self, n: usize) -> Result<BigUint> {
        Ok(self.restrict(n)?.order())
    }

    /// `g_τ = g_{x1} ⋯ g_{xr}` starting at the least letter of `cycle`.
    pub fn cyclic_section_product(&self, cycle: &[usize]) -> Result<Element> {
        let root = self.root();
        let d = self.machine.degree();
        if cycle.is_empty() || cycle.iter().any(|&x| x >= d) {
            return Err(Error::arg("cycle letters out of range"));
        }
        for (k, &x) in cycle.iter().enumerate() {
            if root.image(x) != cycle[(k + 1) % cycle.len()] {
                return Err(Error::arg(format!(
                    "{cycle:?} is not a cycle of the root permutation {root}"
                )));
            }
        }
        let mut x = *cycle.iter().min().expect("nonempty");
        let mut prod = Element::identity(&self.machine);
        for _ in 0..cycle.len() {
            prod = prod.mul(&self.section_letter(x));
            x = root.image(x);
        }
        Ok(prod)
    }

    /// `(Υ_0(e), …, Υ_depth(e))` with `Υ_n(e) = ∏_{|v| = n} sgn(e|_v)`.
    pub fn sign_profile(&self, depth: usize) -> Result<Vec<i8>> {
        limits::check_level(depth + 1, "sign profile")?;
        let t = self.restrict(depth + 1)?;
        Ok((0..=depth).map(|k| t.local_sign_product(k)).collect())
    }
}

/// `restrict(e1, n) == restrict(e2, n)`; the machines only need equal degree.
pub fn eq_at_level(e1: &Element, e2: &Element, n: usize) -> Result<bool> {
    if e1.machine.degree() != e2.machine.degree() {
        return Err(Error::arg("elements over different degrees"));
    }
    Ok(e1.restrict(n)? == e2.restrict(n)?)
}

impl PartialEq for Element {
    /// Syntactic equality of words on the same machine.
    fn eq(&self, other: &Self) -> bool {
        *self.machine == *other.machine && self.word == other.word
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", self.word_names().join(" "))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{self}]")
    }
}
