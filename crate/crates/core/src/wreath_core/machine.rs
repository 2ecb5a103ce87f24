use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::{LevelPermutation, Permutation};
use crate::{limits, Error, Result};

/// A child reference in a wreath recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Child {
    Identity,
    State(usize),
}

/// One state `g = (g|_0, …, g|_{d-1}) σ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    pub name: String,
    pub root: Permutation,
    pub children: Vec<Child>,
}

/// A finite table of wreath recursions whose children are states or `1`.
pub struct RecursionMachine {
    degree: usize,
    states: Vec<State>,
    index: HashMap<String, usize>,
    tables: Mutex<BTreeMap<usize, Arc<Vec<LevelPermutation>>>>,
}

impl Clone for RecursionMachine {
    fn clone(&self) -> Self {
        RecursionMachine {
            degree: self.degree,
            states: self.states.clone(),
            index: self.index.clone(),
            tables: Mutex::new(BTreeMap::new()),
        }
    }
}

impl PartialEq for RecursionMachine {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.states == other.states
    }
}

impl Eq for RecursionMachine {}

impl fmt::Debug for RecursionMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RecursionMachine")
            .field("degree", &self.degree)
            .field("states", &self.states)
            .finish()
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "id"
        && name != "1"
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

impl RecursionMachine {
    pub fn new(degree: usize, states: Vec<State>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::arg("degree must be positive"));
        }
        let mut index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if !valid_name(&s.name) {
                return Err(Error::arg(format!("invalid state name {:?}", s.name)));
            }
            if index.insert(s.name.clone(), i).is_some() {
                return Err(Error::arg(format!("duplicate state name {:?}", s.name)));
            }
            if s.root.degree() != degree || s.children.len() != degree {
                return Err(Error::arg(format!("state {} has wrong arity", s.name)));
            }
            for c in &s.children {
                if let Child::State(j) = c {
                    if *j >= states.len() {
                        return Err(Error::arg(format!(
                            "state {} refers to missing state {j}",
                            s.name
                        )));
                    }
                }
            }
        }
        Ok(RecursionMachine {
            degree,
            states,
            index,
            tables: Mutex::new(BTreeMap::new()),
        })
    }

    /// Builds from `(name, root, children)` triples with children given by
    /// name or `"id"`.
    pub fn from_names(degree: usize, spec: &[(&str, Permutation, Vec<&str>)]) -> Result<Self> {
        let names: HashMap<&str, usize> =
            spec.iter().enumerate().map(|(i, s)| (s.0, i)).collect();
        let mut states = Vec::with_capacity(spec.len());
        for (name, root, children) in spec {
            let children = children
                .iter()
                .map(|c| match *c {
                    "id" | "1" => Ok(Child::Identity),
                    other => names
                        .get(other)
                        .map(|&i| Child::State(i))
                        .ok_or_else(|| Error::arg(format!("unknown child {other:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            states.push(State {
                name: name.to_string(),
                root: root.clone(),
                children,
            });
        }
        Self::new(degree, states)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &State {
        &self.states[i]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The stored child of `state` at letter `x`.
    pub fn state_section(&self, state: usize, x: usize) -> Result<Child> {
        let s = self
            .states
            .get(state)
            .ok_or_else(|| Error::arg(format!("no state {state}")))?;
        s.children
            .get(x)
            .copied()
            .ok_or_else(|| Error::arg(format!("letter {x} out of range 0..{}", self.degree)))
    }

    /// Level-`n` tables of every state, cached per level.
    pub fn level_tables(&self, n: usize) -> Result<Arc<Vec<LevelPermutation>>> {
        limits::check_level(n, "level table")?;
        if let Some(t) = self.tables.lock().expect("table cache").get(&n) {
            return Ok(t.clone());
        }
        let d = self.degree;
        let mut cur: Vec<LevelPermutation> = (0..self.states.len())
            .map(|_| LevelPermutation::identity(d, 0))
            .collect();
        let id_tables: Vec<LevelPermutation> =
            (0..=n).map(|k| LevelPermutation::identity(d, k)).collect();
        for k in 1..=n {
            let next = self
                .states
                .iter()
                .map(|s| {
                    let secs: Vec<LevelPermutation> = s
                        .children
                        .iter()
                        .map(|c| match c {
                            Child::Identity => id_tables[k - 1].clone(),
                            Child::State(j) => cur[*j].clone(),
                        })
                        .collect();
                    LevelPermutation::from_wreath(&secs, &s.root)
                })
                .collect();
            cur = next;
        }
        let arc = Arc::new(cur);
        self.tables
            .lock()
            .expect("table cache")
            .insert(n, arc.clone());
        Ok(arc)
    }

    /// Recursion of state `i` in wreath notation, e.g. `(a,1,1)(1 2)`.
    pub fn recursion_string(&self, i: usize) -> String {
        let s = &self.states[i];
        let mut out = String::new();
        if s.children.iter().any(|c| *c != Child::Identity) {
            let parts: Vec<String> = s
                .children
                .iter()
                .map(|c| match c {
                    Child::Identity => "1".to_string(),
                    Child::State(j) => self.states[*j].name.clone(),
                })
                .collect();
            out.push_str(&format!("({})", parts.join(",")));
        }
        if !s.root.is_identity() {
            out.push_str(&s.root.to_string());
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    /// `name=recursion` for every state, joined by `"; "`.
    pub fn listing(&self) -> String {
        (0..self.states.len())
            .map(|i| format!("{}={}", self.states[i].name, self.recursion_string(i)))
            .collect::<Vec<_>>()
            .join("; ")
    }

    pub fn to_json(&self) -> MachineJson {
        MachineJson {
            degree: self.degree,
            states: self
                .states
                .iter()
                .map(|s| StateJson {
                    name: s.name.clone(),
                    root_perm: s.root.images_1based(),
                    children: s
                        .children
                        .iter()
                        .map(|c| match c {
                            Child::Identity => "id".to_string(),
                            Child::State(j) => self.states[*j].name.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &MachineJson) -> Result<Self> {
        let spec: Vec<(&str, Permutation, Vec<&str>)> = j
            .states
            .iter()
            .map(|s| {
                Ok((
                    s.name.as_str(),
                    Permutation::from_images_1based(&s.root_perm)?,
                    s.children.iter().map(String::as_str).collect(),
                ))
            })
            .collect::<Result<_>>()?;
        Self::from_names(j.degree, &spec)
    }
}

/// JSON form: `{degree, states:[{name, root_perm, children}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineJson {
    pub degree: usize,
    pub states: Vec<StateJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJson {
    pub name: String,
    pub root_perm: Vec<usize>,
    pub children: Vec<String>,
}
