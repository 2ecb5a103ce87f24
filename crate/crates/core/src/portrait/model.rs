use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Portrait;
use crate::wreath_core::{Child, Permutation, RecursionMachine, State};
use crate::{Error, Result};

/// Which critical-value generator a family or state plays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    A,
    B,
}

impl Role {
    pub fn root(self) -> Permutation {
        match self {
            Role::A => Permutation::from_cycles(3, &[&[1, 2]]).expect("(1 2)"),
            Role::B => Permutation::from_cycles(3, &[&[2, 3]]).expect("(2 3)"),
        }
    }

    /// Section slot of the single nontrivial child (0-based).
    pub fn slot(self) -> usize {
        match self {
            Role::A => 0,
            Role::B => 2,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Role::A => "a",
            Role::B => "b",
        }
    }
}

/// The generators `a, b, c_1, …, c_r` of a model group.
///
/// Machine states are ordered `a, b, c_1, …, c_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelGenerators {
    pub machine: Arc<RecursionMachine>,
    /// Portrait vertex name to state index (empty for family compositions).
    pub labels: Vec<(String, usize)>,
}

impl ModelGenerators {
    pub fn new(machine: RecursionMachine, labels: Vec<(String, usize)>) -> Result<Self> {
        let m = ModelGenerators {
            machine: Arc::new(machine),
            labels,
        };
        let problems = m.check();
        if !problems.is_empty() {
            return Err(Error::Precondition(problems.join("; ")));
        }
        Ok(m)
    }

    pub fn a(&self) -> usize {
        0
    }

    pub fn b(&self) -> usize {
        1
    }

    pub fn r(&self) -> usize {
        self.machine.len() - 2
    }

    pub fn cs(&self) -> std::ops::Range<usize> {
        2..self.machine.len()
    }

    /// The child `x` of `a`.
    pub fn x(&self) -> Child {
        self.machine.state(0).children[0]
    }

    /// The child `y` of `b`.
    pub fn y(&self) -> Child {
        self.machine.state(1).children[2]
    }

    pub fn listing(&self) -> String {
        format!("{}; r={}", self.machine.listing(), self.r())
    }

    /// Violations of the model conditions; empty when all hold.
    pub fn check(&self) -> Vec<String> {
        let m = &self.machine;
        let mut out = Vec::new();
        if m.degree() != 3 {
            out.push("model groups act on the ternary tree".to_string());
            return out;
        }
        if m.len() < 2 {
            out.push("need at least the generators a and b".into());
            return out;
        }
        let id = Permutation::identity(3);
        for (i, role) in [(0, Role::A), (1, Role::B)] {
            let s = m.state(i);
            if s.root != role.root() {
                out.push(format!("{} must have root {}", s.name, role.root()));
            }
            for x in 0..3 {
                if x != role.slot() && s.children[x] != Child::Identity {
                    out.push(format!("{} has a nontrivial section at {}", s.name, x + 1));
                }
            }
        }
        for i in 2..m.len() {
            let s = m.state(i);
            if s.root != id {
                out.push(format!("{} must have trivial root", s.name));
            }
            if !s.children.contains(&Child::Identity) {
                out.push(format!("{} has no trivial section", s.name));
            }
        }
        let mut counts = vec![0usize; m.len()];
        for s in m.states() {
            for c in &s.children {
                if let Child::State(j) = c {
                    counts[*j] += 1;
                }
            }
        }
        for (j, &c) in counts.iter().enumerate() {
            if c != 1 {
                out.push(format!(
                    "{} occurs {c} times among the sections",
                    m.state(j).name
                ));
            }
        }
        for i in 2..m.len() {
            if !reaches_ab(m, i) {
                out.push(format!("{} never reaches a or b", m.state(i).name));
            }
        }
        out
    }
}

fn reaches_ab(m: &RecursionMachine, start: usize) -> bool {
    let mut seen = vec![false; m.len()];
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for c in &m.state(v).children {
            if let Child::State(j) = c {
                if *j < 2 {
                    return true;
                }
                if !seen[*j] {
                    seen[*j] = true;
                    stack.push(*j);
                }
            }
        }
    }
    false
}

/// One generator per finite postcritical point.
pub fn synthesize_model(p: &Portrait) -> Result<ModelGenerators> {
    let y = p.validate_y();
    if !y.valid {
        let names: Vec<String> = y
            .violators
            .iter()
            .map(|(n, k)| format!("{n} ({k} incoming)"))
            .collect();
        return Err(Error::Precondition(format!(
            "portrait violates the incoming-edge bound at {}",
            names.join(", ")
        )));
    }
    let [c1, c2] = p.critical();
    let (va, vb) = (p.image(c1), p.image(c2));
    let post = p.postcritical_mask();
    let mut order = vec![va, vb];
    order.extend(p.postcritical().into_iter().filter(|&v| v != va && v != vb));
    let state_of: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let names: Vec<String> = (0..order.len())
        .map(|i| match i {
            0 => "a".to_string(),
            1 => "b".to_string(),
            k => format!("c{}", k - 1),
        })
        .collect();
    let mut states = Vec::with_capacity(order.len());
    for (i, &v) in order.iter().enumerate() {
        let pre: Vec<usize> = p.preimages(v).into_iter().filter(|&u| post[u]).collect();
        let mut children = vec![Child::Identity; 3];
        let root = match i {
            0 | 1 => {
                let role = if i == 0 { Role::A } else { Role::B };
                if pre.len() > 1 {
                    return Err(Error::Precondition(format!(
                        "critical value {} has {} postcritical preimages",
                        p.name(v),
                        pre.len()
                    )));
                }
                if let Some(&q) = pre.first() {
                    children[role.slot()] = Child::State(state_of[&q]);
                }
                role.root()
            }
            _ => {
                for (slot, &q) in pre.iter().enumerate() {
                    children[slot] = Child::State(state_of[&q]);
                }
                Permutation::identity(3)
            }
        };
        states.push(State {
            name: names[i].clone(),
            root,
            children,
        });
    }
    let labels = order
        .iter()
        .enumerate()
        .map(|(i, &v)| (p.name(v).to_string(), i))
        .collect();
    ModelGenerators::new(RecursionMachine::new(3, states)?, labels)
}

/// Child reference inside a family: identity or the `j`-th family state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyChild {
    Identity,
    Member(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyState {
    pub name: String,
    pub root: Permutation,
    pub children: [FamilyChild; 3],
}

/// `s + m` recursions for one disjoint critical orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitFamily {
    pub role: Role,
    pub s: usize,
    pub m: usize,
    pub states: Vec<FamilyState>,
}

/// The recursions for an orbit with preperiod `s` and period `m`;
/// the first state carries the role's root permutation.
pub fn disjoint_orbit_family(s: usize, m: usize, role: Role) -> Result<OrbitFamily> {
    if m < 1 {
        return Err(Error::arg("period must be at least 1"));
    }
    let k = s + m;
    let name = |j: usize| {
        if k == 1 {
            role.letter().to_string()
        } else {
            format!("{}{}", role.letter(), j + 1)
        }
    };
    let id = Permutation::identity(3);
    let mut states = Vec::with_capacity(k);
    for j in 0..k {
        let mut children = [FamilyChild::Identity; 3];
        let root = if j == 0 {
            if s == 0 {
                children[role.slot()] = FamilyChild::Member(k - 1);
            }
            role.root()
        } else if s > 0 && j == s {
            children[0] = FamilyChild::Member(s - 1);
            children[1] = FamilyChild::Member(k - 1);
            id.clone()
        } else {
            children[0] = FamilyChild::Member(j - 1);
            id.clone()
        };
        states.push(FamilyState {
            name: name(j),
            root,
            children,
        });
    }
    Ok(OrbitFamily {
        role,
        s,
        m,
        states,
    })
}

impl OrbitFamily {
    /// The family alone as a machine (its states only).
    pub fn machine(&self) -> Result<RecursionMachine> {
        let states = self
            .states
            .iter()
            .map(|f| State {
                name: f.name.clone(),
                root: f.root.clone(),
                children: f
                    .children
                    .iter()
                    .map(|c| match c {
                        FamilyChild::Identity => Child::Identity,
                        FamilyChild::Member(j) => Child::State(*j),
                    })
                    .collect(),
            })
            .collect();
        RecursionMachine::new(3, states)
    }
}

/// Model generators of two disjoint orbits: `fa` supplies `a`, `fb` supplies `b`.
pub fn compose_families(fa: &OrbitFamily, fb: &OrbitFamily) -> Result<ModelGenerators> {
    if fa.role != Role::A || fb.role != Role::B {
        return Err(Error::arg("first family must have role a, second role b"));
    }
    // global index: a-family head, b-family head, then the rest in order
    let ka = fa.states.len();
    let kb = fb.states.len();
    let index = |fam: usize, j: usize| -> usize {
        match (fam, j) {
            (0, 0) => 0,
            (1, 0) => 1,
            (0, j) => 1 + j,
            (_, j) => ka + j,
        }
    };
    let mut slots: Vec<Option<State>> = vec![None; ka + kb];
    for (fam, f) in [fa, fb].iter().enumerate() {
        for (j, st) in f.states.iter().enumerate() {
            slots[index(fam, j)] = Some(State {
                name: st.name.clone(),
                root: st.root.clone(),
                children: st
                    .children
                    .iter()
                    .map(|c| match c {
                        FamilyChild::Identity => Child::Identity,
                        FamilyChild::Member(i) => Child::State(index(fam, *i)),
                    })
                    .collect(),
            });
        }
    }
    let states = slots.into_iter().map(|s| s.expect("filled")).collect();
    ModelGenerators::new(RecursionMachine::new(3, states)?, Vec::new())
}
