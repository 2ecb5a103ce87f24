//! Permutations, wreath-recursion machines, words and level tables.

mod element;
mod level;
mod machine;
mod perm;
mod vertex;

pub use element::{eq_at_level, Element, Letter};
pub use level::LevelPermutation;
pub(crate) use level::pow_usize;
pub use machine::{Child, MachineJson, RecursionMachine, State, StateJson};
pub use perm::Permutation;
pub use vertex::Vertex;

use std::sync::Arc;

/// Machine with one state per `(name, root, children)` triple, shared.
pub fn machine(degree: usize, spec: &[(&str, Permutation, Vec<&str>)]) -> Result<Arc<RecursionMachine>, crate::Error> {
    RecursionMachine::from_names(degree, spec).map(Arc::new)
}

/// The standard odometer `t = (1, …, 1, t)(1 2 … d)` on degree `d`.
pub fn standard_odometer(d: usize) -> Element {
    let cycle: Vec<usize> = (1..=d).collect();
    let root = Permutation::from_cycles(d, &[&cycle]).expect("cycle");
    let mut children = vec!["id"; d];
    children[d - 1] = "t";
    let m = machine(d, &[("t", root, children)]).expect("odometer machine");
    Element::state(&m, 0)
}

/// Element of level `n` with trivial sections below `n`, as a machine word.
///
/// Each distinct section becomes one state, so the result is a finite-state
/// automorphism agreeing with `p` on `T_n`.
pub fn finite_depth_element(p: &LevelPermutation) -> Element {
    use std::collections::HashMap;
    let d = p.degree();
    let mut order: Vec<LevelPermutation> = Vec::new();
    let mut ids: HashMap<LevelPermutation, usize> = HashMap::new();
    let mut stack = vec![p.clone()];
    while let Some(q) = stack.pop() {
        if q.is_identity() || ids.contains_key(&q) {
            continue;
        }
        ids.insert(q.clone(), order.len());
        order.push(q.clone());
        for s in q.sections() {
            stack.push(s);
        }
    }
    if order.is_empty() {
        let m = Arc::new(RecursionMachine::new(d, Vec::new()).expect("empty machine"));
        return Element::identity(&m);
    }
    let states = order
        .iter()
        .enumerate()
        .map(|(i, q)| State {
            name: format!("s{i}"),
            root: q.root(),
            children: q
                .sections()
                .iter()
                .map(|s| match ids.get(s) {
                    Some(&j) if !s.is_identity() => Child::State(j),
                    _ => Child::Identity,
                })
                .collect(),
        })
        .collect();
    let m = Arc::new(RecursionMachine::new(d, states).expect("finite-depth machine"));
    Element::state(&m, 0)
}
