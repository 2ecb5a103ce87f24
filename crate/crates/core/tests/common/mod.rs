#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use treemono::wreath_core::{Child, Element, Letter, LevelPermutation, Permutation, RecursionMachine, Vertex};

pub fn perm(d: usize, cycles: &[&[usize]]) -> Permutation {
    Permutation::from_cycles(d, cycles).unwrap()
}

/// `a = (a,1,1)(1 2)`, `b = (1,1,b)(2 3)`.
pub fn two_fixed_machine() -> Arc<RecursionMachine> {
    treemono::wreath_core::machine(
        3,
        &[
            ("a", perm(3, &[&[1, 2]]), vec!["a", "id", "id"]),
            ("b", perm(3, &[&[2, 3]]), vec!["id", "id", "b"]),
        ],
    )
    .unwrap()
}

/// A machine with a state of every root type and mixed children.
pub fn mixed_machine() -> Arc<RecursionMachine> {
    treemono::wreath_core::machine(
        3,
        &[
            ("s", perm(3, &[&[1, 2, 3]]), vec!["t", "id", "s"]),
            ("t", perm(3, &[&[1, 3]]), vec!["u", "s", "id"]),
            ("u", perm(3, &[]), vec!["t", "u", "s"]),
        ],
    )
    .unwrap()
}

/// Action of a word on a vertex read straight off the recursions.
pub fn act(m: &RecursionMachine, word: &[Letter], v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    for l in word {
        v = act_letter(m, l.state, l.inverse, &v);
    }
    v
}

fn act_letter(m: &RecursionMachine, state: usize, inverse: bool, v: &[usize]) -> Vec<usize> {
    let Some((&x, rest)) = v.split_first() else {
        return Vec::new();
    };
    let s = m.state(state);
    let (y, child) = if inverse {
        let y = (0..m.degree()).find(|&y| s.root.image(y) == x).unwrap();
        (y, s.children[y])
    } else {
        (s.root.image(x), s.children[x])
    };
    let mut out = vec![y];
    match child {
        Child::Identity => out.extend_from_slice(rest),
        Child::State(j) => out.extend(act_letter(m, j, inverse, rest)),
    }
    out
}

pub fn all_vertices(d: usize, n: usize) -> Vec<Vertex> {
    (0..d.pow(n as u32)).map(|i| Vertex::from_index(d, n, i)).collect()
}

pub fn word_strategy(states: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..states, any::<bool>()), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(state, inverse)| Letter { state, inverse }).collect())
}

pub fn element(m: &Arc<RecursionMachine>, word: Vec<Letter>) -> Element {
    Element::from_word(m, word).unwrap()
}

pub fn s3_strategy() -> impl Strategy<Value = Permutation> {
    Just(vec![0usize, 1, 2]).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

/// A uniform-ish level-`n` table built from random local permutations.
pub fn level_strategy(n: usize) -> BoxedStrategy<LevelPermutation> {
    if n == 0 {
        return Just(LevelPermutation::identity(3, 0)).boxed();
    }
    (s3_strategy(), prop::collection::vec(level_strategy(n - 1), 3))
        .prop_map(|(root, secs)| LevelPermutation::from_wreath(&secs, &root))
        .boxed()
}
