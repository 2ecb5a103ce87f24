use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A word over the alphabet `0..d`; the empty word is the root.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Vertex(Vec<usize>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    pub fn new(letters: Vec<usize>, d: usize) -> Result<Self> {
        if letters.iter().any(|&x| x >= d) {
            return Err(Error::arg(format!("letter out of range for degree {d}")));
        }
        Ok(Vertex(letters))
    }

    /// Parses 1-based letters separated by spaces, e.g. `"1 2"`.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        let mut v = Vec::new();
        for tok in text.split_whitespace() {
            let x: usize = tok
                .parse()
                .map_err(|_| Error::arg(format!("bad letter {tok:?}")))?;
            if x == 0 || x > d {
                return Err(Error::arg(format!("letter {x} out of range 1..={d}")));
            }
            v.push(x - 1);
        }
        Ok(Vertex(v))
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Lexicographic index among the `d^n` vertices of its level.
    pub fn index(&self, d: usize) -> usize {
        self.0.iter().fold(0, |acc, &x| acc * d + x)
    }

    pub fn from_index(d: usize, n: usize, mut index: usize) -> Self {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        Vertex(v)
    }

    pub fn prefix(&self, k: usize) -> Vertex {
        Vertex(self.0[..k].to_vec())
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}
