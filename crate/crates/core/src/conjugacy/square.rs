use serde::Serialize;

use crate::wreath_core::{Child, Permutation, RecursionMachine};
use crate::{Error, Result};

/// A word in the free group on the adjoined symbols: `(symbol, exponent)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreeWord(pub Vec<(usize, i64)>);

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    pub fn symbol(i: usize) -> Self {
        FreeWord(vec![(i, 1)])
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FreeWord(v)
    }

    /// Free reduction with merged exponents.
    pub fn reduced(&self) -> FreeWord {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for &(s, e) in &self.0 {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == s => {
                    last.1 += e;
                    if last.1 == 0 {
                        out.pop();
                    }
                }
                _ => out.push((s, e)),
            }
        }
        FreeWord(out)
    }

    /// Reduction up to cyclic permutation.
    pub fn cyclically_reduced(&self) -> FreeWord {
        let mut w = self.reduced().0;
        loop {
            if w.len() < 2 {
                break;
            }
            let (f, l) = (w[0], w[w.len() - 1]);
            if f.0 != l.0 {
                break;
            }
            let e = f.1 + l.1;
            w.pop();
            w[0].1 = e;
            if e == 0 {
                w.remove(0);
            }
        }
        FreeWord(w)
    }
}

/// `g_i ∼ (h_{i,0}, …, h_{i,d-1}) σ_i` over adjoined symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicRecursion {
    pub name: String,
    pub root: Permutation,
    pub sections: Vec<FreeWord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicSystem {
    pub degree: usize,
    pub symbols: Vec<SymbolicRecursion>,
}

impl SymbolicSystem {
    /// The system read off a machine; every child is a symbol or empty.
    pub fn from_machine(m: &RecursionMachine) -> Self {
        SymbolicSystem {
            degree: m.degree(),
            symbols: m
                .states()
                .iter()
                .map(|s| SymbolicRecursion {
                    name: s.name.clone(),
                    root: s.root.clone(),
                    sections: s
                        .children
                        .iter()
                        .map(|c| match c {
                            Child::Identity => FreeWord::empty(),
                            Child::State(j) => FreeWord::symbol(*j),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Builds from names; each section is a whitespace word like `"a b^-1"`,
    /// with `"1"` for the identity. Unknown names are constants of `W` and
    /// are rejected as unsupported.
    pub fn parse(degree: usize, spec: &[(&str, Permutation, Vec<&str>)]) -> Result<Self> {
        let names: Vec<&str> = spec.iter().map(|s| s.0).collect();
        let mut symbols = Vec::new();
        for (name, root, secs) in spec {
            if root.degree() != degree || secs.len() != degree {
                return Err(Error::arg(format!("recursion {name} has wrong arity")));
            }
            let sections = secs
                .iter()
                .map(|w| parse_word(w, &names))
                .collect::<Result<Vec<_>>>()?;
            symbols.push(SymbolicRecursion {
                name: name.to_string(),
                root: root.clone(),
                sections,
            });
        }
        Ok(SymbolicSystem { degree, symbols })
    }
}

fn parse_word(text: &str, names: &[&str]) -> Result<FreeWord> {
    let mut w = Vec::new();
    for tok in text.split_whitespace() {
        if tok == "1" {
            continue;
        }
        let (base, e) = match tok.split_once('^') {
            Some((b, e)) => (
                b,
                e.parse::<i64>()
                    .map_err(|_| Error::arg(format!("bad exponent in {tok:?}")))?,
            ),
            None => (tok, 1),
        };
        let i = names.iter().position(|n| *n == base).ok_or_else(|| {
            Error::Unsupported(format!("{base:?} is not an adjoined symbol (W constants are not supported)"))
        })?;
        w.push((i, e));
    }
    Ok(FreeWord(w))
}

/// One cycle's verdict: the cyclic product reduces to `symbol^power`
/// (`symbol = None` for the empty word).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleEntry {
    pub recursion: usize,
    /// 1-based letters in cycle order.
    pub cycle: Vec<usize>,
    pub symbol: Option<usize>,
    pub power: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub holds: bool,
    pub entries: Vec<CycleEntry>,
    /// `(recursion, cycle)` of the first failing cycle.
    pub violation: Option<(usize, Vec<usize>)>,
}

/// Every cyclic product of every recursion is, up to cyclic reduction in the
/// free group, a power of a single symbol.
pub fn check_square_condition(system: &SymbolicSystem) -> SquareReport {
    let mut entries = Vec::new();
    for (i, r) in system.symbols.iter().enumerate() {
        for c in r.root.cycles() {
            let mut w = FreeWord::empty();
            for &x in &c {
                w = w.concat(&r.sections[x]);
            }
            let red = w.cyclically_reduced();
            let cycle: Vec<usize> = c.iter().map(|x| x + 1).collect();
            match red.0.as_slice() {
                [] => entries.push(CycleEntry {
                    recursion: i,
                    cycle,
                    symbol: None,
                    power: 0,
                }),
                [(s, e)] => entries.push(CycleEntry {
                    recursion: i,
                    cycle,
                    symbol: Some(*s),
                    power: *e,
                }),
                _ => {
                    return SquareReport {
                        holds: false,
                        entries,
                        violation: Some((i, cycle)),
                    }
                }
            }
        }
    }
    SquareReport {
        holds: true,
        entries,
        violation: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_counterexample_fails() {
        let sys = SymbolicSystem::parse(
            2,
            &[
                ("a", Permutation::from_cycles(2, &[&[1, 2]]).unwrap(), vec!["a", "b"]),
                ("b", Permutation::from_cycles(2, &[&[1, 2]]).unwrap(), vec!["1", "1"]),
            ],
        )
        .unwrap();
        let r = check_square_condition(&sys);
        assert!(!r.holds);
        assert_eq!(r.violation, Some((0, vec![1, 2])));
    }

    #[test]
    fn constants_are_unsupported() {
        let e = SymbolicSystem::parse(
            2,
            &[("a", Permutation::identity(2), vec!["a", "w"])],
        )
        .unwrap_err();
        assert!(matches!(e, Error::Unsupported(_)));
    }

    #[test]
    fn cyclic_reduction() {
        // a b a^-1 reduces cyclically to b
        let w = FreeWord(vec![(0, 1), (1, 1), (0, -1)]);
        assert_eq!(w.cyclically_reduced(), FreeWord(vec![(1, 1)]));
        let empty = SymbolicSystem { degree: 3, symbols: vec![] };
        assert!(check_square_condition(&empty).holds);
    }
}
