use std::collections::BTreeMap;

use super::Portrait;
use crate::{Error, Result};

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Token with its 1-based column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, t)| (line[..s].chars().count() + 1, t))
        .collect()
}

struct Pos {
    line: usize,
    column: usize,
}

fn check_name(name: &str, line: usize, column: usize) -> Result<()> {
    if !is_name(name) {
        return Err(perr(line, column, format!("invalid vertex name {name:?}")));
    }
    if name == "inf" {
        return Err(perr(line, column, "the point at infinity is implicit"));
    }
    Ok(())
}

pub(super) fn parse(text: &str) -> Result<Portrait> {
    let mut critical: Vec<(String, Pos)> = Vec::new();
    let mut maps: BTreeMap<String, (String, Pos, Pos)> = BTreeMap::new();
    let mut last_line = 1;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokens(body);
        match toks.as_slice() {
            [] => {}
            [(_, "critical"), (nc, name), (dc, deg)] => {
                check_name(name, line, *nc)?;
                if *deg != "deg=2" {
                    return Err(perr(line, *dc, format!("expected deg=2, found {deg:?}")));
                }
                if critical.iter().any(|(n, _)| n == name) {
                    return Err(perr(line, *nc, format!("critical point {name} declared twice")));
                }
                critical.push((
                    name.to_string(),
                    Pos {
                        line,
                        column: *nc,
                    },
                ));
            }
            [(_, "map"), (sc, src), (_, "->"), (tc, dst)] => {
                check_name(src, line, *sc)?;
                check_name(dst, line, *tc)?;
                if maps.contains_key(*src) {
                    return Err(perr(line, *sc, format!("duplicate outgoing edge from {src}")));
                }
                maps.insert(
                    src.to_string(),
                    (
                        dst.to_string(),
                        Pos {
                            line,
                            column: *sc,
                        },
                        Pos {
                            line,
                            column: *tc,
                        },
                    ),
                );
            }
            [(c, kw), ..] if *kw == "critical" || *kw == "map" => {
                return Err(perr(line, *c, format!("malformed {kw} line")));
            }
            [(c, other), ..] => {
                return Err(perr(line, *c, format!("unknown keyword {other:?}")));
            }
        }
    }
    if critical.len() != 2 {
        let (line, column) = critical
            .get(2)
            .map(|(_, p)| (p.line, p.column))
            .unwrap_or((last_line, 1));
        return Err(perr(
            line,
            column,
            format!("expected exactly 2 critical points, found {}", critical.len()),
        ));
    }
    let mut names: Vec<String> = maps.keys().cloned().collect();
    for (c, _) in &critical {
        if !maps.contains_key(c) {
            let p = &critical.iter().find(|(n, _)| n == c).expect("present").1;
            return Err(perr(p.line, p.column, format!("critical point {c} has no map line")));
        }
    }
    names.sort();
    let index: BTreeMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut image = vec![0; names.len()];
    for (src, (dst, _, tpos)) in &maps {
        let j = *index.get(dst.as_str()).ok_or_else(|| {
            perr(
                tpos.line,
                tpos.column,
                format!("unknown vertex {dst} (no map line declares it)"),
            )
        })?;
        image[index[src.as_str()]] = j;
    }
    let mut deg = vec![1u8; names.len()];
    for (c, _) in &critical {
        deg[index[c.as_str()]] = 2;
    }
    let p = Portrait {
        names,
        image,
        deg,
    };
    if let Err(msg) = p.structural_check() {
        let pos = maps
            .get(&msg.0)
            .map(|m| (m.1.line, m.1.column))
            .unwrap_or((1, 1));
        return Err(perr(pos.0, pos.1, msg.1));
    }
    Ok(p)
}
