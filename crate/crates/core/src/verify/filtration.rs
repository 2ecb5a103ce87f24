use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{root_table, tuple, ExperimentReport, LevelReport, ModelGroup, TrialOutcome, Verdict};
use crate::portrait::{disjoint_orbit_family, Role};
use crate::wreath_core::LevelPermutation;
use crate::{limits, Error, Result};

/// Preperiod `s` and period `m` of one critical orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub s: usize,
    pub m: usize,
}

impl FamilyParams {
    pub fn new(s: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::arg("period must be at least 1"));
        }
        Ok(FamilyParams { s, m })
    }

    pub fn len(self) -> usize {
        self.s + self.m
    }

    /// Parses `s,m`.
    pub fn parse(text: &str) -> Result<Self> {
        let (s, m) = text
            .split_once(',')
            .ok_or_else(|| Error::arg(format!("expected s,m but got {text:?}")))?;
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::arg(format!("bad number {t:?}")))
        };
        Self::new(num(s)?, num(m)?)
    }

    /// Parses `s,m:s,m` (role `a` first).
    pub fn parse_pair(text: &str) -> Result<[Self; 2]> {
        let (a, b) = text
            .split_once(':')
            .ok_or_else(|| Error::arg(format!("expected s,m:s,m but got {text:?}")))?;
        Ok([Self::parse(a)?, Self::parse(b)?])
    }
}

impl std::fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{}", self.s, self.m)
    }
}

/// Level-`n` multipliers `g_j ∈ [A_3]^n` with `g_j · b_j = a_j`, where `a_j`
/// and `b_j` are the role-`a` and role-`b` families with parameters `(s, m)`.
pub fn move_generators(s: usize, m: usize, n: usize) -> Result<Vec<LevelPermutation>> {
    if m == 0 {
        return Err(Error::arg("period must be at least 1"));
    }
    limits::check_level(n, "move_generators")?;
    let k = s + m;
    let mut g = vec![LevelPermutation::identity(3, 0); k];
    for level in 1..=n {
        let id = LevelPermutation::identity(3, level - 1);
        let cyc = root_table(&[&[1, 3, 2]], level);
        let next = (0..k)
            .map(|j| {
                if j == 0 {
                    if s == 0 {
                        &tuple([&g[k - 1], &id, &id]) * &cyc
                    } else {
                        cyc.clone()
                    }
                } else if s > 0 && j == s {
                    tuple([&g[s - 1], &g[k - 1], &id])
                } else {
                    tuple([&g[j - 1], &id, &id])
                }
            })
            .collect();
        g = next;
    }
    Ok(g)
}

/// Global state index of member `j` of family `fam` in a composed model
/// whose role-`a` family has `ka` members.
fn member_index(ka: usize, fam: usize, j: usize) -> usize {
    match (fam, j) {
        (0, 0) => 0,
        (1, 0) => 1,
        (0, j) => 1 + j,
        (_, j) => ka + j,
    }
}

/// How sub family `i` is covered by the sup families, if at all.
fn hypothesis(sub: FamilyParams, sup: &[FamilyParams; 2]) -> Option<usize> {
    (0..2)
        .find(|&j| sub == sup[j])
        .or_else(|| (0..2).find(|&j| sub.s == 0 && sup[j].s.is_multiple_of(sub.m) && sup[j].m.is_multiple_of(sub.m)))
}

fn family_tables(p: FamilyParams, role: Role, k: usize) -> Result<Vec<LevelPermutation>> {
    let m = disjoint_orbit_family(p.s, p.m, role)?.machine()?;
    Ok(m.level_tables(k)?.to_vec())
}

/// Result of rebuilding one sub family inside the sup group at level `k`.
struct Construction {
    ok: bool,
    steps: Vec<&'static str>,
    failure: Option<String>,
}

/// Rebuilds the members of sub family `i` from sup family `j` at level `k`
/// using multipliers, products and lifts that lie in the sup group.
fn construct(
    sup_group: &ModelGroup,
    sub_group: &ModelGroup,
    sub: &[FamilyParams; 2],
    sup: &[FamilyParams; 2],
    i: usize,
    j: usize,
    k: usize,
) -> Result<Construction> {
    let gk = sup_group.level_group(k)?;
    let sup_tables = sup_group.generator_tables(k)?;
    let sub_tables = sub_group.generator_tables(k)?;
    let (fp, sp) = (sup[j], sub[i]);
    let mut steps = Vec::new();
    let fail = |steps: Vec<&'static str>, msg: String| Construction {
        ok: false,
        steps,
        failure: Some(msg),
    };
    let t: Vec<LevelPermutation> = (0..fp.len())
        .map(|u| sup_tables[member_index(sup[0].len(), j, u)].clone())
        .collect();
    // Role-a form of the sup family.
    let mut a = t.clone();
    if j == 1 {
        steps.push("move");
        let g = move_generators(fp.s, fp.m, k)?;
        for (u, gu) in g.iter().enumerate() {
            if !gk.contains(gu)? {
                return Ok(fail(steps, format!("multiplier {} not in G_{k}", u + 1)));
            }
            a[u] = gu * &t[u];
        }
    }
    // Role-a form of the sub family.
    let b = if sp == fp {
        a
    } else {
        steps.push("products");
        let r = sp.m;
        let c: Vec<LevelPermutation> = (0..r)
            .map(|u| {
                (u..fp.len())
                    .step_by(r)
                    .fold(LevelPermutation::identity(3, k), |acc, v| &acc * &a[v])
            })
            .collect();
        match conjugators(sup_group, &c, &a[fp.len() - 1], k)? {
            None => return Ok(fail(steps, "no lift with the required sections".into())),
            Some(g) => (0..r).map(|u| c[u].conjugated_by(&g[u])).collect(),
        }
    };
    let want_a = family_tables(sp, Role::A, k)?;
    if b != want_a {
        return Ok(fail(steps, "rebuilt role-a family differs".into()));
    }
    // Back to the role of the sub family.
    let mut built = b;
    if i == 1 {
        steps.push("move");
        let g = move_generators(sp.s, sp.m, k)?;
        for (u, gu) in g.iter().enumerate() {
            if !gk.contains(gu)? {
                return Ok(fail(steps, format!("multiplier {} not in G_{k}", u + 1)));
            }
            built[u] = &gu.inverse() * &built[u];
        }
    }
    for (u, x) in built.iter().enumerate() {
        if *x != sub_tables[member_index(sub[0].len(), i, u)] {
            return Ok(fail(steps, format!("member {} differs from the sub generator", u + 1)));
        }
    }
    Ok(Construction {
        ok: true,
        steps,
        failure: None,
    })
}

/// Level-`k` conjugators `g_u ∈ G_k` with `g_u c_u g_u^{-1}` equal to the
/// period-`r` role-`a` family, built level by level from lifts.
fn conjugators(
    sup_group: &ModelGroup,
    c: &[LevelPermutation],
    a_last: &LevelPermutation,
    k: usize,
) -> Result<Option<Vec<LevelPermutation>>> {
    let r = c.len();
    let mut g = vec![LevelPermutation::identity(3, 0); r];
    for level in 0..k {
        let id = LevelPermutation::identity(3, level);
        let cr = c[r - 1].truncate(level);
        let al = a_last.truncate(level);
        let mut next = Vec::with_capacity(r);
        let first = &(&g[r - 1] * &cr) * &al.inverse();
        match sup_group.lift(level + 1, [Some(&first), Some(&g[r - 1]), None])? {
            Some(h) => next.push(h),
            None => return Ok(None),
        }
        for u in 1..r {
            match sup_group.lift(level + 1, [Some(&g[u - 1]), Some(&id), None])? {
                Some(h) => next.push(h),
                None => return Ok(None),
            }
        }
        g = next;
    }
    Ok(Some(g))
}

/// Sign profiles `(Υ_0, …, Υ_{depth})` of the given tables.
fn profiles(tables: &[LevelPermutation], depth: usize) -> Vec<Vec<i8>> {
    tables
        .iter()
        .map(|t| (0..=depth).map(|d| t.local_sign_product(d)).collect())
        .collect()
}

/// Span of sign vectors over `GF(2)`, as a sorted set of bit masks.
fn span(vectors: &[Vec<i8>]) -> Vec<u64> {
    let mut set = vec![0u64];
    for v in vectors {
        let bits = v
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .fold(0u64, |acc, (i, _)| acc | (1 << i));
        if !set.contains(&bits) {
            let extra: Vec<u64> = set.iter().map(|x| x ^ bits).collect();
            set.extend(extra);
        }
    }
    set.sort_unstable();
    set.dedup();
    set
}

/// Inclusion of the model group with parameters `sub` in the one with
/// parameters `sup`, at levels `1..=n`.
///
/// Per level: direct membership of the sub generators, a constructive
/// rebuild of each sub family inside the sup group, the order comparison,
/// and for `k ≥ 2` the sign-profile strictness probe.
pub fn check_filtration(sub: [FamilyParams; 2], sup: [FamilyParams; 2], n: usize) -> Result<ExperimentReport> {
    limits::check_group_level(n, "check_filtration")?;
    let sub_group = ModelGroup::from_families((sub[0].s, sub[0].m), (sub[1].s, sub[1].m))?;
    let sup_group = ModelGroup::from_families((sup[0].s, sup[0].m), (sup[1].s, sup[1].m))?;
    let matches: Vec<Option<usize>> = sub.iter().map(|&p| hypothesis(p, &sup)).collect();
    let applicable = matches.iter().all(Option::is_some);
    let failing = if applicable {
        Verdict::Counterexample
    } else {
        Verdict::NotApplicable
    };
    let mut levels = Vec::new();
    for k in 1..=n {
        let gk = sup_group.level_group(k)?;
        let hk = sub_group.level_group(k)?;
        let sub_tables = sub_group.generator_tables(k)?;
        let missing: Vec<String> = sub_tables
            .iter()
            .enumerate()
            .filter(|(_, x)| !gk.contains(x).unwrap_or(false))
            .map(|(u, _)| sub_group.machine().state(u).name.clone())
            .collect();
        let mut trials = vec![TrialOutcome::new(
            if missing.is_empty() { Verdict::Pass } else { failing },
            Some(json!({ "check": "membership", "missing": missing })),
        )];
        if applicable {
            let mut parts: Vec<Value> = Vec::new();
            let mut ok = true;
            for (i, j) in matches.iter().enumerate() {
                let j = j.expect("applicable");
                let c = construct(&sup_group, &sub_group, &sub, &sup, i, j, k)?;
                ok &= c.ok;
                parts.push(json!({
                    "sub_family": i + 1,
                    "sup_family": j + 1,
                    "steps": c.steps,
                    "failure": c.failure,
                }));
            }
            trials.push(TrialOutcome::new(
                Verdict::from_bool(ok),
                Some(json!({ "check": "construction", "families": parts })),
            ));
        }
        let included = missing.is_empty();
        let relation = if !included {
            "not-included"
        } else if hk.order() == gk.order() {
            "equal"
        } else {
            "strict"
        };
        trials.push(TrialOutcome::new(
            Verdict::Pass,
            Some(json!({
                "check": "comparison",
                "sub_order": hk.order().to_string(),
                "sup_order": gk.order().to_string(),
                "relation": relation,
            })),
        ));
        if k >= 2 {
            let depth = k - 1;
            let ps = profiles(&sub_tables, depth);
            let pg = profiles(&sup_group.generator_tables(k)?, depth);
            let sub_span = span(&ps);
            let sup_span = span(&pg);
            let strict = sup_span.iter().any(|v| !sub_span.contains(v));
            trials.push(TrialOutcome::new(
                Verdict::Pass,
                Some(json!({
                    "check": "upsilon",
                    "sub": ps,
                    "sup": pg,
                    "strict": strict,
                })),
            ));
        }
        levels.push(LevelReport::new(k, trials));
    }
    let params = json!({
        "sub": [sub[0].to_string(), sub[1].to_string()],
        "sup": [sup[0].to_string(), sup[1].to_string()],
        "level": n,
        "hypothesis": applicable,
    });
    let report = ExperimentReport::new("filtration", params, 0, levels);
    Ok(if applicable {
        report
    } else {
        report.with_verdict(Verdict::NotApplicable)
    })
}
