//! Level quotients as permutation groups: orders, membership, derived subgroup.

use treemono::permgrp::{derived_subgroup, wn_generators, PermGroup};
use treemono::verify::ModelGroup;

fn main() -> treemono::Result<()> {
    for n in 1..=3 {
        println!("|W_{n}| = {}", wn_generators(n)?.order());
    }
    let g = ModelGroup::two_fixed();
    for n in 1..=4 {
        let gn = g.level_group(n)?;
        let dn = g.derived_group(n)?;
        println!("|G_{n}| = {}  [G_{n} : G_{n}'] = {}", gn.order(), gn.order() / dn.order());
    }

    let tables = g.generator_tables(3)?;
    let sub = PermGroup::new(3, 3, vec![tables[0].clone()])?;
    println!("|<a>_3| = {}, |<a>_3'| = {}", sub.order(), derived_subgroup(&sub).order());
    let w = &tables[0] * &tables[1];
    println!("a b in G_3: {}", g.level_group(3)?.contains(&w)?);
    Ok(())
}
