//! Elements of order `2^m 3^k` in the closure of the commutator subgroup.

use treemono::verify::{torsion_element, ModelGroup};

fn main() -> treemono::Result<()> {
    let g = ModelGroup::two_fixed();
    for (m, n3) in [(0, 2), (2, 0), (2, 1), (3, 2)] {
        let t = torsion_element(&g, m, n3)?;
        println!("m={m} n3={n3}: order {} reached on level {}", t.order, t.k_star);
    }
    Ok(())
}
