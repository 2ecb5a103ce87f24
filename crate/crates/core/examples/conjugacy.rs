//! Level-wise conjugacy in the iterated wreath product, with certificates.

use treemono::conjugacy::{canonical_representative, conjugate_in_wn};
use treemono::verify::ModelGroup;

fn main() -> treemono::Result<()> {
    let g = ModelGroup::two_fixed();
    let a = g.generator(0);
    let b = g.generator(1);
    let h = a.conjugated_by(&b.mul(&a));
    for n in 1..=4 {
        match conjugate_in_wn(&a, &h, n)? {
            Some(c) => println!("level {n}: conjugate via {}", c.witness),
            None => println!("level {n}: not conjugate"),
        }
    }
    println!("a ~ a b on level 2: {}", conjugate_in_wn(&a, &a.mul(&b), 2)?.is_some());
    println!("canonical form of a^2 on level 2: {}", canonical_representative(&a.pow(2), 2)?);
    Ok(())
}
