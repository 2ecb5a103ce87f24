//! Wreath recursions: build `a` and `b`, restrict to levels, read sections.

use treemono::wreath_core::{machine, Element, Permutation, Vertex};

fn main() -> treemono::Result<()> {
    let m = machine(
        3,
        &[
            ("a", Permutation::parse_cycles(3, "(1 2)")?, vec!["a", "id", "id"]),
            ("b", Permutation::parse_cycles(3, "(2 3)")?, vec!["id", "id", "b"]),
        ],
    )?;
    println!("{}", m.listing());

    let a = Element::state(&m, 0);
    let b = Element::state(&m, 1);
    for n in 1..=4 {
        println!("|a| on level {n}: {}", a.order_at_level(n)?);
    }

    let t = a.commutator(&b);
    println!("[a,b] on level 2: {}", t.restrict(2)?);

    let ab = a.mul(&b);
    let v = Vertex::parse("1 1 3", 3)?;
    println!("(a b)({v}) = {}", ab.apply(&v));
    println!("section of a^2 at 1: {}", a.pow(2).section_letter(0).restrict(2)?);
    Ok(())
}
