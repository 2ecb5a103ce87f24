//! Compare model groups built from disjoint critical orbits.

use treemono::verify::{check_filtration, FamilyParams};

fn main() -> treemono::Result<()> {
    let pairs = [("0,1:0,1", "0,1:0,2"), ("0,1:0,2", "0,2:0,1"), ("0,2:0,1", "0,2:0,2")];
    for (sub, sup) in pairs {
        let r = check_filtration(FamilyParams::parse_pair(sub)?, FamilyParams::parse_pair(sup)?, 3)?;
        println!("{sub} vs {sup}: {}", r.verdict);
        for l in &r.levels {
            for t in &l.trials {
                if let Some(w) = t.witness.as_ref().filter(|w| w["check"] == "comparison") {
                    println!("  level {}: {}", l.n, w["relation"]);
                }
            }
        }
    }
    Ok(())
}
