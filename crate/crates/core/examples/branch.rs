//! Regular branching over the derived subgroup, level by level.

use treemono::portrait::builtin;
use treemono::verify::{check_branch, check_self_replication, ModelGroup};

fn main() -> treemono::Result<()> {
    for name in ["two-fixed", "basilica-like"] {
        let g = ModelGroup::from_portrait(&builtin(name).expect("bundled"))?;
        println!("{name}: {}", g.gens().listing());
        print!("{}", check_branch(&g, 3)?.to_text());
        println!("self-replicating to level 3: {}", check_self_replication(&g, 3)?.verdict);
    }
    Ok(())
}
