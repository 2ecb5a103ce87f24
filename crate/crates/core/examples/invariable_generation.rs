//! Conjugating every generator independently still generates `G_n`.

use treemono::verify::{check_invariable_generation, example_counterexample_order, ModelGroup};

fn main() -> treemono::Result<()> {
    let g = ModelGroup::two_fixed();
    let report = check_invariable_generation(&g, 3, 20, 1)?;
    print!("{}", report.to_text());

    // dropping the odometer breaks it already on level 1
    println!(
        "|<a, b^(ba)>_1| = {} vs |G_1| = {}",
        example_counterexample_order(&g, 1)?,
        g.level_group(1)?.order()
    );
    Ok(())
}
