//! Recover a common conjugator for independently conjugated generators.

use treemono::permgrp::{uniform_sample, wn_generators};
use treemono::rng;
use treemono::verify::{check_simultaneous_conjugation, check_witness, simultaneous_conjugator, ModelGroup};
use treemono::wreath_core::LevelPermutation;

fn main() -> treemono::Result<()> {
    let g = ModelGroup::two_fixed();
    let n = 3;
    let w = uniform_sample(&wn_generators(n)?.chain(), &mut rng::stream(1, 0));
    let mats: Vec<LevelPermutation> = g.generator_tables(n)?.iter().map(|t| t.conjugated_by(&w)).collect();
    match simultaneous_conjugator(&g, n, &mats)? {
        Ok(wit) => {
            println!("w = {}", wit.w);
            println!("problems: {:?}", check_witness(&g, n, &mats, &wit)?);
        }
        Err(f) => println!("failed: {f:?}"),
    }
    print!("{}", check_simultaneous_conjugation(&g, n, 5, 2)?.to_text());
    Ok(())
}
