//! Component counts of random real plane curves, certified by subdivision of the sphere.

use std::sync::Arc;

use randci::kostlan::{sample, BasisSet, RngSeed};
use randci::topology::{curve_components, DEFAULT_BUDGET};
use randci::AmbientSpace;

fn main() -> randci::Result<()> {
    let x = AmbientSpace::projective(2);
    for d in [2, 4, 6] {
        let space = Arc::new(BasisSet::uniform(&x, 1, d)?);
        let mut counts = Vec::new();
        for t in 0..20 {
            match curve_components(&sample(&space, RngSeed::new(11, t, d as u64)), DEFAULT_BUDGET) {
                Ok(p) => counts.push(p.count),
                Err(e) => println!("d={d} trial {t}: {e}"),
            }
        }
        let max = (d - 1) * (d - 2) / 2 + 1;
        println!("d={d}  components {counts:?}  (at most {max})");
    }
    Ok(())
}
