//! Certified real root counts of random binary forms; the mean grows like `sqrt(d)`.

use std::sync::Arc;

use randci::kostlan::{sample, BasisSet, RngSeed};
use randci::topology::count_real_roots;
use randci::AmbientSpace;

fn main() -> randci::Result<()> {
    let x = AmbientSpace::projective(1);
    let trials = 500;
    for d in [4, 16, 64] {
        let space = Arc::new(BasisSet::uniform(&x, 1, d)?);
        let mut total = 0;
        for t in 0..trials {
            total += count_real_roots(&sample(&space, RngSeed::new(3, t, d as u64)))?.count;
        }
        let mean = total as f64 / trials as f64;
        println!("d={d:>2}  mean roots {mean:.3}  sqrt(d) {:.3}", (d as f64).sqrt());
    }
    Ok(())
}
