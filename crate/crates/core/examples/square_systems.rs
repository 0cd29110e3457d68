//! Real solutions of two random equations in the projective plane via a sheared resultant.

use std::sync::Arc;

use randci::kostlan::{sample, BasisSet, RngSeed};
use randci::topology::square_system_solutions;
use randci::{AmbientSpace, BundleSystem, Powers};

fn main() -> randci::Result<()> {
    let x = AmbientSpace::projective(2);
    for degrees in [[1, 1], [1, 2], [2, 2], [3, 3]] {
        let b = BundleSystem::new(&x, vec![vec![1], vec![1]], Powers::Numeric(degrees.to_vec()))?;
        let space = Arc::new(BasisSet::new(&x, &b)?);
        let mut hist = std::collections::BTreeMap::new();
        for t in 0..200 {
            let n = square_system_solutions(&sample(&space, RngSeed::new(5, t, 0)))?.count;
            *hist.entry(n).or_insert(0) += 1;
        }
        println!("degrees {degrees:?}  solutions -> trials {hist:?}");
    }
    Ok(())
}
