//! Exact Euler characteristic, Betti numbers and discriminant degree for a few
//! complete intersections, as polynomials in the common degree `d`.

use randci::intersection::invariant_report;
use randci::{AmbientSpace, BundleSystem};

fn main() -> randci::Result<()> {
    let cases = [
        (vec![2], vec![vec![1]]),
        (vec![3], vec![vec![1], vec![1]]),
        (vec![1, 1], vec![vec![1, 1]]),
        (vec![2], vec![vec![1], vec![2]]),
    ];
    for (factors, multidegrees) in cases {
        let x = AmbientSpace::new(factors)?;
        let b = BundleSystem::new(&x, multidegrees, randci::Powers::Symbolic)?;
        let report = invariant_report(&x, &b)?;
        println!("{report}");
        // every symbolic invariant can be evaluated at a concrete degree
        println!("total betti at d=10: {}\n", report.total_betti_poly.eval_i64(10));
    }
    Ok(())
}
