//! The on-diagonal reproducing kernel is flat in the invariant normalization, and the
//! peak-section coordinates of a sample reconstruct its value at the point.

use std::sync::Arc;

use randci::kostlan::{
    bergman_diagonal, evaluate, peak_coordinates, pointwise_scale, sample, BasisSet, RealPoint, RngSeed,
};
use randci::AmbientSpace;

fn main() -> randci::Result<()> {
    let x = AmbientSpace::projective(2);
    for d in [1, 4, 16] {
        let space = Arc::new(BasisSet::uniform(&x, 1, d)?);
        let p = RealPoint::new(&x, vec![vec![0.2, -0.7, 0.4]])?;
        let q = RealPoint::base(&x);
        println!(
            "d={d:>2}  dim={:>3}  B(p)={:.6}  B(base)={:.6}",
            space.basis(0).len(),
            bergman_diagonal(&space, 0, &p),
            bergman_diagonal(&space, 0, &q)
        );

        let s = sample(&space, RngSeed::new(1, d as u64, 0));
        let frame = peak_coordinates(&s, &p);
        let direct = pointwise_scale(&space, 0) * evaluate(&s, &p)[0].powi(2);
        println!("       |s(p)|^2 = {direct:.6e}, from peak coordinates {:.6e}", frame.reconstructed_value_sq());
    }
    Ok(())
}
