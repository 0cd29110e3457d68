//! Distance from a section to the discriminant: fiberwise at a point, then minimized over
//! the real locus, and the nearest singular section at the minimizer.

use std::sync::Arc;

use randci::discriminant::{discriminant_distance, fiber_distance, project_to_singular};
use randci::kostlan::{sample, BasisSet, RngSeed, SearchParams};
use randci::AmbientSpace;

fn main() -> randci::Result<()> {
    let x = AmbientSpace::projective(2);
    let space = Arc::new(BasisSet::uniform(&x, 1, 4)?);
    let s = sample(&space, RngSeed::new(2, 0, 0));
    let params = SearchParams::default();

    let est = discriminant_distance(&s, &params)?;
    println!("|s| = {:.4}", s.norm_l2());
    println!("distance to the discriminant <= {:.6} (grid spacing {:.4})", est.distance_upper, est.grid_spacing);

    let fiber = fiber_distance(&s, &est.argmin)?;
    println!("at the minimizer: L2 {:.6}, jet {:.6}", fiber.l2_distance, fiber.jet_distance);

    let singular = project_to_singular(&s, &est.argmin)?;
    let moved = singular.sub(&s)?.norm_l2();
    let after = fiber_distance(&singular, &est.argmin)?.l2_distance;
    println!("nearest singular section is {moved:.6} away; its fiber distance there is {after:.2e}");
    Ok(())
}
