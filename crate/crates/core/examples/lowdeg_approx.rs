//! Splits a section into a low-degree part times a power of a positive section plus a
//! residual, and watches the residual shrink as the degree grows.

use std::sync::Arc;

use randci::kostlan::{c1_norm, sample, BasisSet, RngSeed, SearchParams};
use randci::lowdeg::{residual_profile, sigma_default, subspace_basis, EllMode};
use randci::{AmbientSpace, BundleSystem};

fn main() -> randci::Result<()> {
    let x = AmbientSpace::projective(1);
    let params = SearchParams::default();

    let b = BundleSystem::uniform(&x, 1, 20)?;
    let space = Arc::new(BasisSet::new(&x, &b)?);
    let sigma = sigma_default(&x, &b)?;
    let sub = subspace_basis(&space, &sigma, 1)?;
    let s = sample(&space, RngSeed::new(4, 0, 0));
    let (s0, perp) = sub.project(&s)?;
    let low = sub.divide(&s0)?;
    println!("d=20, ell=1: subspace dimension {} of {}", sub.dimension(), space.basis(0).len());
    println!("low-degree part has degree {:?}", low.bundles().numeric_powers()?);
    println!("residual C1 / |s| = {:.3e}", c1_norm(&perp, &params)?.value / s.norm_l2());

    let symbolic = BundleSystem::symbolic(&x, 1)?;
    let profile = residual_profile(&x, &symbolic, 2, EllMode::Fixed(1), &[10, 20, 30], 20, 4, &params)?;
    for row in &profile.rows {
        println!("d={:>2} ell={:>2}  mean {:.3e}  max {:.3e}", row.d, row.ell, row.mean, row.max);
    }
    if let Some(fit) = profile.fit_linear {
        println!("log(mean) ~ {:.3} d  (R^2 {:.3})", fit.slope, fit.r2);
    }
    Ok(())
}
