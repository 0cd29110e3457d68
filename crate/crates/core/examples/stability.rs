//! A perturbation smaller in C¹ norm than the distance to the discriminant cannot change
//! the topology of the zero set.

use std::sync::Arc;

use randci::discriminant::{stability_check, Verdict};
use randci::kostlan::{sample, BasisSet, RngSeed, SearchParams};
use randci::topology::count_real_roots;
use randci::AmbientSpace;

fn main() -> randci::Result<()> {
    let x = AmbientSpace::projective(1);
    let space = Arc::new(BasisSet::uniform(&x, 1, 12)?);
    let params = SearchParams::default();
    for t in 0..8 {
        let s = sample(&space, RngSeed::new(9, t, 0));
        let noise = sample(&space, RngSeed::new(9, t, 1));
        let s2 = s.axpy(0.02, &noise)?;
        let report = stability_check(&s, &s2, &params)?;
        let (a, b) = (count_real_roots(&s)?.count, count_real_roots(&s2)?.count);
        println!(
            "trial {t}: |ds|_C1 {:.4}  distance {:.4}  {:?}  roots {a} -> {b}",
            report.perturbation_c1, report.distance_upper, report.verdict
        );
        if report.verdict == Verdict::Safe {
            assert_eq!(a, b);
        }
    }
    Ok(())
}
