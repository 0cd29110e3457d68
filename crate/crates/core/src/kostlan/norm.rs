use serde::Serialize;

use crate::error::Result;

use super::grid::{grid_minimize, SearchParams};
use super::jet::pointwise_c1_sq;
use super::point::RealPoint;
use super::section::SectionSystem;

/// Grid-and-refine estimate of the C¹ norm over the real locus; a lower bound on the
/// true maximum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct C1Norm {
    pub value: f64,
    pub argmax: RealPoint,
    pub grid_spacing: f64,
}

pub fn c1_norm(s: &SectionSystem, params: &SearchParams) -> Result<C1Norm> {
    let f = |p: &RealPoint| -pointwise_c1_sq(s, &p.flat());
    let (argmax, v, h) = grid_minimize(s.ambient(), s.space().max_degree(), params, &f)?;
    Ok(C1Norm { value: (-v).max(0.0).sqrt(), argmax, grid_spacing: h })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use std::sync::Arc;

    use super::*;
    use crate::ambient::AmbientSpace;
    use crate::kostlan::basis::BasisSet;
    use crate::kostlan::jet::jet_evaluate;
    use crate::kostlan::rng::{sample, RngSeed};

    #[test]
    fn unit_constant_section() {
        let sp = Arc::new(BasisSet::uniform(&AmbientSpace::projective(1), 1, 0).unwrap());
        // orthonormal coefficient sqrt(pi) gives pointwise norm 1
        let s = SectionSystem::new(sp, vec![vec![PI.sqrt()]]).unwrap();
        let n = c1_norm(&s, &SearchParams::default()).unwrap();
        assert!((n.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn homogeneity() {
        let sp = Arc::new(BasisSet::uniform(&AmbientSpace::projective(1), 1, 7).unwrap());
        let s = sample(&sp, RngSeed::new(1, 2, 3));
        let p = SearchParams::default();
        let a = c1_norm(&s, &p).unwrap().value;
        let b = c1_norm(&s.scaled(2.0), &p).unwrap().value;
        assert!((b / a - 2.0).abs() < 1e-12);
    }

    #[test]
    fn matches_dense_scan_on_the_line() {
        let sp = Arc::new(BasisSet::uniform(&AmbientSpace::projective(1), 1, 2).unwrap());
        let s = SectionSystem::from_raw_terms(sp.clone(), &[vec![(vec![2, 0], 1.0), (vec![0, 2], -1.0)]]).unwrap();
        let n = c1_norm(&s, &SearchParams::default()).unwrap();
        let kappa = 1.0 / PI;
        let scan = (0..100_000)
            .map(|k| {
                let x = RealPoint::on_circle(PI * k as f64 / 100_000.0);
                let j = jet_evaluate(&s, &x);
                (kappa * (j.values[0].powi(2) + j.derivative[(0, 0)].powi(2))).sqrt()
            })
            .fold(0.0, f64::max);
        let at_zero = {
            let j = jet_evaluate(&s, &RealPoint::on_circle(0.0));
            (kappa * (j.values[0].powi(2) + j.derivative[(0, 0)].powi(2))).sqrt()
        };
        assert!(n.value >= at_zero - 1e-12);
        assert!((n.value - scan).abs() < 1e-8, "{} vs {}", n.value, scan);
    }
}
