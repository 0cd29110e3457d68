//! Distance from a section to the real discriminant, singular test sections, tube
//! fractions and the perturbation stability check.
//!
//! In peak coordinates at `x` a section splits orthogonally into the values `a0`, the
//! first-order block `A` (`n x m`) and a part vanishing to second order at `x`. The sections
//! singular at `x` are exactly those with `a0 = 0` and `rank A <= m - 1`, which gives the
//! closed form `l2^2 = |a0|^2 + sigma_min(A)^2` for the fiber distance.

mod lowrank;

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::stats::{wilson, Z95};
use crate::kostlan::{
    c1_norm, first_order_peak_coeffs, grid_minimize, peak_coordinates, peak_section_coeffs, sample, BasisSet, JetFrame,
    RealPoint, RngSeed, SearchParams, SectionSystem,
};

pub use lowrank::{smallest_singular_value, truncate_rank, weighted_low_rank, ALS_STARTS, ALS_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct FiberDistanceResult {
    pub point: RealPoint,
    pub l2_distance: f64,
    pub jet_distance: f64,
    pub jet_frame: JetFrame,
    /// Nearest rank-deficient first-order block in the L² metric.
    pub minimizing_rank_deficient_matrix: DMatrix<f64>,
}

fn check_shape(s: &SectionSystem) -> Result<(usize, usize)> {
    let (n, m) = (s.ambient().dim(), s.num_bundles());
    if m > n {
        return Err(Error::Overdetermined { m, n });
    }
    Ok((n, m))
}

fn fiber_l2_sq(frame: &JetFrame) -> f64 {
    frame.a0.norm_squared() + smallest_singular_value(&frame.a).powi(2)
}

/// Fiber distance at `x` in the L² metric and in the pointwise jet metric.
pub fn fiber_distance(s: &SectionSystem, x: &RealPoint) -> Result<FiberDistanceResult> {
    let (_, m) = check_shape(s)?;
    let frame = peak_coordinates(s, x);
    let l2 = fiber_l2_sq(&frame).sqrt();
    let minimizer = truncate_rank(&frame.a, m - 1);
    let value_part: f64 = frame.a0.iter().zip(frame.peak_norm.iter()).map(|(a, p)| (a * p).powi(2)).sum();
    let weights = frame.dpeak_norms.map(|v| v * v);
    let (block, _) = weighted_low_rank(&frame.a, &weights, m - 1);
    Ok(FiberDistanceResult {
        point: x.clone(),
        l2_distance: l2,
        jet_distance: (value_part + block).sqrt(),
        jet_frame: frame,
        minimizing_rank_deficient_matrix: minimizer,
    })
}

/// Grid-and-refine minimum of the fiber distance over the real locus. The search set is
/// finite, so the value is an upper bound on the true distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscriminantEstimate {
    pub distance_upper: f64,
    pub argmin: RealPoint,
    pub grid_spacing: f64,
}

pub fn discriminant_distance(s: &SectionSystem, params: &SearchParams) -> Result<DiscriminantEstimate> {
    check_shape(s)?;
    let f = |p: &RealPoint| fiber_l2_sq(&peak_coordinates(s, p));
    let (argmin, v, h) = grid_minimize(s.ambient(), s.space().max_degree(), params, &f)?;
    Ok(DiscriminantEstimate { distance_upper: v.max(0.0).sqrt(), argmin, grid_spacing: h })
}

/// Removes the part of `s` that keeps it transversal at `x`: the value components and the
/// smallest singular direction of the first-order block. The result is the metric
/// projection of `s` onto the sections singular at `x`.
pub fn project_to_singular(s: &SectionSystem, x: &RealPoint) -> Result<SectionSystem> {
    let (_, m) = check_shape(s)?;
    let space = s.space();
    let frame = peak_coordinates(s, x);
    let excess = &frame.a - truncate_rank(&frame.a, m - 1);
    let mut out = s.clone();
    for i in 0..m {
        let c = &mut out.coeffs_mut()[i];
        for (k, p) in peak_section_coeffs(space, i, x).into_iter().enumerate() {
            c[k] -= frame.a0[i] * p;
        }
        for (r, v) in frame.frame.iter().enumerate() {
            let e = excess[(r, i)];
            if e == 0.0 {
                continue;
            }
            for (k, p) in first_order_peak_coeffs(space, i, x, v).into_iter().enumerate() {
                c[k] -= e * p;
            }
        }
    }
    Ok(out)
}

/// A Kostlan sample conditioned to be singular at `x`.
pub fn make_singular_section(space: &Arc<BasisSet>, x: &RealPoint, seed: RngSeed) -> Result<SectionSystem> {
    project_to_singular(&sample(space, seed), x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TubeSample {
    pub trial: u64,
    pub seed: u64,
    pub norm: f64,
    pub estimate: DiscriminantEstimate,
}

/// Samples `trials` sections and records their norms and distance estimates. Trials run on
/// the current rayon pool and are returned in trial order.
pub fn tube_samples(space: &Arc<BasisSet>, trials: u64, seed: u64, params: &SearchParams) -> Result<Vec<TubeSample>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = sample(space, RngSeed::new(seed, t, 0));
            Ok(TubeSample { trial: t, seed, norm: s.norm_l2(), estimate: discriminant_distance(&s, params)? })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeFraction {
    pub radius_fraction: f64,
    pub inside: usize,
    pub trials: usize,
    pub fraction: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Fraction of samples with `distance_upper <= r * norm`. Since the distances are upper
/// bounds, the fraction is biased low relative to the true tube measure.
pub fn tube_fraction(samples: &[TubeSample], r: f64) -> TubeFraction {
    let inside = samples.iter().filter(|t| t.estimate.distance_upper <= r * t.norm).count();
    let n = samples.len();
    let (lo, hi) = wilson(inside, n, Z95);
    TubeFraction {
        radius_fraction: r,
        inside,
        trials: n,
        fraction: if n == 0 { 0.0 } else { inside as f64 / n as f64 },
        ci_low: lo,
        ci_high: hi,
    }
}

pub fn tube_measure_mc(
    space: &Arc<BasisSet>,
    r: f64,
    trials: u64,
    seed: u64,
    params: &SearchParams,
) -> Result<TubeFraction> {
    if trials < 100 {
        return Err(Error::InvalidConfig(format!("tube estimates need at least 100 trials, got {trials}")));
    }
    Ok(tube_fraction(&tube_samples(space, trials, seed, params)?, r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Safe,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub perturbation_c1: f64,
    pub distance_upper: f64,
    /// False when the pointwise peak constants are below 1, where the L² distance no
    /// longer bounds the jet distance and no verdict other than UNDECIDED is given.
    pub constants_ok: bool,
}

/// The comparison between jet and L² distances needs every peak section and first-order
/// peak section to have pointwise norm at least 1.
fn peak_constants_ok(space: &Arc<BasisSet>) -> bool {
    let x = RealPoint::base(space.ambient());
    let frame = peak_coordinates(&SectionSystem::zeros(space.clone()), &x);
    let value_ok = frame.peak_norm.iter().all(|&p| p >= 1.0);
    let deriv_ok = frame.frame.iter().enumerate().all(|(r, v)| {
        (0..space.bundles().num_bundles())
            .all(|i| space.basis(i).degrees()[v.factor] == 0 || frame.dpeak_norms[(r, i)] >= 1.0)
    });
    value_ok && deriv_ok
}

/// SAFE when the C¹ size of `s' - s` is below the distance of `s` to the discriminant.
pub fn stability_check(s: &SectionSystem, s2: &SectionSystem, params: &SearchParams) -> Result<StabilityReport> {
    let diff = s2.sub(s)?;
    let c1 = c1_norm(&diff, params)?.value;
    let dist = discriminant_distance(s, params)?.distance_upper;
    let constants_ok = peak_constants_ok(s.space());
    let verdict = if constants_ok && c1 < dist { Verdict::Safe } else { Verdict::Undecided };
    Ok(StabilityReport { verdict, perturbation_c1: c1, distance_upper: dist, constants_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::AmbientSpace;

    fn space(n: usize, m: usize, d: usize) -> Arc<BasisSet> {
        Arc::new(BasisSet::uniform(&AmbientSpace::projective(n), m, d).unwrap())
    }

    #[test]
    fn conditioning_is_a_projection() {
        for (n, m, d) in [(1, 1, 6), (2, 1, 5), (2, 2, 4), (3, 2, 3)] {
            let sp = space(n, m, d);
            let x = RealPoint::random(sp.ambient(), &mut RngSeed::new(2, d as u64, 9).rng());
            let seed = RngSeed::new(4, n as u64, m as u64);
            let s = sample(&sp, seed);
            let t = make_singular_section(&sp, &x, seed).unwrap();
            let at_x = fiber_distance(&t, &x).unwrap();
            assert!(at_x.l2_distance < 1e-9, "{}", at_x.l2_distance);
            assert!(crate::kostlan::evaluate(&t, &x).iter().all(|v| v.abs() < 1e-10));
            let moved = s.sub(&t).unwrap().norm_l2();
            assert!((moved - fiber_distance(&s, &x).unwrap().l2_distance).abs() < 1e-8);
            assert!(smallest_singular_value(&fiber_distance(&s, &x).unwrap().minimizing_rank_deficient_matrix) < 1e-8);
        }
    }

    #[test]
    fn singular_sections_have_zero_distance() {
        let sp = space(1, 1, 7);
        let x = RealPoint::on_circle(0.3);
        let t = make_singular_section(&sp, &x, RngSeed::new(1, 1, 1)).unwrap();
        assert!(discriminant_distance(&t, &SearchParams::default()).unwrap().distance_upper <= 1e-8);
    }

    #[test]
    fn homogeneous_of_degree_one() {
        let sp = space(2, 2, 3);
        let s = sample(&sp, RngSeed::new(8, 0, 0));
        let x = RealPoint::random(sp.ambient(), &mut RngSeed::new(8, 1, 0).rng());
        let base = fiber_distance(&s, &x).unwrap();
        for lambda in [2.0, 10.0, -3.0] {
            let r = fiber_distance(&s.scaled(lambda), &x).unwrap();
            assert!((r.l2_distance - lambda.abs() * base.l2_distance).abs() < 1e-12 * base.l2_distance.max(1.0));
            assert!((r.jet_distance - lambda.abs() * base.jet_distance).abs() < 1e-9 * base.jet_distance);
        }
        let p = SearchParams::default();
        let a = discriminant_distance(&s, &p).unwrap().distance_upper;
        let b = discriminant_distance(&s.scaled(2.0), &p).unwrap().distance_upper;
        assert!((b / a - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tube_endpoints() {
        let sp = space(1, 1, 6);
        let p = SearchParams::default();
        let samples = tube_samples(&sp, 120, 3, &p).unwrap();
        assert_eq!(tube_fraction(&samples, 0.0).inside, 0);
        assert_eq!(tube_fraction(&samples, 10.0).fraction, 1.0);
        assert!(tube_measure_mc(&sp, 0.1, 10, 3, &p).is_err());
    }

    #[test]
    fn stability_verdicts() {
        let sp = space(1, 1, 12);
        let s = sample(&sp, RngSeed::new(5, 5, 5));
        let p = SearchParams::default();
        let same = stability_check(&s, &s, &p).unwrap();
        assert_eq!(same.verdict, Verdict::Safe);
        assert_eq!(stability_check(&s, &s.scaled(-1.0), &p).unwrap().verdict, Verdict::Undecided);
        assert!(!peak_constants_ok(&space(1, 1, 1)));
    }
}
