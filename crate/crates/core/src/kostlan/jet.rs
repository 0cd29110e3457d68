//! Pointwise values, covariant 1-jets and peak-section coordinates.
//!
//! Conventions: a section is evaluated through its polynomial value at the unit
//! representative. The pointwise metric of bundle `i` is `kappa_i * p_i(x)^2` with
//! `kappa_i = prod_j n_j! / (pi a_ij)^{n_j}`, which makes the Bergman diagonal equal to
//! `kappa_i * N_i`. Derivatives are taken along a round orthonormal tangent frame and
//! scaled by `1 / sqrt(a_ij)`, so that the first-order peak section at `x` satisfies
//! `|∇_v s_v|^2 / |s_x|^2 = d` exactly.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::basis::{BasisSet, MonomialBasis};
use super::point::{RealPoint, TangentVector};
use super::section::SectionSystem;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Pointwise metric constant `kappa_i` of bundle `i`.
pub fn pointwise_scale(space: &BasisSet, i: usize) -> f64 {
    let x = space.ambient();
    space.bundles().multidegrees()[i]
        .iter()
        .zip(x.factors())
        .map(|(&a, &n)| factorial(n) / (PI * a as f64).powi(n as i32))
        .product()
}

/// Tangent-frame constant for a factor on which the bundle has degree `a`.
pub fn frame_constant(a: usize) -> f64 {
    1.0 / (a as f64).sqrt()
}

fn power_table(x: &[f64], max_deg: usize) -> Vec<Vec<f64>> {
    x.iter()
        .map(|&t| {
            let mut row = Vec::with_capacity(max_deg + 1);
            let mut p = 1.0;
            for _ in 0..=max_deg {
                row.push(p);
                p *= t;
            }
            row
        })
        .collect()
}

/// Polynomial value of one bundle component at a flattened point.
pub fn eval_component(basis: &MonomialBasis, coeffs: &[f64], x: &[f64]) -> f64 {
    let max_deg = basis.degrees().iter().copied().max().unwrap_or(0);
    let pw = power_table(x, max_deg);
    basis
        .entries()
        .iter()
        .zip(basis.weights())
        .zip(coeffs)
        .map(|((e, w), c)| c * w * e.iter().enumerate().map(|(v, &k)| pw[v][k]).product::<f64>())
        .sum()
}

/// Value and Euclidean gradient (in all homogeneous coordinates) of one component.
pub fn eval_grad_component(basis: &MonomialBasis, coeffs: &[f64], x: &[f64]) -> (f64, Vec<f64>) {
    let max_deg = basis.degrees().iter().copied().max().unwrap_or(0);
    let pw = power_table(x, max_deg);
    let nv = x.len();
    let mut val = 0.0;
    let mut grad = vec![0.0; nv];
    for ((e, w), c) in basis.entries().iter().zip(basis.weights()).zip(coeffs) {
        let cw = c * w;
        if cw == 0.0 {
            continue;
        }
        val += cw * e.iter().enumerate().map(|(v, &k)| pw[v][k]).product::<f64>();
        for v in 0..nv {
            if e[v] == 0 {
                continue;
            }
            let mut t = cw * e[v] as f64 * pw[v][e[v] - 1];
            for (u, &k) in e.iter().enumerate() {
                if u != v {
                    t *= pw[u][k];
                }
            }
            grad[v] += t;
        }
    }
    (val, grad)
}

/// Polynomial values `p_i(x)` at the unit representative.
pub fn evaluate(s: &SectionSystem, x: &RealPoint) -> Vec<f64> {
    let flat = x.flat();
    s.space().bases().iter().zip(s.coeffs()).map(|(b, c)| eval_component(b, c, &flat)).collect()
}

/// Values and calibrated frame derivatives (`n x m`, rows follow `frame`).
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub values: Vec<f64>,
    pub derivative: DMatrix<f64>,
    pub frame: Vec<TangentVector>,
}

pub fn jet_evaluate(s: &SectionSystem, x: &RealPoint) -> Jet {
    let flat = x.flat();
    let frame = x.tangent_frame();
    let m = s.num_bundles();
    let mut values = Vec::with_capacity(m);
    let mut derivative = DMatrix::zeros(frame.len(), m);
    for (i, (b, c)) in s.space().bases().iter().zip(s.coeffs()).enumerate() {
        let (v, g) = eval_grad_component(b, c, &flat);
        values.push(v);
        for (r, tv) in frame.iter().enumerate() {
            let beta = frame_constant(s.bundles().multidegrees()[i][tv.factor]);
            derivative[(r, i)] = beta * g.iter().zip(&tv.flat).map(|(a, b)| a * b).sum::<f64>();
        }
    }
    Jet { values, derivative, frame }
}

/// Squared pointwise C¹ norm `sum_i |s_i(x)|^2 + |∇ s_i(x)|^2`, computed without a frame.
pub fn pointwise_c1_sq(s: &SectionSystem, x: &[f64]) -> f64 {
    let space = s.space();
    let amb = space.ambient();
    let mut total = 0.0;
    for (i, (b, c)) in space.bases().iter().zip(s.coeffs()).enumerate() {
        let (v, g) = eval_grad_component(b, c, x);
        let mut sq = v * v;
        for j in 0..amb.num_factors() {
            let off = amb.var_offset(j);
            let gj = &g[off..off + amb.num_vars(j)];
            // tangential part: |∇_j p|^2 - (x_j · ∇_j p)^2, with x_j · ∇_j p = D_ij p
            let radial = b.degrees()[j] as f64 * v;
            let tangential = (gj.iter().map(|t| t * t).sum::<f64>() - radial * radial).max(0.0);
            sq += tangential / space.bundles().multidegrees()[i][j] as f64;
        }
        total += pointwise_scale(space, i) * sq;
    }
    total
}

/// `sum_k |e_k(x)|^2` over the orthonormal basis of bundle `i`, by direct summation.
pub fn bergman_diagonal(space: &BasisSet, i: usize, x: &RealPoint) -> f64 {
    let basis = space.basis(i);
    let flat = x.flat();
    let max_deg = basis.degrees().iter().copied().max().unwrap_or(0);
    let pw = power_table(&flat, max_deg);
    let sum: f64 = basis
        .entries()
        .iter()
        .zip(basis.weights())
        .map(|(e, w)| {
            let v = w * e.iter().enumerate().map(|(v, &k)| pw[v][k]).product::<f64>();
            v * v
        })
        .sum();
    pointwise_scale(space, i) * sum
}

/// Peak-section coordinates of a section at a real point.
#[derive(Debug, Clone, PartialEq)]
pub struct JetFrame {
    pub point: RealPoint,
    pub frame: Vec<TangentVector>,
    /// Coefficients on the peak sections, one per bundle.
    pub a0: DVector<f64>,
    /// Coefficients on the first-order peak sections, `n x m`.
    pub a: DMatrix<f64>,
    /// Pointwise norm of each bundle's peak section at the point.
    pub peak_norm: DVector<f64>,
    /// `|∇_{v_r} s_{v_r}^{(i)}(x)|` for each frame row `r` and bundle `i`.
    pub dpeak_norms: DMatrix<f64>,
}

impl JetFrame {
    /// `sum_i a0_i^2 peak_norm_i^2`, the squared pointwise norm reconstructed from the frame.
    pub fn reconstructed_value_sq(&self) -> f64 {
        self.a0.iter().zip(self.peak_norm.iter()).map(|(a, p)| (a * p).powi(2)).sum()
    }
}

pub fn peak_coordinates(s: &SectionSystem, x: &RealPoint) -> JetFrame {
    let space = s.space();
    let flat = x.flat();
    let frame = x.tangent_frame();
    let (n, m) = (frame.len(), s.num_bundles());
    let mut a0 = DVector::zeros(m);
    let mut a = DMatrix::zeros(n, m);
    let mut peak_norm = DVector::zeros(m);
    let mut dpeak = DMatrix::zeros(n, m);
    for (i, (b, c)) in space.bases().iter().zip(s.coeffs()).enumerate() {
        let big_n = b.len() as f64;
        let kappa = pointwise_scale(space, i);
        let (v, g) = eval_grad_component(b, c, &flat);
        a0[i] = v / big_n.sqrt();
        peak_norm[i] = (kappa * big_n).sqrt();
        for (r, tv) in frame.iter().enumerate() {
            let deg = b.degrees()[tv.factor] as f64;
            if deg == 0.0 {
                continue;
            }
            let dv: f64 = g.iter().zip(&tv.flat).map(|(p, q)| p * q).sum();
            a[(r, i)] = dv / (big_n * deg).sqrt();
            let mult = space.bundles().multidegrees()[i][tv.factor] as f64;
            dpeak[(r, i)] = (kappa * big_n * deg / mult).sqrt();
        }
    }
    JetFrame { point: x.clone(), frame, a0, a, peak_norm, dpeak_norms: dpeak }
}

/// Orthonormal coefficients of the peak section of bundle `i` at `x`.
pub fn peak_section_coeffs(space: &BasisSet, i: usize, x: &RealPoint) -> Vec<f64> {
    let b = space.basis(i);
    let flat = x.flat();
    let max_deg = b.degrees().iter().copied().max().unwrap_or(0);
    let pw = power_table(&flat, max_deg);
    let scale = 1.0 / (b.len() as f64).sqrt();
    b.entries()
        .iter()
        .zip(b.weights())
        .map(|(e, w)| scale * w * e.iter().enumerate().map(|(v, &k)| pw[v][k]).product::<f64>())
        .collect()
}

/// Orthonormal coefficients of the first-order peak section of bundle `i` at `x` in the
/// tangent direction `v`. Zero when the bundle has degree 0 on that factor.
pub fn first_order_peak_coeffs(space: &BasisSet, i: usize, x: &RealPoint, v: &TangentVector) -> Vec<f64> {
    let b = space.basis(i);
    let deg = b.degrees()[v.factor];
    if deg == 0 {
        return vec![0.0; b.len()];
    }
    let flat = x.flat();
    let scale = 1.0 / (b.len() as f64 * deg as f64).sqrt();
    // coefficient k is the directional derivative of e_k at x
    let max_deg = b.degrees().iter().copied().max().unwrap_or(0);
    let pw = power_table(&flat, max_deg);
    b.entries()
        .iter()
        .zip(b.weights())
        .map(|(e, w)| {
            let mut d = 0.0;
            for (var, &k) in e.iter().enumerate() {
                if k == 0 || v.flat[var] == 0.0 {
                    continue;
                }
                let mut t = k as f64 * pw[var][k - 1] * v.flat[var];
                for (u, &ku) in e.iter().enumerate() {
                    if u != var {
                        t *= pw[u][ku];
                    }
                }
                d += t;
            }
            scale * w * d
        })
        .collect()
}

/// The section whose bundle-`i` component is the peak section at `x`, others zero.
pub fn peak_section(space: &Arc<BasisSet>, i: usize, x: &RealPoint) -> SectionSystem {
    let mut s = SectionSystem::zeros(space.clone());
    s.coeffs_mut()[i] = peak_section_coeffs(space, i, x);
    s
}

pub fn first_order_peak_section(space: &Arc<BasisSet>, i: usize, x: &RealPoint, v: &TangentVector) -> SectionSystem {
    let mut s = SectionSystem::zeros(space.clone());
    s.coeffs_mut()[i] = first_order_peak_coeffs(space, i, x, v);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::AmbientSpace;
    use crate::kostlan::rng::{sample, RngSeed};
    use rand::SeedableRng;

    fn p1(d: usize) -> Arc<BasisSet> {
        Arc::new(BasisSet::uniform(&AmbientSpace::projective(1), 1, d).unwrap())
    }

    fn raw(space: &Arc<BasisSet>, e: Vec<usize>) -> SectionSystem {
        SectionSystem::from_raw_terms(space.clone(), &[vec![(e, 1.0)]]).unwrap()
    }

    #[test]
    fn monomial_values() {
        let sp = p1(4);
        let e0 = RealPoint::on_circle(0.0);
        assert!((evaluate(&raw(&sp, vec![4, 0]), &e0)[0] - 1.0).abs() < 1e-15);
        let sp2 = p1(2);
        assert_eq!(evaluate(&raw(&sp2, vec![1, 1]), &e0)[0], 0.0);
        let diff = SectionSystem::from_raw_terms(sp2.clone(), &[vec![(vec![2, 0], 1.0), (vec![0, 2], -1.0)]]).unwrap();
        assert!(evaluate(&diff, &RealPoint::on_circle(PI / 4.0))[0].abs() < 1e-15);
    }

    #[test]
    fn jets_at_base_point() {
        let d = 5;
        let sp = p1(d);
        let e0 = RealPoint::on_circle(0.0);
        let j = jet_evaluate(&raw(&sp, vec![d, 0]), &e0);
        assert_eq!(j.values[0], 1.0);
        assert!(j.derivative[(0, 0)].abs() < 1e-15);
        let j = jet_evaluate(&raw(&sp, vec![d - 1, 1]), &e0);
        assert_eq!(j.values[0], 0.0);
        assert!(j.derivative[(0, 0)].abs() > 0.5);
    }

    #[test]
    fn bergman_is_constant_and_exact_on_the_line() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for d in [5, 10, 20] {
            let sp = p1(d);
            for _ in 0..20 {
                let x = RealPoint::random(sp.ambient(), &mut rng);
                let b = bergman_diagonal(&sp, 0, &x);
                assert!((b * PI / (d as f64 + 1.0) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn frame_reconstruction() {
        let x = AmbientSpace::new(vec![1, 2]).unwrap();
        let sp = Arc::new(
            BasisSet::new(
                &x,
                &crate::BundleSystem::new(&x, vec![vec![1, 2], vec![2, 1]], crate::Powers::Numeric(vec![3, 2]))
                    .unwrap(),
            )
            .unwrap(),
        );
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for t in 0..10 {
            let s = sample(&sp, RngSeed::new(3, t, 0));
            let p = RealPoint::random(&x, &mut rng);
            let f = peak_coordinates(&s, &p);
            let direct: f64 = evaluate(&s, &p).iter().enumerate().map(|(i, v)| pointwise_scale(&sp, i) * v * v).sum();
            assert!((f.reconstructed_value_sq() - direct).abs() < 1e-9 * direct.max(1.0));
            // coefficients equal inner products with the explicit peak sections
            for i in 0..2 {
                let ps = peak_section(&sp, i, &p);
                assert!((s.inner_product(&ps).unwrap() - f.a0[i]).abs() < 1e-10);
                for (r, v) in f.frame.iter().enumerate() {
                    let fs = first_order_peak_section(&sp, i, &p, v);
                    assert!((s.inner_product(&fs).unwrap() - f.a[(r, i)]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn peak_sections_are_orthonormal() {
        let x = AmbientSpace::new(vec![2, 1]).unwrap();
        let sp = Arc::new(BasisSet::uniform(&x, 1, 4).unwrap());
        let p = RealPoint::random(&x, &mut rand_chacha::ChaCha8Rng::seed_from_u64(4));
        let mut all = vec![peak_section(&sp, 0, &p)];
        for v in p.tangent_frame() {
            all.push(first_order_peak_section(&sp, 0, &p, &v));
        }
        for (a, sa) in all.iter().enumerate() {
            for (b, sb) in all.iter().enumerate() {
                let ip = sa.inner_product(sb).unwrap();
                assert!((ip - if a == b { 1.0 } else { 0.0 }).abs() < 1e-10, "{a} {b} {ip}");
            }
        }
    }

    #[test]
    fn frame_free_c1_matches_frame_jet() {
        let x = AmbientSpace::new(vec![1, 1]).unwrap();
        let sp = Arc::new(
            BasisSet::new(
                &x,
                &crate::BundleSystem::new(&x, vec![vec![2, 1]], crate::Powers::Numeric(vec![3])).unwrap(),
            )
            .unwrap(),
        );
        let s = sample(&sp, RngSeed::new(8, 0, 0));
        let p = RealPoint::random(&x, &mut rand_chacha::ChaCha8Rng::seed_from_u64(1));
        let j = jet_evaluate(&s, &p);
        let kappa = pointwise_scale(&sp, 0);
        let via_frame = kappa * (j.values[0].powi(2) + j.derivative.column(0).norm_squared());
        let direct = pointwise_c1_sq(&s, &p.flat());
        assert!((via_frame - direct).abs() < 1e-9 * direct);
    }
}
