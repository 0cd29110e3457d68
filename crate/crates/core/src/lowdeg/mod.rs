//! Multiples of a fixed positive section, the orthogonal decomposition they induce, and the
//! low-degree approximation map obtained by dividing the projected part.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::ambient::{AmbientSpace, BundleSystem};
use crate::error::{Error, Result};
use crate::harness::stats::{linear_fit, LinearFit};
use crate::kostlan::{c1_norm, sample, search_grid, BasisSet, RawPoly, RngSeed, SearchParams, SectionSystem};

/// Largest division residual, relative to the projected part, accepted by [`approx_map`].
pub const DIVISION_TOL: f64 = 1e-6;

/// Per-bundle products of factor quadrics `prod_j (|X^{(j)}|^2)^{a_ij k / 2}`, positive on
/// the whole real locus.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSection {
    k: usize,
    ambient: AmbientSpace,
    polys: Vec<RawPoly>,
}

impl SigmaSection {
    pub fn new(ambient: &AmbientSpace, bundles: &BundleSystem, k: usize) -> Result<Self> {
        if k == 0 || k % 2 == 1 {
            return Err(Error::InvalidConfig(format!("sigma power must be even and positive, got {k}")));
        }
        let nv = ambient.total_vars();
        let polys = bundles
            .multidegrees()
            .iter()
            .map(|row| {
                row.iter().enumerate().fold(RawPoly::constant(nv, 1.0), |acc, (j, &a)| {
                    let q = RawPoly::quadric(nv, ambient.var_offset(j), ambient.num_vars(j));
                    acc.mul(&q.pow(a * k / 2, nv))
                })
            })
            .collect();
        let sigma = Self { k, ambient: ambient.clone(), polys };
        let min = sigma.min_on_locus()?;
        if min <= 0.0 {
            return Err(Error::Numerical(format!("sigma is not positive on the real locus (min {min})")));
        }
        Ok(sigma)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn component(&self, i: usize) -> &RawPoly {
        &self.polys[i]
    }

    pub fn num_bundles(&self) -> usize {
        self.polys.len()
    }

    /// Smallest value of any component over a grid of spacing `pi / 64` on the unit
    /// representatives.
    pub fn min_on_locus(&self) -> Result<f64> {
        let grid = search_grid(&self.ambient, PI / 64.0)?;
        let mut min = f64::INFINITY;
        for p in &self.polys {
            for x in &grid {
                min = min.min(p.eval(&x.flat()));
            }
        }
        Ok(min)
    }
}

pub fn sigma_default(ambient: &AmbientSpace, bundles: &BundleSystem) -> Result<SigmaSection> {
    SigmaSection::new(ambient, bundles, 2)
}

fn shifted_space(space: &BasisSet, sigma: &SigmaSection, ell: usize, up: bool) -> Result<Arc<BasisSet>> {
    let powers = space.bundles().numeric_powers()?;
    let shift = sigma.k * ell;
    let new: Vec<usize> = powers
        .iter()
        .map(|&d| {
            if up {
                Ok(d + shift)
            } else {
                d.checked_sub(shift).ok_or(Error::DegreeUnderflow { degree: d, needed: shift })
            }
        })
        .collect::<Result<_>>()?;
    Ok(Arc::new(BasisSet::new(space.ambient(), &space.bundles().with_powers(new)?)?))
}

/// Matrix of multiplication by `sigma_i^ell` from the orthonormal basis of `low` to that of
/// `high`, for bundle `i`.
fn lift_matrix(low: &BasisSet, high: &BasisSet, sigma: &SigmaSection, i: usize, ell: usize) -> DMatrix<f64> {
    let nv = low.ambient().total_vars();
    let factor = sigma.component(i).pow(ell, nv);
    let (lb, hb) = (low.basis(i), high.basis(i));
    let mut m = DMatrix::zeros(hb.len(), lb.len());
    for (col, (e, w)) in lb.entries().iter().zip(lb.weights()).enumerate() {
        let mut mono = RawPoly::default();
        mono.terms.insert(e.clone(), *w);
        let raw = mono.mul(&factor).to_basis(hb);
        for (row, (r, hw)) in raw.iter().zip(hb.weights()).enumerate() {
            m[(row, col)] = r / hw;
        }
    }
    m
}

/// `sigma^ell ⊗ s'`, landing in the space with every power raised by `k ell`.
pub fn multiply_by_sigma_power(s: &SectionSystem, sigma: &SigmaSection, ell: usize) -> Result<SectionSystem> {
    let high = shifted_space(s.space(), sigma, ell, true)?;
    let coeffs = (0..s.num_bundles())
        .map(|i| {
            let m = lift_matrix(s.space(), &high, sigma, i, ell);
            (m * DVector::from_column_slice(s.component(i))).iter().copied().collect()
        })
        .collect();
    SectionSystem::new(high, coeffs)
}

#[derive(Debug, Clone)]
struct Block {
    lift: DMatrix<f64>,
    q: DMatrix<f64>,
    r: DMatrix<f64>,
    /// Column order chosen by the pivoting: column `c` of `q r` is column `order[c]` of `lift`.
    order: Vec<usize>,
}

/// Orthonormal basis of the multiples of `sigma^ell`, one block per bundle.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    ell: usize,
    space: Arc<BasisSet>,
    lowered: Arc<BasisSet>,
    blocks: Vec<Block>,
}

impl SubspaceBasis {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.q.ncols()).sum()
    }

    pub fn space(&self) -> &Arc<BasisSet> {
        &self.space
    }

    /// The space of the quotients, with powers lowered by `k ell`.
    pub fn lowered_space(&self) -> &Arc<BasisSet> {
        &self.lowered
    }

    /// The basis elements as sections.
    pub fn elements(&self) -> Vec<SectionSystem> {
        let mut out = Vec::with_capacity(self.dimension());
        for (i, b) in self.blocks.iter().enumerate() {
            for c in 0..b.q.ncols() {
                let mut s = SectionSystem::zeros(self.space.clone());
                s.coeffs_mut()[i] = b.q.column(c).iter().copied().collect();
                out.push(s);
            }
        }
        out
    }

    /// Orthogonal decomposition `s = s0 + s_perp` with `s0` in the subspace.
    pub fn project(&self, s: &SectionSystem) -> Result<(SectionSystem, SectionSystem)> {
        if s.space().bundles() != self.space.bundles() || s.ambient() != self.space.ambient() {
            return Err(Error::DimensionMismatch("section and subspace live in different spaces".into()));
        }
        let mut s0 = SectionSystem::zeros(self.space.clone());
        for (i, b) in self.blocks.iter().enumerate() {
            let v = DVector::from_column_slice(s.component(i));
            let p = &b.q * (b.q.transpose() * v);
            s0.coeffs_mut()[i] = p.iter().copied().collect();
        }
        let perp = s.sub(&s0)?;
        Ok((s0, perp))
    }

    /// Quotient of an element of the subspace by `sigma^ell`.
    pub fn divide(&self, s0: &SectionSystem) -> Result<SectionSystem> {
        let mut out = SectionSystem::zeros(self.lowered.clone());
        let mut worst = 0.0f64;
        for (i, b) in self.blocks.iter().enumerate() {
            let v = DVector::from_column_slice(s0.component(i));
            let y =
                b.r.solve_upper_triangular(&(b.q.transpose() * &v))
                    .ok_or_else(|| Error::Numerical("singular triangular factor in division".into()))?;
            let mut z = vec![0.0; y.len()];
            for (c, &col) in b.order.iter().enumerate() {
                z[col] = y[c];
            }
            let back = &b.lift * DVector::from_column_slice(&z);
            let scale = v.norm().max(f64::MIN_POSITIVE);
            worst = worst.max((back - &v).norm() / scale);
            out.coeffs_mut()[i] = z;
        }
        if worst > DIVISION_TOL {
            return Err(Error::Numerical(format!("division residual {worst:.3e} exceeds {DIVISION_TOL:e}")));
        }
        Ok(out)
    }

    /// Projection followed by division: the low-degree section `s'` with `sigma^ell s' = s0`.
    pub fn approx(&self, s: &SectionSystem) -> Result<SectionSystem> {
        let (s0, _) = self.project(s)?;
        self.divide(&s0)
    }
}

fn pivot_order(m: usize, p: &nalgebra::linalg::PermutationSequence<nalgebra::Dyn>) -> Vec<usize> {
    // permuting the columns of the identity exposes the sequence as an explicit order
    let mut id = DMatrix::<f64>::identity(m, m);
    p.permute_columns(&mut id);
    (0..m).map(|c| (0..m).find(|&r| id[(r, c)] == 1.0).unwrap()).collect()
}

pub fn subspace_basis(space: &Arc<BasisSet>, sigma: &SigmaSection, ell: usize) -> Result<SubspaceBasis> {
    if sigma.num_bundles() != space.num_bundles() {
        return Err(Error::DimensionMismatch("sigma and basis set have different bundle counts".into()));
    }
    let lowered = shifted_space(space, sigma, ell, false)?;
    let blocks = (0..space.num_bundles())
        .map(|i| {
            let lift = lift_matrix(&lowered, space, sigma, i, ell);
            let qr = lift.clone().col_piv_qr();
            let order = pivot_order(lift.ncols(), qr.p());
            Block { q: qr.q(), r: qr.r(), order, lift }
        })
        .collect();
    Ok(SubspaceBasis { ell, space: space.clone(), lowered, blocks })
}

pub fn project(s: &SectionSystem, sub: &SubspaceBasis) -> Result<(SectionSystem, SectionSystem)> {
    sub.project(s)
}

pub fn approx_map(s: &SectionSystem, sigma: &SigmaSection, ell: usize) -> Result<SectionSystem> {
    subspace_basis(s.space(), sigma, ell)?.approx(s)
}

/// How the subspace index `ell` depends on the degree in a residual study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EllMode {
    Fixed(usize),
    /// `ell = floor(t d)`.
    Proportional(f64),
}

impl EllMode {
    pub fn ell(&self, d: usize) -> usize {
        match *self {
            EllMode::Fixed(l) => l,
            EllMode::Proportional(t) => (t * d as f64).floor() as usize,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualRow {
    pub d: usize,
    pub ell: usize,
    pub trials: usize,
    pub mean: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualProfile {
    pub rows: Vec<ResidualRow>,
    /// `log(mean)` against `d`.
    pub fit_linear: Option<LinearFit>,
    /// `log(mean)` against `sqrt(d) log(d)`.
    pub fit_sqrt_log: Option<LinearFit>,
}

/// C¹ size of `s_perp` relative to `|s|_{L²}` for one sample.
pub fn normalized_residual(sub: &SubspaceBasis, s: &SectionSystem, params: &SearchParams) -> Result<f64> {
    let (_, perp) = sub.project(s)?;
    Ok(c1_norm(&perp, params)?.value / s.norm_l2())
}

/// Mean and max normalized residual per degree. Each bundle of `bundles` gets power `d`;
/// samples for degree `d` use stream `d` of `seed`.
#[allow(clippy::too_many_arguments)]
pub fn residual_profile(
    ambient: &AmbientSpace,
    bundles: &BundleSystem,
    k: usize,
    mode: EllMode,
    degrees: &[usize],
    trials: u64,
    seed: u64,
    params: &SearchParams,
) -> Result<ResidualProfile> {
    let sigma = SigmaSection::new(ambient, bundles, k)?;
    let mut rows = Vec::with_capacity(degrees.len());
    for &d in degrees {
        let b = bundles.with_powers(vec![d; bundles.num_bundles()])?;
        let space = Arc::new(BasisSet::new(ambient, &b)?);
        let ell = mode.ell(d);
        let sub = subspace_basis(&space, &sigma, ell)?;
        let res: Vec<f64> = (0..trials)
            .into_par_iter()
            .map(|t| normalized_residual(&sub, &sample(&space, RngSeed::new(seed, t, d as u64)), params))
            .collect::<Result<_>>()?;
        rows.push(ResidualRow::from_values(d, ell, &res));
    }
    Ok(ResidualProfile::from_rows(rows))
}

impl ResidualRow {
    pub fn from_values(d: usize, ell: usize, res: &[f64]) -> Self {
        let n = res.len();
        ResidualRow {
            d,
            ell,
            trials: n,
            mean: res.iter().sum::<f64>() / n.max(1) as f64,
            max: res.iter().copied().fold(0.0, f64::max),
        }
    }
}

impl ResidualProfile {
    /// Attaches the decay fits; rows with zero mean are left out of them.
    pub fn from_rows(rows: Vec<ResidualRow>) -> Self {
        let pts: Vec<&ResidualRow> = rows.iter().filter(|r| r.mean > 0.0).collect();
        let ly: Vec<f64> = pts.iter().map(|r| r.mean.ln()).collect();
        let xd: Vec<f64> = pts.iter().map(|r| r.d as f64).collect();
        let xs: Vec<f64> = pts.iter().map(|r| (r.d as f64).sqrt() * (r.d as f64).ln()).collect();
        ResidualProfile { fit_linear: linear_fit(&xd, &ly), fit_sqrt_log: linear_fit(&xs, &ly), rows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kostlan::{evaluate, RealPoint};
    use rand::SeedableRng;

    fn p1(d: usize) -> Arc<BasisSet> {
        Arc::new(BasisSet::uniform(&AmbientSpace::projective(1), 1, d).unwrap())
    }

    fn raw(space: &Arc<BasisSet>, terms: Vec<(Vec<usize>, f64)>) -> SectionSystem {
        SectionSystem::from_raw_terms(space.clone(), &[terms]).unwrap()
    }

    #[test]
    fn sigma_is_positive() {
        for (x, b) in [
            (AmbientSpace::projective(1), vec![vec![1]]),
            (AmbientSpace::projective(2), vec![vec![1]]),
            (AmbientSpace::new(vec![1, 1]).unwrap(), vec![vec![1, 1]]),
        ] {
            let bundles = BundleSystem::new(&x, b, crate::ambient::Powers::Numeric(vec![2])).unwrap();
            let s = sigma_default(&x, &bundles).unwrap();
            assert!((s.min_on_locus().unwrap() - 1.0).abs() < 1e-12);
        }
        let x = AmbientSpace::projective(1);
        assert!(SigmaSection::new(&x, &BundleSystem::uniform(&x, 1, 2).unwrap(), 3).is_err());
    }

    #[test]
    fn multiply_constant_gives_quadric() {
        let x = AmbientSpace::projective(1);
        let sigma = sigma_default(&x, &BundleSystem::uniform(&x, 1, 2).unwrap()).unwrap();
        let one = raw(&p1(0), vec![(vec![0, 0], 1.0)]);
        let q = multiply_by_sigma_power(&one, &sigma, 1).unwrap();
        assert_eq!(q.raw()[0], vec![1.0, 0.0, 1.0]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let s = sample(&p1(5), RngSeed::new(1, 1, 1));
        let prod = multiply_by_sigma_power(&s, &sigma, 2).unwrap();
        for _ in 0..20 {
            let p = RealPoint::random(&x, &mut rng);
            let f = p.flat();
            let expect = evaluate(&s, &p)[0] * sigma.component(0).eval(&f).powi(2);
            assert!((evaluate(&prod, &p)[0] - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn hand_computed_projection() {
        let x = AmbientSpace::projective(1);
        let sp = p1(2);
        let sigma = sigma_default(&x, sp.bundles()).unwrap();
        let sub = subspace_basis(&sp, &sigma, 1).unwrap();
        assert_eq!(sub.dimension(), 1);
        let e = &sub.elements()[0];
        let q = raw(&sp, vec![(vec![2, 0], 1.0), (vec![0, 2], 1.0)]);
        assert!((q.norm_l2().powi(2) - 2.0 / 3.0).abs() < 1e-15);
        assert!((e.inner_product(&q).unwrap().abs() - q.norm_l2()).abs() < 1e-14);
        let s = raw(&sp, vec![(vec![2, 0], 1.0)]);
        let (s0, perp) = sub.project(&s).unwrap();
        let want0 = raw(&sp, vec![(vec![2, 0], 0.5), (vec![0, 2], 0.5)]);
        let want1 = raw(&sp, vec![(vec![2, 0], 0.5), (vec![0, 2], -0.5)]);
        assert!(s0.sub(&want0).unwrap().norm_l2() < 1e-12);
        assert!(perp.sub(&want1).unwrap().norm_l2() < 1e-12);
        let quotient = sub.approx(&s).unwrap();
        assert!((quotient.raw()[0][0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pivoting_is_undone() {
        let x = AmbientSpace::projective(2);
        let sp = Arc::new(BasisSet::uniform(&x, 2, 6).unwrap());
        let sigma = sigma_default(&x, sp.bundles()).unwrap();
        for ell in [0, 1, 2, 3] {
            let sub = subspace_basis(&sp, &sigma, ell).unwrap();
            let t = sample(sub.lowered_space(), RngSeed::new(2, ell as u64, 0));
            let s = multiply_by_sigma_power(&t, &sigma, ell).unwrap();
            let back = sub.approx(&s).unwrap();
            assert!(back.sub(&t).unwrap().norm_l2() < 1e-9 * t.norm_l2());
            let (_, perp) = sub.project(&s).unwrap();
            assert!(perp.norm_l2() < 1e-10 * s.norm_l2());
        }
        assert!(matches!(subspace_basis(&sp, &sigma, 4), Err(Error::DegreeUnderflow { .. })));
    }

    #[test]
    fn ell_zero_is_everything() {
        let sp = p1(9);
        let x = AmbientSpace::projective(1);
        let sigma = sigma_default(&x, sp.bundles()).unwrap();
        let sub = subspace_basis(&sp, &sigma, 0).unwrap();
        assert_eq!(sub.dimension(), 10);
        let s = sample(&sp, RngSeed::new(0, 0, 0));
        let (_, perp) = sub.project(&s).unwrap();
        assert!(perp.norm_l2() < 1e-12);
        let prof =
            residual_profile(&x, sp.bundles(), 2, EllMode::Fixed(0), &[4, 6], 3, 1, &SearchParams::default()).unwrap();
        assert!(prof.rows.iter().all(|r| r.max < 1e-12));
    }
}
