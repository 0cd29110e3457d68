use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::ambient::AmbientSpace;
use crate::error::{Error, Result};

/// A point of the real locus, stored as one unit vector per factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RealPoint {
    coords: Vec<Vec<f64>>,
}

/// A unit tangent vector supported on one factor, embedded in the flattened coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub factor: usize,
    pub flat: Vec<f64>,
}

impl RealPoint {
    /// Normalizes each factor; rejects zero factors.
    pub fn new(ambient: &AmbientSpace, coords: Vec<Vec<f64>>) -> Result<Self> {
        if coords.len() != ambient.num_factors() {
            return Err(Error::DimensionMismatch(format!(
                "{} factor vectors for {} factors",
                coords.len(),
                ambient.num_factors()
            )));
        }
        let mut out = Vec::with_capacity(coords.len());
        for (j, mut v) in coords.into_iter().enumerate() {
            if v.len() != ambient.num_vars(j) {
                return Err(Error::DimensionMismatch(format!("factor {j} needs {} coordinates", ambient.num_vars(j))));
            }
            let norm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::DimensionMismatch(format!("factor {j} vector has norm {norm}")));
            }
            v.iter_mut().for_each(|t| *t /= norm);
            out.push(v);
        }
        Ok(Self { coords: out })
    }

    /// Point on `P^1` at angle `theta`.
    pub fn on_circle(theta: f64) -> Self {
        Self { coords: vec![vec![theta.cos(), theta.sin()]] }
    }

    /// Coordinate vector `e_0` in every factor.
    pub fn base(ambient: &AmbientSpace) -> Self {
        let coords = (0..ambient.num_factors())
            .map(|j| {
                let mut v = vec![0.0; ambient.num_vars(j)];
                v[0] = 1.0;
                v
            })
            .collect();
        Self { coords }
    }

    /// Uniformly distributed point on the product of spheres.
    pub fn random<R: Rng + ?Sized>(ambient: &AmbientSpace, rng: &mut R) -> Self {
        loop {
            let coords = (0..ambient.num_factors())
                .map(|j| (0..ambient.num_vars(j)).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
                .collect();
            if let Ok(p) = Self::new(ambient, coords) {
                return p;
            }
        }
    }

    pub fn coords(&self) -> &[Vec<f64>] {
        &self.coords
    }

    pub fn factor(&self, j: usize) -> &[f64] {
        &self.coords[j]
    }

    pub fn flat(&self) -> Vec<f64> {
        self.coords.concat()
    }

    /// Retraction: moves along a flattened direction and renormalizes each factor.
    pub fn moved(&self, dir: &[f64], step: f64) -> Self {
        let mut k = 0;
        let coords = self
            .coords
            .iter()
            .map(|v| {
                let mut w: Vec<f64> = v
                    .iter()
                    .map(|t| {
                        let r = t + step * dir[k];
                        k += 1;
                        r
                    })
                    .collect();
                let norm = w.iter().map(|t| t * t).sum::<f64>().sqrt();
                w.iter_mut().for_each(|t| *t /= norm);
                w
            })
            .collect();
        Self { coords }
    }

    /// Orthonormal frame of the tangent space: `n_j` vectors per factor, built from the
    /// Householder reflection exchanging `e_0` and the factor's unit vector.
    pub fn tangent_frame(&self) -> Vec<TangentVector> {
        let total: usize = self.coords.iter().map(Vec::len).sum();
        let mut frame = Vec::new();
        let mut offset = 0;
        for (j, x) in self.coords.iter().enumerate() {
            let s = if x[0] >= 0.0 { 1.0 } else { -1.0 };
            let denom = 1.0 + x[0].abs();
            for t in 1..x.len() {
                let mut flat = vec![0.0; total];
                for (r, &xr) in x.iter().enumerate() {
                    let u_r = if r == 0 { xr + s } else { xr };
                    flat[offset + r] = if r == t { 1.0 } else { 0.0 } - u_r * x[t] / denom;
                }
                frame.push(TangentVector { factor: j, flat });
            }
            offset += x.len();
        }
        frame
    }

    /// Applies one orthogonal matrix per factor, given row-major.
    pub fn transformed(&self, mats: &[Vec<Vec<f64>>]) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(mats)
            .map(|(x, r)| r.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect())
            .collect();
        Self { coords }
    }
}
