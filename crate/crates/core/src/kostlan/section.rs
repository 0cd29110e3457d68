use std::sync::Arc;

use crate::ambient::{AmbientSpace, BundleSystem};
use crate::error::{Error, Result};

use super::basis::BasisSet;

/// A real section `(s_1, ..., s_m)` stored as orthonormal-basis coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionSystem {
    space: Arc<BasisSet>,
    coeffs: Vec<Vec<f64>>,
}

impl SectionSystem {
    pub fn new(space: Arc<BasisSet>, coeffs: Vec<Vec<f64>>) -> Result<Self> {
        if coeffs.len() != space.num_bundles() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficient vectors for {} bundles",
                coeffs.len(),
                space.num_bundles()
            )));
        }
        for (i, c) in coeffs.iter().enumerate() {
            if c.len() != space.basis(i).len() {
                return Err(Error::DimensionMismatch(format!(
                    "bundle {i}: {} coefficients, basis has {}",
                    c.len(),
                    space.basis(i).len()
                )));
            }
        }
        Ok(Self { space, coeffs })
    }

    pub fn zeros(space: Arc<BasisSet>) -> Self {
        let coeffs = space.bases().iter().map(|b| vec![0.0; b.len()]).collect();
        Self { space, coeffs }
    }

    /// Section whose only nonzero coefficient is basis entry `k` of bundle `i`.
    pub fn basis_element(space: Arc<BasisSet>, i: usize, k: usize) -> Self {
        let mut s = Self::zeros(space);
        s.coeffs[i][k] = 1.0;
        s
    }

    /// Converts raw monomial coefficients (in basis order) to orthonormal coordinates.
    pub fn from_raw(space: Arc<BasisSet>, raw: Vec<Vec<f64>>) -> Result<Self> {
        let mut s = Self::new(space, raw)?;
        for (c, b) in s.coeffs.iter_mut().zip(s.space.bases()) {
            c.iter_mut().zip(b.weights()).for_each(|(v, w)| *v /= w);
        }
        Ok(s)
    }

    /// Builds a single-bundle-row section from `(exponents, raw coefficient)` terms.
    pub fn from_raw_terms(space: Arc<BasisSet>, terms: &[Vec<(Vec<usize>, f64)>]) -> Result<Self> {
        let mut raw: Vec<Vec<f64>> = space.bases().iter().map(|b| vec![0.0; b.len()]).collect();
        if terms.len() != raw.len() {
            return Err(Error::DimensionMismatch("one term list per bundle".into()));
        }
        for (i, list) in terms.iter().enumerate() {
            for (e, c) in list {
                let k = space
                    .basis(i)
                    .index_of(e)
                    .ok_or_else(|| Error::DimensionMismatch(format!("monomial {e:?} not in bundle {i}")))?;
                raw[i][k] += c;
            }
        }
        Self::from_raw(space, raw)
    }

    /// Raw monomial coefficients in basis order.
    pub fn raw(&self) -> Vec<Vec<f64>> {
        self.coeffs
            .iter()
            .zip(self.space.bases())
            .map(|(c, b)| c.iter().zip(b.weights()).map(|(v, w)| v * w).collect())
            .collect()
    }

    pub fn space(&self) -> &Arc<BasisSet> {
        &self.space
    }

    pub fn ambient(&self) -> &AmbientSpace {
        self.space.ambient()
    }

    pub fn bundles(&self) -> &BundleSystem {
        self.space.bundles()
    }

    pub fn coeffs(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.coeffs
    }

    pub fn component(&self, i: usize) -> &[f64] {
        &self.coeffs[i]
    }

    pub fn num_bundles(&self) -> usize {
        self.coeffs.len()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.space.bundles() != other.space.bundles() || self.space.ambient() != other.space.ambient() {
            return Err(Error::DimensionMismatch("sections live in different spaces".into()));
        }
        Ok(())
    }

    /// The L² product: the Euclidean product of the coefficient vectors.
    pub fn inner_product(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()).sum())
    }

    pub fn norm_l2(&self) -> f64 {
        self.coeffs.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, k: f64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.iter().map(|v| v * k).collect()).collect();
        Self { space: self.space.clone(), coeffs }
    }

    /// `self + k * other`.
    pub fn axpy(&self, k: f64, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + k * y).collect())
            .collect();
        Ok(Self { space: self.space.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(1.0, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_monomial_norms() {
        let x = AmbientSpace::projective(1);
        let space = Arc::new(BasisSet::uniform(&x, 1, 2).unwrap());
        let s = SectionSystem::from_raw_terms(space.clone(), &[vec![(vec![2, 0], 1.0)]]).unwrap();
        assert!((s.inner_product(&s).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let t = SectionSystem::from_raw_terms(space.clone(), &[vec![(vec![1, 1], 1.0)]]).unwrap();
        assert!((t.inner_product(&t).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(s.inner_product(&t).unwrap(), 0.0);
        let raw = s.raw();
        assert!((raw[0][0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mismatched_sections_are_rejected() {
        let x = AmbientSpace::projective(1);
        let a = SectionSystem::zeros(Arc::new(BasisSet::uniform(&x, 1, 2).unwrap()));
        let b = SectionSystem::zeros(Arc::new(BasisSet::uniform(&x, 1, 3).unwrap()));
        assert!(matches!(a.inner_product(&b), Err(Error::DimensionMismatch(_))));
        assert!(SectionSystem::new(a.space().clone(), vec![vec![0.0; 2]]).is_err());
    }
}
