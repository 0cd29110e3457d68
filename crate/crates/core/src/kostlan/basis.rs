use std::collections::HashMap;

use crate::ambient::{AmbientSpace, BundleSystem};
use crate::error::Result;

/// Tag written into serialized sections; bump when the entry ordering changes.
pub const BASIS_ORDERING: &str = "grlex-desc-v1";

/// `binom(n, k)` in floating point; exact while the value fits the mantissa.
pub(crate) fn binom_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Exponent vectors of degree `d` in `nv` variables, `X_0^d` first.
fn homogeneous_exponents(nv: usize, d: usize) -> Vec<Vec<usize>> {
    if nv == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for e0 in (0..=d).rev() {
        for mut rest in homogeneous_exponents(nv - 1, d - e0) {
            rest.insert(0, e0);
            out.push(rest);
        }
    }
    out
}

/// Orthonormal weighted monomials `w_α X^α` for one multidegree on the ambient product.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialBasis {
    ambient: AmbientSpace,
    degrees: Vec<usize>,
    /// Flattened exponents, one entry per homogeneous coordinate of the product.
    entries: Vec<Vec<usize>>,
    weights: Vec<f64>,
    index: HashMap<Vec<usize>, usize>,
}

impl MonomialBasis {
    pub fn new(ambient: &AmbientSpace, degrees: &[usize]) -> Self {
        assert_eq!(degrees.len(), ambient.num_factors(), "one degree per factor");
        let mut entries: Vec<Vec<usize>> = vec![Vec::new()];
        let mut weights = vec![1.0];
        for (j, &d) in degrees.iter().enumerate() {
            let n = ambient.factors()[j];
            let block = homogeneous_exponents(n + 1, d);
            let block_w: Vec<f64> = block
                .iter()
                .map(|a| {
                    // (n+d)!/(n! α!) = binom(n+d, n) · d!/α!
                    let mut multi = 1.0;
                    let mut left = d;
                    for &e in a {
                        multi *= binom_f64(left, e);
                        left -= e;
                    }
                    (binom_f64(n + d, n) * multi).sqrt()
                })
                .collect();
            let mut next_e = Vec::with_capacity(entries.len() * block.len());
            let mut next_w = Vec::with_capacity(entries.len() * block.len());
            for (e, w) in entries.iter().zip(&weights) {
                for (b, bw) in block.iter().zip(&block_w) {
                    let mut v = e.clone();
                    v.extend_from_slice(b);
                    next_e.push(v);
                    next_w.push(w * bw);
                }
            }
            entries = next_e;
            weights = next_w;
        }
        let index = entries.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Self { ambient: ambient.clone(), degrees: degrees.to_vec(), entries, weights, index }
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn entries(&self) -> &[Vec<usize>] {
        &self.entries
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `N_d`, the dimension of the space of sections.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of(&self, exponents: &[usize]) -> Option<usize> {
        self.index.get(exponents).copied()
    }
}

/// One basis per bundle of a numeric bundle system.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    ambient: AmbientSpace,
    bundles: BundleSystem,
    bases: Vec<MonomialBasis>,
}

impl BasisSet {
    pub fn new(ambient: &AmbientSpace, bundles: &BundleSystem) -> Result<Self> {
        let bases = bundles.factor_degrees()?.iter().map(|deg| MonomialBasis::new(ambient, deg)).collect();
        Ok(Self { ambient: ambient.clone(), bundles: bundles.clone(), bases })
    }

    /// `m` copies of `O(1,...,1)^d`.
    pub fn uniform(ambient: &AmbientSpace, m: usize, d: usize) -> Result<Self> {
        Self::new(ambient, &BundleSystem::uniform(ambient, m, d)?)
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn bundles(&self) -> &BundleSystem {
        &self.bundles
    }

    pub fn bases(&self) -> &[MonomialBasis] {
        &self.bases
    }

    pub fn basis(&self, i: usize) -> &MonomialBasis {
        &self.bases[i]
    }

    pub fn num_bundles(&self) -> usize {
        self.bases.len()
    }

    /// Total number of coefficients across the bundles.
    pub fn total_len(&self) -> usize {
        self.bases.iter().map(MonomialBasis::len).sum()
    }

    /// Largest per-factor polynomial degree across bundles.
    pub fn max_degree(&self) -> usize {
        self.bases.iter().flat_map(|b| b.degrees().iter().copied()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_quadrics() {
        let b = MonomialBasis::new(&AmbientSpace::projective(1), &[2]);
        assert_eq!(b.entries(), &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        let s3 = 3f64.sqrt();
        let expect = [s3, s3 * 2f64.sqrt(), s3];
        for (w, e) in b.weights().iter().zip(expect) {
            assert!((w - e).abs() < 1e-14);
        }
    }

    #[test]
    fn constants_and_linear_forms() {
        let b = MonomialBasis::new(&AmbientSpace::projective(1), &[0]);
        assert_eq!(b.len(), 1);
        assert_eq!(b.weights(), &[1.0]);
        let b = MonomialBasis::new(&AmbientSpace::projective(2), &[1]);
        assert_eq!(b.len(), 3);
        assert!(b.weights().iter().all(|w| (w - 3f64.sqrt()).abs() < 1e-14));
    }

    #[test]
    fn dimension_counts() {
        let x = AmbientSpace::new(vec![1, 2]).unwrap();
        let b = MonomialBasis::new(&x, &[3, 4]);
        assert_eq!(b.len(), 4 * 15);
        assert_eq!(b.index_of(&b.entries()[17].clone()), Some(17));
        let p2 = MonomialBasis::new(&AmbientSpace::projective(2), &[10]);
        assert_eq!(p2.len(), 66);
    }
}
