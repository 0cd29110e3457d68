//! Raw multihomogeneous polynomial arithmetic used for products with fixed sections and
//! for coordinate changes.

use std::collections::HashMap;

use crate::ambient::AmbientSpace;

use super::basis::MonomialBasis;

/// Sparse raw polynomial, keyed by flattened exponent vectors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawPoly {
    pub terms: HashMap<Vec<usize>, f64>,
}

impl RawPoly {
    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut terms = HashMap::new();
        terms.insert(vec![0; nvars], c);
        Self { terms }
    }

    /// Raw coefficients in the order of `basis` to a polynomial.
    pub fn from_basis(basis: &MonomialBasis, raw: &[f64]) -> Self {
        let terms = basis.entries().iter().zip(raw).filter(|(_, c)| **c != 0.0).map(|(e, c)| (e.clone(), *c)).collect();
        Self { terms }
    }

    /// Raw coefficients in the order of `basis`; panics on monomials outside it.
    pub fn to_basis(&self, basis: &MonomialBasis) -> Vec<f64> {
        let mut out = vec![0.0; basis.len()];
        for (e, c) in &self.terms {
            let k = basis.index_of(e).expect("monomial outside the target basis");
            out[k] += c;
        }
        out
    }

    /// `sum_t c_t X_{offset+t}`.
    pub fn linear_form(nvars: usize, offset: usize, coeffs: &[f64]) -> Self {
        let mut terms = HashMap::new();
        for (t, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[offset + t] = 1;
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// `X_{offset}^2 + ... + X_{offset+len-1}^2`.
    pub fn quadric(nvars: usize, offset: usize, len: usize) -> Self {
        let mut terms = HashMap::new();
        for t in 0..len {
            let mut e = vec![0; nvars];
            e[offset + t] = 2;
            terms.insert(e, 1.0);
        }
        Self { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: HashMap<Vec<usize>, f64> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<usize> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        Self { terms }
    }

    pub fn pow(&self, k: usize, nvars: usize) -> Self {
        (0..k).fold(Self::constant(nvars, 1.0), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(e, c)| c * e.iter().zip(x).map(|(&k, &t)| t.powi(k as i32)).product::<f64>()).sum()
    }

    /// Substitutes `x ↦ R_j^T x` on each factor, i.e. returns `p ∘ R^{-1}` for orthogonal
    /// `R`, so that `(R·p)(R x) = p(x)`.
    pub fn rotated(&self, ambient: &AmbientSpace, mats: &[Vec<Vec<f64>>]) -> Self {
        let nv = ambient.total_vars();
        // images of the coordinate functions
        let mut images = Vec::with_capacity(nv);
        for (j, r) in mats.iter().enumerate() {
            let off = ambient.var_offset(j);
            for v in 0..ambient.num_vars(j) {
                let col: Vec<f64> = (0..ambient.num_vars(j)).map(|u| r[u][v]).collect();
                images.push(Self::linear_form(nv, off, &col));
            }
        }
        let mut powers: HashMap<(usize, usize), Self> = HashMap::new();
        let mut out = Self::default();
        for (e, c) in &self.terms {
            let mut term = Self::constant(nv, *c);
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = powers.entry((v, k)).or_insert_with(|| images[v].pow(k, nv)).clone();
                term = term.mul(&p);
            }
            for (e2, c2) in term.terms {
                *out.terms.entry(e2).or_insert(0.0) += c2;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_evaluation() {
        let q = RawPoly::quadric(2, 0, 2);
        let l = RawPoly::linear_form(2, 0, &[1.0, -2.0]);
        let p = q.mul(&l);
        let x = [0.3, 0.7];
        assert!((p.eval(&x) - q.eval(&x) * l.eval(&x)).abs() < 1e-15);
        assert_eq!(p.terms.len(), 4);
    }

    #[test]
    fn rotation_moves_values() {
        let x = AmbientSpace::projective(1);
        let p = RawPoly::linear_form(2, 0, &[1.0, 0.0]).mul(&RawPoly::linear_form(2, 0, &[0.0, 1.0]));
        let (c, s) = (0.6f64, 0.8f64);
        let r = vec![vec![c, -s], vec![s, c]];
        let rp = p.rotated(&x, &[r.clone()]);
        let pt = [0.28, 0.96];
        let moved = [c * pt[0] - s * pt[1], s * pt[0] + c * pt[1]];
        assert!((rp.eval(&moved) - p.eval(&pt)).abs() < 1e-14);
    }
}
