use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::dpoly::DPoly;
use crate::ambient::AmbientSpace;

/// An element of `Z[d][H_1, ..., H_k] / (H_1^{n_1+1}, ..., H_k^{n_k+1})`, the even
/// cohomology of a product of projective spaces with coefficients polynomial in `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyElement {
    bounds: Vec<usize>,
    terms: BTreeMap<Vec<usize>, DPoly>,
}

impl CohomologyElement {
    pub fn zero(x: &AmbientSpace) -> Self {
        Self { bounds: x.factors().to_vec(), terms: BTreeMap::new() }
    }

    pub fn one(x: &AmbientSpace) -> Self {
        Self::monomial(x, vec![0; x.num_factors()], DPoly::constant(1))
    }

    /// The hyperplane class `H_j` pulled back from factor `j`.
    pub fn hyperplane(x: &AmbientSpace, j: usize) -> Self {
        let mut e = vec![0; x.num_factors()];
        e[j] = 1;
        Self::monomial(x, e, DPoly::constant(1))
    }

    /// `c * H^exponents`, or zero if the monomial is truncated away.
    pub fn monomial(x: &AmbientSpace, exponents: Vec<usize>, c: DPoly) -> Self {
        let mut out = Self::zero(x);
        out.insert(exponents, c);
        out
    }

    fn insert(&mut self, exponents: Vec<usize>, c: DPoly) {
        if c.is_zero() || exponents.iter().zip(&self.bounds).any(|(e, n)| e > n) {
            return;
        }
        let entry = self.terms.entry(exponents).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &DPoly)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[usize]) -> DPoly {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Component of cohomological degree `2q` (total exponent `q`).
    pub fn graded_part(&self, q: usize) -> Self {
        Self {
            bounds: self.bounds.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<usize>() == q)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &DPoly) -> Self {
        let mut out = Self { bounds: self.bounds.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.insert(e.clone(), c * k);
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let one = Self {
            bounds: self.bounds.clone(),
            terms: BTreeMap::from([(vec![0; self.bounds.len()], DPoly::constant(1))]),
        };
        (0..e).fold(one, |acc, _| &acc * self)
    }

    /// `(1 + a)^{-1}` for `a` with no constant term (a nilpotent element).
    pub fn one_plus_inverse(a: &Self) -> Self {
        debug_assert!(a.coefficient(&vec![0; a.bounds.len()]).is_zero());
        let top: usize = a.bounds.iter().sum();
        let neg = -a;
        let mut acc = neg.pow(0);
        let mut power = acc.clone();
        for _ in 0..top {
            power = &power * &neg;
            acc = &acc + &power;
        }
        acc
    }

    /// Evaluates every coefficient at a numeric degree.
    pub fn eval_at(&self, d: i64) -> Self {
        let mut out = Self { bounds: self.bounds.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.insert(e.clone(), DPoly::constant(c.eval(&BigInt::from(d))));
        }
        out
    }
}

impl Add for &CohomologyElement {
    type Output = CohomologyElement;
    fn add(self, rhs: &CohomologyElement) -> CohomologyElement {
        assert_eq!(self.bounds, rhs.bounds, "ring mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &CohomologyElement {
    type Output = CohomologyElement;
    fn neg(self) -> CohomologyElement {
        CohomologyElement {
            bounds: self.bounds.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &CohomologyElement {
    type Output = CohomologyElement;
    fn sub(self, rhs: &CohomologyElement) -> CohomologyElement {
        self + &(-rhs)
    }
}

impl Mul for &CohomologyElement {
    type Output = CohomologyElement;
    fn mul(self, rhs: &CohomologyElement) -> CohomologyElement {
        assert_eq!(self.bounds, rhs.bounds, "ring mismatch");
        let mut out = CohomologyElement { bounds: self.bounds.clone(), terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<usize> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }
}
