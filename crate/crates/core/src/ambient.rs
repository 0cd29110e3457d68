//! Ambient products of projective spaces and the line bundles on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A product `P^{n_1} x ... x P^{n_k}` of real projective spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct AmbientSpace {
    factors: Vec<usize>,
}

impl AmbientSpace {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidAmbient("at least one factor required".into()));
        }
        if factors.iter().any(|&n| n == 0) {
            return Err(Error::InvalidAmbient("factor dimensions must be >= 1".into()));
        }
        Ok(Self { factors })
    }

    /// `P^n`.
    pub fn projective(n: usize) -> Self {
        Self::new(vec![n]).expect("n >= 1")
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    /// Number of projective factors `k`.
    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// Total complex dimension `n`.
    pub fn dim(&self) -> usize {
        self.factors.iter().sum()
    }

    /// Number of homogeneous coordinates of factor `j`.
    pub fn num_vars(&self, j: usize) -> usize {
        self.factors[j] + 1
    }

    pub fn total_vars(&self) -> usize {
        self.factors.iter().map(|n| n + 1).sum()
    }

    /// Offset of factor `j`'s first coordinate in the flattened coordinate vector.
    pub fn var_offset(&self, j: usize) -> usize {
        self.factors[..j].iter().map(|n| n + 1).sum()
    }
}

impl TryFrom<Vec<usize>> for AmbientSpace {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<AmbientSpace> for Vec<usize> {
    fn from(a: AmbientSpace) -> Self {
        a.factors
    }
}

/// Tensor powers applied to the bundles: one formal degree `d`, or explicit numbers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Powers {
    Symbolic,
    Numeric(Vec<usize>),
}

/// The bundles `L_1, ..., L_m` given by multidegrees, raised to tensor powers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleSystem {
    multidegrees: Vec<Vec<usize>>,
    powers: Powers,
}

impl BundleSystem {
    pub fn new(ambient: &AmbientSpace, multidegrees: Vec<Vec<usize>>, powers: Powers) -> Result<Self> {
        let m = multidegrees.len();
        if m == 0 {
            return Err(Error::InvalidBundles("at least one bundle required".into()));
        }
        if m > ambient.dim() {
            return Err(Error::Overdetermined { m, n: ambient.dim() });
        }
        for row in &multidegrees {
            if row.len() != ambient.num_factors() {
                return Err(Error::InvalidBundles(format!(
                    "multidegree {:?} has {} entries, ambient has {} factors",
                    row,
                    row.len(),
                    ambient.num_factors()
                )));
            }
            if row.iter().any(|&a| a == 0) {
                return Err(Error::InvalidBundles(format!("multidegree {row:?} is not ample")));
            }
        }
        if let Powers::Numeric(p) = &powers {
            if p.len() != m {
                return Err(Error::InvalidBundles(format!("{} powers given for {} bundles", p.len(), m)));
            }
        }
        Ok(Self { multidegrees, powers })
    }

    /// `m` copies of `O(1,...,1)` raised to the same power.
    pub fn uniform(ambient: &AmbientSpace, m: usize, power: usize) -> Result<Self> {
        Self::new(ambient, vec![vec![1; ambient.num_factors()]; m], Powers::Numeric(vec![power; m]))
    }

    /// `m` copies of `O(1,...,1)` with the formal degree `d`.
    pub fn symbolic(ambient: &AmbientSpace, m: usize) -> Result<Self> {
        Self::new(ambient, vec![vec![1; ambient.num_factors()]; m], Powers::Symbolic)
    }

    pub fn num_bundles(&self) -> usize {
        self.multidegrees.len()
    }

    pub fn multidegrees(&self) -> &[Vec<usize>] {
        &self.multidegrees
    }

    pub fn powers(&self) -> &Powers {
        &self.powers
    }

    /// Same multidegrees with the formal degree `d`.
    pub fn to_symbolic(&self) -> Self {
        Self { multidegrees: self.multidegrees.clone(), powers: Powers::Symbolic }
    }

    /// Same multidegrees with new numeric powers.
    pub fn with_powers(&self, powers: Vec<usize>) -> Result<Self> {
        if powers.len() != self.num_bundles() {
            return Err(Error::InvalidBundles("wrong number of powers".into()));
        }
        Ok(Self { multidegrees: self.multidegrees.clone(), powers: Powers::Numeric(powers) })
    }

    pub fn numeric_powers(&self) -> Result<&[usize]> {
        match &self.powers {
            Powers::Numeric(p) => Ok(p),
            Powers::Symbolic => Err(Error::SymbolicDegree),
        }
    }

    /// Per-factor degrees `a_ij * d_i` of the polynomials representing sections of `L_i^{d_i}`.
    pub fn factor_degrees(&self) -> Result<Vec<Vec<usize>>> {
        let p = self.numeric_powers()?;
        Ok(self.multidegrees.iter().zip(p).map(|(row, &d)| row.iter().map(|a| a * d).collect()).collect())
    }
}
