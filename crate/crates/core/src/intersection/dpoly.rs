use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// An integer polynomial in the formal degree variable `d`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DPoly {
    coeffs: Vec<BigInt>,
}

impl DPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::new(vec![c.into()])
    }

    /// The polynomial `d`.
    pub fn var() -> Self {
        Self::new(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `d^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, d: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * d + c)
    }

    pub fn eval_i64(&self, d: i64) -> BigInt {
        self.eval(&BigInt::from(d))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(1), |acc, _| &acc * self)
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl From<i64> for DPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Add for &DPoly {
    type Output = DPoly;
    fn add(self, rhs: &DPoly) -> DPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Add for DPoly {
    type Output = DPoly;
    fn add(self, rhs: DPoly) -> DPoly {
        &self + &rhs
    }
}

impl AddAssign<&DPoly> for DPoly {
    fn add_assign(&mut self, rhs: &DPoly) {
        *self = &*self + rhs;
    }
}

impl Sub for &DPoly {
    type Output = DPoly;
    fn sub(self, rhs: &DPoly) -> DPoly {
        self + &(-rhs)
    }
}

impl Sub for DPoly {
    type Output = DPoly;
    fn sub(self, rhs: DPoly) -> DPoly {
        &self - &rhs
    }
}

impl Neg for &DPoly {
    type Output = DPoly;
    fn neg(self) -> DPoly {
        DPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for DPoly {
    type Output = DPoly;
    fn neg(self) -> DPoly {
        -&self
    }
}

impl Mul for &DPoly {
    type Output = DPoly;
    fn mul(self, rhs: &DPoly) -> DPoly {
        if self.is_zero() || rhs.is_zero() {
            return DPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DPoly::new(out)
    }
}

impl Mul for DPoly {
    type Output = DPoly;
    fn mul(self, rhs: DPoly) -> DPoly {
        &self * &rhs
    }
}

impl fmt::Display for DPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "d")?,
                _ => write!(f, "d^{k}")?,
            }
        }
        Ok(())
    }
}

/// Serializes as a JSON array of integers, lowest degree first.
impl Serialize for DPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&BigIntNumber(c))?;
        }
        seq.end()
    }
}

/// Serializes a big integer as a plain JSON number of arbitrary length.
pub(crate) struct BigIntNumber<'a>(pub &'a BigInt);

impl Serialize for BigIntNumber<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => {
                let n: serde_json::Number = self.0.to_string().parse().map_err(serde::ser::Error::custom)?;
                n.serialize(s)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_arith() {
        let d = DPoly::var();
        let p = &(&d * &d) - &(&d.scale(&BigInt::from(3)) - &DPoly::constant(4));
        assert_eq!(p, DPoly::from_i64s(&[4, -3, 1]));
        assert_eq!(p.to_string(), "d^2 - 3d + 4");
        assert_eq!((-&d).to_string(), "-d");
        assert_eq!(p.eval_i64(3), BigInt::from(4));
        assert_eq!(DPoly::default().to_string(), "0");
    }

    #[test]
    fn big_coefficients_serialize_as_numbers() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let p = DPoly::new(vec![BigInt::from(-2), big]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[-2,123456789012345678901234567890]");
    }
}
