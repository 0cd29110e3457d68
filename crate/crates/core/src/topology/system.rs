//! Real solutions of two ternary forms by exact elimination.
//!
//! The dyadic coefficients are scaled to integers, an integer shear
//! `x0 = y0 + a y2, x1 = y1 + b y2` puts the projection center `[0:0:1]` off both curves,
//! and the resultant in `y2` is computed exactly by evaluation at integer points,
//! fraction-free determinants and Newton interpolation. Its real roots, counted by the
//! certified binary-form counter, are in bijection with the real solutions whenever
//! they are all simple; a failed certification moves on to the next shear.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

use super::bernstein::{count_binary_form_roots, SubdivisionStats, U};
use super::curves::TernaryForm;

type IntForm = HashMap<[usize; 3], BigInt>;

const SHEARS: [(i64, i64); 8] = [(0, 0), (1, 2), (2, -1), (-3, 1), (1, 5), (4, -3), (-2, -7), (6, 1)];

/// Exact integer multiple of a form with dyadic coefficients.
fn to_integer_form(p: &TernaryForm) -> IntForm {
    let decoded: Vec<_> = p
        .terms
        .iter()
        .filter(|(_, c)| *c != 0.0)
        .map(|(e, c)| {
            let (mant, exp, sign) = num_traits::Float::integer_decode(*c);
            (*e, mant, exp, sign)
        })
        .collect();
    let emin = decoded.iter().map(|t| t.2).min().unwrap_or(0);
    let mut out = IntForm::new();
    for (e, mant, exp, sign) in decoded {
        let v = BigInt::from(mant) << ((exp - emin) as usize);
        *out.entry(e).or_insert_with(BigInt::zero) += if sign < 0 { -v } else { v };
    }
    out
}

fn binomials(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vec![vec![BigInt::one()]];
    for k in 1..=n {
        let prev = &rows[k - 1];
        let mut row = vec![BigInt::one(); k + 1];
        for t in 1..k {
            row[t] = &prev[t - 1] + &prev[t];
        }
        rows.push(row);
    }
    rows
}

fn shear(p: &IntForm, d: usize, a: i64, b: i64) -> IntForm {
    let bin = binomials(d);
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let mut out = IntForm::new();
    for (e, c) in p {
        // (y0 + a y2)^e0 (y1 + b y2)^e1 y2^e2
        for i in 0..=e[0] {
            let ca = c * &bin[e[0]][i] * a.pow((e[0] - i) as u32);
            for j in 0..=e[1] {
                let cb = &ca * &bin[e[1]][j] * b.pow((e[1] - j) as u32);
                let key = [i, j, e[2] + (e[0] - i) + (e[1] - j)];
                *out.entry(key).or_insert_with(BigInt::zero) += cb;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Coefficients in `z` (low to high) of `p(1, t, z)`.
fn univariate(p: &IntForm, d: usize, t: i64) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); d + 1];
    let t = BigInt::from(t);
    for (e, v) in p {
        c[e[2]] += v * t.pow(e[1] as u32);
    }
    c
}

/// Determinant by fraction-free Gaussian elimination.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Sylvester resultant of two univariate polynomials (coefficients low to high) whose
/// leading coefficients are nonzero.
fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (df, dg) = (f.len() - 1, g.len() - 1);
    let n = df + dg;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for r in 0..dg {
        for (k, c) in f.iter().rev().enumerate() {
            m[r][r + k] = c.clone();
        }
    }
    for r in 0..df {
        for (k, c) in g.iter().rev().enumerate() {
            m[dg + r][r + k] = c.clone();
        }
    }
    bareiss(m)
}

/// Power-basis coefficients of the polynomial taking `values[t]` at `t = 0, 1, ...`.
fn interpolate(values: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = values.len();
    let mut dd: Vec<BigRational> = values.iter().map(|v| BigRational::from_integer(v.clone())).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / BigRational::from_integer(BigInt::from(level));
        }
    }
    // Newton form sum dd[i] prod_{j<i} (t - j), expanded by Horner
    let mut poly = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // poly = poly * (t - i) + dd[i]
        let mut next = vec![BigRational::zero(); n];
        for k in 0..n {
            if poly[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &poly[k];
            }
            next[k] -= &poly[k] * BigRational::from_integer(BigInt::from(i));
        }
        next[0] += &dd[i];
        poly = next;
    }
    poly.into_iter().map(|c| if c.is_integer() { Some(c.to_integer()) } else { None }).collect()
}

/// Floating coefficients with error bounds for exact integers, scaled by a common power
/// of two to stay in range.
fn to_bounded_f64(r: &[BigInt]) -> (Vec<f64>, Vec<f64>) {
    let bits = r.iter().map(|v| v.bits()).max().unwrap_or(0) as i64;
    let shift = (bits - 100).max(0) as usize;
    r.iter()
        .map(|v| {
            if v.is_zero() {
                return (0.0, 0.0);
            }
            let s: BigInt = v >> shift;
            let f = s.to_f64().unwrap_or(f64::MAX);
            let trunc = if shift > 0 { 1.0 } else { 0.0 };
            (f, trunc + 4.0 * U * f.abs())
        })
        .unzip()
}

/// Number of real projective solutions and the shear used.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemCount {
    pub solutions: usize,
    pub shear: (i64, i64),
    pub stats: SubdivisionStats,
}

pub fn solve_square_system(f: &TernaryForm, g: &TernaryForm) -> Result<SystemCount> {
    let (df, dg) = (f.degree, g.degree);
    let (fi, gi) = (to_integer_form(f), to_integer_form(g));
    if fi.is_empty() || gi.is_empty() {
        return Err(Error::Degenerate("zero equation".into()));
    }
    let total = df * dg;
    let mut stats = SubdivisionStats::default();
    for (a, b) in SHEARS {
        let (fs, gs) = (shear(&fi, df, a, b), shear(&gi, dg, a, b));
        if !fs.contains_key(&[0, 0, df]) || !gs.contains_key(&[0, 0, dg]) {
            continue;
        }
        let values: Vec<BigInt> =
            (0..=total as i64).map(|t| resultant(&univariate(&fs, df, t), &univariate(&gs, dg, t))).collect();
        let r = interpolate(&values).ok_or_else(|| Error::Numerical("non-integer resultant".into()))?;
        if r.iter().all(Zero::is_zero) {
            return Err(Error::Degenerate("the equations share a component".into()));
        }
        let (c, e) = to_bounded_f64(&r);
        match count_binary_form_roots(&c, &e) {
            Ok((n, st)) => {
                stats.merge(st);
                return Ok(SystemCount { solutions: n, shear: (a, b), stats });
            }
            Err(Error::NotTransversal) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotTransversal)
}

/// Exact resultant coefficients for the given shear, lowest `y1` power first; `None` if
/// the shear leaves the projection center on a curve.
pub fn sheared_resultant(f: &TernaryForm, g: &TernaryForm, a: i64, b: i64) -> Option<Vec<BigInt>> {
    let (df, dg) = (f.degree, g.degree);
    let (fs, gs) = (shear(&to_integer_form(f), df, a, b), shear(&to_integer_form(g), dg, a, b));
    if !fs.contains_key(&[0, 0, df]) || !gs.contains_key(&[0, 0, dg]) {
        return None;
    }
    let values: Vec<BigInt> =
        (0..=(df * dg) as i64).map(|t| resultant(&univariate(&fs, df, t), &univariate(&gs, dg, t))).collect();
    interpolate(&values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(d: usize, terms: &[([usize; 3], f64)]) -> TernaryForm {
        TernaryForm { degree: d, terms: terms.to_vec() }
    }

    #[test]
    fn determinant_and_interpolation() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(3)],
            vec![BigInt::from(1), BigInt::from(4), BigInt::from(1)],
        ];
        assert_eq!(bareiss(m), BigInt::from(-24));
        // 3 - t + 2 t^3
        let vals: Vec<BigInt> = (0..5).map(|t: i64| BigInt::from(3 - t + 2 * t * t * t)).collect();
        let c = interpolate(&vals).unwrap();
        assert_eq!(c[..4], [3, -1, 0, 2].map(BigInt::from));
        assert!(c[4].is_zero());
    }

    #[test]
    fn two_lines_meet_once() {
        let f = form(1, &[([1, 0, 0], 1.0), ([0, 1, 0], -0.5), ([0, 0, 1], 0.25)]);
        let g = form(1, &[([1, 0, 0], 0.3), ([0, 1, 0], 2.0), ([0, 0, 1], -1.0)]);
        assert_eq!(solve_square_system(&f, &g).unwrap().solutions, 1);
        // coordinate lines meet at [0:0:1], which forces a shear
        let x = form(1, &[([1, 0, 0], 1.0)]);
        let y = form(1, &[([0, 1, 0], 1.0)]);
        let r = solve_square_system(&x, &y).unwrap();
        assert_eq!(r.solutions, 1);
        assert_ne!(r.shear, (0, 0));
    }

    #[test]
    fn circle_and_lines() {
        // x^2 + y^2 - z^2 with x = 0: two points; with x = 2z: none
        let c = form(2, &[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], -1.0)]);
        let l = form(1, &[([1, 0, 0], 1.0)]);
        assert_eq!(solve_square_system(&l, &c).unwrap().solutions, 2);
        let l = form(1, &[([1, 0, 0], 1.0), ([0, 0, 1], -2.0)]);
        assert_eq!(solve_square_system(&l, &c).unwrap().solutions, 0);
        // tangent line x = z touches the circle doubly
        let l = form(1, &[([1, 0, 0], 1.0), ([0, 0, 1], -1.0)]);
        assert!(matches!(solve_square_system(&l, &c), Err(Error::NotTransversal)));
    }

    #[test]
    fn shared_component_is_degenerate() {
        let l = form(1, &[([1, 0, 0], 1.0), ([0, 1, 0], 1.0)]);
        let q = form(2, &[([2, 0, 0], 1.0), ([1, 1, 0], 1.0), ([1, 0, 1], 1.0), ([0, 1, 1], 1.0)]);
        assert!(matches!(solve_square_system(&l, &q), Err(Error::Degenerate(_))));
    }
}
