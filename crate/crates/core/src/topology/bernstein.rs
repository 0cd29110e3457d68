//! Univariate Bernstein polynomials with rigorous coefficient error bounds, and
//! certified real root counting for binary forms.

use crate::error::{Error, Result};

/// Unit roundoff of `f64`.
pub(crate) const U: f64 = f64::EPSILON / 2.0;

/// Split ratios tried in order when the midpoint value is too close to zero.
const SPLITS: [f64; 5] = [0.5, 0.4375, 0.5625, 0.375, 0.625];

/// Deepest subdivision before a section is declared non-transversal.
pub const MAX_DEPTH: usize = 60;

/// Bernstein coefficients with absolute error bounds: the exact coefficient `k` lies in
/// `[coef[k] - err[k], coef[k] + err[k]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedBernstein {
    pub coef: Vec<f64>,
    pub err: Vec<f64>,
}

/// Sign of an uncertain value: `Some(±1)` when certain, `None` otherwise.
pub(crate) fn certain_sign(v: f64, e: f64) -> Option<i8> {
    if v > e {
        Some(1)
    } else if v < -e {
        Some(-1)
    } else {
        None
    }
}

/// Largest number of sign variations compatible with the error bounds.
pub(crate) fn max_variations(coef: &[f64], err: &[f64]) -> usize {
    const NEG: i64 = i64::MIN / 4;
    // best count with last nonzero sign +, -, or no nonzero sign yet
    let (mut pos, mut neg, mut none) = (NEG, NEG, 0i64);
    for (&c, &e) in coef.iter().zip(err) {
        let to_pos = pos.max(neg + 1).max(none);
        let to_neg = neg.max(pos + 1).max(none);
        match certain_sign(c, e) {
            Some(1) => (pos, neg, none) = (to_pos, NEG, NEG),
            Some(_) => (pos, neg, none) = (NEG, to_neg, NEG),
            None => (pos, neg) = (to_pos, to_neg),
        }
    }
    pos.max(neg).max(none).max(0) as usize
}

impl BoundedBernstein {
    pub fn new(coef: Vec<f64>, err: Vec<f64>) -> Self {
        debug_assert_eq!(coef.len(), err.len());
        Self { coef, err }
    }

    pub fn degree(&self) -> usize {
        self.coef.len() - 1
    }

    pub fn max_variations(&self) -> usize {
        max_variations(&self.coef, &self.err)
    }

    pub fn start_sign(&self) -> Option<i8> {
        certain_sign(self.coef[0], self.err[0])
    }

    pub fn end_sign(&self) -> Option<i8> {
        let d = self.degree();
        certain_sign(self.coef[d], self.err[d])
    }

    /// De Casteljau split at `t`, propagating error bounds.
    pub fn split(&self, t: f64) -> (Self, Self) {
        let d = self.degree();
        let s = 1.0 - t;
        let mut c = self.coef.clone();
        let mut e = self.err.clone();
        let mut left = Self::new(Vec::with_capacity(d + 1), Vec::with_capacity(d + 1));
        let mut right = Self::new(vec![0.0; d + 1], vec![0.0; d + 1]);
        left.coef.push(c[0]);
        left.err.push(e[0]);
        right.coef[d] = c[d];
        right.err[d] = e[d];
        for r in 1..=d {
            for k in 0..=d - r {
                let (a, b) = (s * c[k], t * c[k + 1]);
                let v = a + b;
                e[k] = s * e[k] + t * e[k + 1] + 2.01 * U * (a.abs() + b.abs());
                c[k] = v;
            }
            left.coef.push(c[0]);
            left.err.push(e[0]);
            right.coef[d - r] = c[d - r];
            right.err[d - r] = e[d - r];
        }
        (left, right)
    }
}

/// Work statistics of a certified count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct SubdivisionStats {
    pub cells: usize,
    pub max_depth: usize,
}

impl SubdivisionStats {
    pub fn merge(&mut self, o: SubdivisionStats) {
        self.cells += o.cells;
        self.max_depth = self.max_depth.max(o.max_depth);
    }
}

/// Number of roots in the open unit interval, each certified simple. The endpoint
/// signs must be certain.
pub fn count_interior_roots(p: BoundedBernstein, stats: &mut SubdivisionStats) -> Result<usize> {
    if p.start_sign().is_none() || p.end_sign().is_none() {
        return Err(Error::NotTransversal);
    }
    let mut stack = vec![(p, 0usize)];
    let mut count = 0;
    while let Some((q, depth)) = stack.pop() {
        stats.cells += 1;
        stats.max_depth = stats.max_depth.max(depth);
        let v = q.max_variations();
        if v <= 1 {
            // with certain endpoints the parity of the variations is known
            if q.start_sign() != q.end_sign() {
                count += 1;
            }
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(Error::NotTransversal);
        }
        let mut done = false;
        for t in SPLITS {
            let (l, r) = q.split(t);
            if l.end_sign().is_some() {
                stack.push((r, depth + 1));
                stack.push((l, depth + 1));
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::NotTransversal);
        }
    }
    Ok(count)
}

fn binom(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Counts the real projective roots of `sum_k c_k X0^{d-k} X1^k`, where each exact
/// coefficient lies within `err[k]` of `c[k]`. Roots at `[1:0]` and `[0:1]` are
/// recognized only when the corresponding coefficients are exactly zero.
pub fn count_binary_form_roots(c: &[f64], err: &[f64]) -> Result<(usize, SubdivisionStats)> {
    let mut lo = 0;
    let mut hi = c.len();
    let mut roots = 0;
    let exact_zero = |k: usize| c[k] == 0.0 && err[k] == 0.0;
    if (0..c.len()).all(exact_zero) {
        return Err(Error::Degenerate("zero polynomial".into()));
    }
    // deflate exact roots at X1 = 0 ([1:0]) and X0 = 0 ([0:1])
    if exact_zero(lo) {
        lo += 1;
        roots += 1;
        if exact_zero(lo) {
            return Err(Error::NotTransversal);
        }
    }
    if exact_zero(hi - 1) {
        hi -= 1;
        roots += 1;
        if exact_zero(hi - 1) {
            return Err(Error::NotTransversal);
        }
    }
    let (c, err) = (&c[lo..hi], &err[lo..hi]);
    let d = c.len() - 1;
    let mut stats = SubdivisionStats::default();
    if d == 0 {
        return Ok((roots, stats));
    }
    let mut seg1 = BoundedBernstein::new(vec![0.0; d + 1], vec![0.0; d + 1]);
    let mut seg2 = seg1.clone();
    for k in 0..=d {
        let b = binom(d, k);
        let v = c[k] / b;
        // binom is exact up to about 2^53; allow a relative slack for larger values
        let e = err[k] / b + (2.0 + 2.0 * d as f64) * U * v.abs();
        let e = if k == 0 || k == d { err[k] } else { e };
        // segment [1:0] -> [0:1]: points (1-u, u)
        seg1.coef[k] = v;
        seg1.err[k] = e;
        // segment [0:1] -> [-1:0]: points (-u, 1-u)
        let sign = if (d - k) % 2 == 0 { 1.0 } else { -1.0 };
        seg2.coef[d - k] = sign * v;
        seg2.err[d - k] = e;
    }
    // the segment endpoints ±e0, e1 are nonzero after deflation
    roots += count_interior_roots(seg1, &mut stats)?;
    roots += count_interior_roots(seg2, &mut stats)?;
    Ok((roots, stats))
}
