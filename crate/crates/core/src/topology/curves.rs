//! Connected components of a real plane curve `{p = 0} ⊂ RP^2`.
//!
//! The sphere is covered by the eight faces of the octahedron `|x|+|y|+|z| = 1`; central
//! projection maps each face homeomorphically onto a spherical triangle, so the zero set
//! of `p` on the faces has the topology of the curve on `S^2`. Each face carries the
//! Bernstein net of `p`, refined by newest-vertex bisection until every cell is either
//! certainly free of zeros or certainly contains one arc (a constant-sign directional
//! derivative and two boundary crossings). Boundary crossings get canonical keys on the
//! integer lattice of vertex coordinates, so cells sharing a crossing can be merged by
//! union-find regardless of their sizes.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::bernstein::{certain_sign, max_variations, SubdivisionStats, U};

/// Lattice scale of vertex coordinates: every face vertex has coordinates summing to
/// `±2^52` in absolute value, so lattice points convert to `f64` exactly.
const SCALE_BITS: u32 = 52;
/// Deepest bisection level of a cell.
pub const MAX_CELL_DEPTH: usize = 48;
pub const DEFAULT_BUDGET: usize = 1_000_000;

type Vertex = [i64; 3];

/// A ternary form of degree `d` with coefficients indexed by exponent triples.
#[derive(Debug, Clone)]
pub struct TernaryForm {
    pub degree: usize,
    pub terms: Vec<([usize; 3], f64)>,
}

impl TernaryForm {
    /// Value at a lattice vertex and a rigorous bound on the evaluation error.
    fn eval_bounded(&self, v: &Vertex) -> (f64, f64) {
        let x = [v[0] as f64, v[1] as f64, v[2] as f64].map(|t| t * (0.5f64).powi(SCALE_BITS as i32));
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        for (e, c) in &self.terms {
            let mono = x[0].powi(e[0] as i32) * x[1].powi(e[1] as i32) * x[2].powi(e[2] as i32);
            let t = c * mono;
            sum += t;
            abs_sum += t.abs();
        }
        let gamma = (2 * self.degree + self.terms.len() + 4) as f64 * U * 1.01;
        (sum, gamma * abs_sum + f64::MIN_POSITIVE)
    }

    fn sign_at(&self, v: &Vertex) -> Option<i8> {
        let (s, e) = self.eval_bounded(v);
        certain_sign(s, e)
    }
}

/// Triangular Bernstein net indexed by `(i, j, k)`, powers of the barycentric
/// coordinates of `(peak, left, right)`.
#[derive(Debug, Clone)]
struct Net {
    d: usize,
    coef: Vec<f64>,
    err: Vec<f64>,
}

fn idx(d: usize, i: usize, j: usize) -> usize {
    // rows by i, within a row by j; k = d - i - j
    let before: usize = (0..i).map(|r| d - r + 1).sum();
    before + j
}

impl Net {
    fn get(&self, i: usize, j: usize) -> (f64, f64) {
        let t = idx(self.d, i, j);
        (self.coef[t], self.err[t])
    }

    fn corner_signs(&self) -> [Option<i8>; 3] {
        let d = self.d;
        [(d, 0), (0, d), (0, 0)].map(|(i, j)| {
            let (c, e) = self.get(i, j);
            certain_sign(c, e)
        })
    }

    /// Edge coefficients from `a` to `b`, vertices numbered 0 = peak, 1 = left, 2 = right.
    fn edge(&self, a: usize, b: usize) -> (Vec<f64>, Vec<f64>) {
        let d = self.d;
        let mut c = Vec::with_capacity(d + 1);
        let mut e = Vec::with_capacity(d + 1);
        for t in 0..=d {
            let mut ex = [0usize; 3];
            ex[a] = d - t;
            ex[b] = t;
            let (v, r) = self.get(ex[0], ex[1]);
            c.push(v);
            e.push(r);
        }
        (c, e)
    }

    /// Whether the derivative along `to - from` has certainly constant sign.
    fn monotone(&self, from: usize, to: usize) -> bool {
        let d = self.d;
        let mut sign = 0i8;
        for i in 0..d {
            for j in 0..d - i {
                let base = [i, j, d - 1 - i - j];
                let mut hi = base;
                hi[to] += 1;
                let mut lo = base;
                lo[from] += 1;
                let (a, ea) = self.get(hi[0], hi[1]);
                let (b, eb) = self.get(lo[0], lo[1]);
                let diff = a - b;
                match certain_sign(diff, ea + eb + U * diff.abs()) {
                    Some(s) if sign == 0 || s == sign => sign = s,
                    _ => return false,
                }
            }
        }
        true
    }

    /// All coefficients certainly of one sign.
    fn one_signed(&self) -> bool {
        let mut sign = 0i8;
        for (&c, &e) in self.coef.iter().zip(&self.err) {
            match certain_sign(c, e) {
                Some(s) if sign == 0 || s == sign => sign = s,
                _ => return false,
            }
        }
        true
    }

    /// Row-wise de Casteljau at 1/2 along the edge `left -> right`; returns the nets
    /// on `(peak, left, mid)` and `(peak, mid, right)`.
    fn bisect(&self) -> (Net, Net) {
        let d = self.d;
        let mut a = Net { d, coef: vec![0.0; self.coef.len()], err: vec![0.0; self.coef.len()] };
        let mut b = a.clone();
        for i in 0..=d {
            let r = d - i;
            // row coefficients along left -> right: index t = power of right = k
            let mut c: Vec<f64> = (0..=r).map(|k| self.get(i, r - k).0).collect();
            let mut e: Vec<f64> = (0..=r).map(|k| self.get(i, r - k).1).collect();
            let put = |net: &mut Net, k: usize, v: f64, er: f64| {
                let t = idx(d, i, r - k);
                net.coef[t] = v;
                net.err[t] = er;
            };
            put(&mut a, 0, c[0], e[0]);
            put(&mut b, r, c[r], e[r]);
            for s in 1..=r {
                for k in 0..=r - s {
                    let (x, y) = (0.5 * c[k], 0.5 * c[k + 1]);
                    e[k] = 0.5 * (e[k] + e[k + 1]) + 1.01 * U * (x + y).abs();
                    c[k] = x + y;
                }
                put(&mut a, s, c[0], e[0]);
                put(&mut b, r - s, c[r - s], e[r - s]);
            }
        }
        (a, b)
    }

    /// Re-indexes for a new vertex order given as the old positions of the new
    /// `(peak, left, right)`.
    fn permuted(&self, order: [usize; 3]) -> Net {
        let d = self.d;
        let mut out = Net { d, coef: vec![0.0; self.coef.len()], err: vec![0.0; self.coef.len()] };
        for i in 0..=d {
            for j in 0..=d - i {
                let old = [i, j, d - i - j];
                let new = [old[order[0]], old[order[1]], old[order[2]]];
                let (s, t) = (idx(d, i, j), idx(d, new[0], new[1]));
                out.coef[t] = self.coef[s];
                out.err[t] = self.err[s];
            }
        }
        out
    }
}

struct Cell {
    verts: [Vertex; 3],
    net: Net,
    depth: usize,
}

#[derive(Default)]
struct UnionFind {
    parent: Vec<usize>,
    ids: HashMap<(Vertex, Vertex), usize>,
}

impl UnionFind {
    fn id(&mut self, key: (Vertex, Vertex)) -> usize {
        if let Some(&i) = self.ids.get(&key) {
            return i;
        }
        let i = self.parent.len();
        self.parent.push(i);
        self.ids.insert(key, i);
        i
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn midpoint(a: &Vertex, b: &Vertex) -> Vertex {
    [(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2]
}

fn halvable(a: &Vertex, b: &Vertex) -> bool {
    (0..3).all(|t| (a[t] + b[t]) % 2 == 0)
}

fn canonical(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Canonical key of the unique crossing on the lattice edge `a -> b`, whose endpoint
/// signs differ: the finest dyadic sub-segment containing it, or a degenerate segment at
/// the first midpoint whose sign cannot be certified.
fn crossing_key(p: &TernaryForm, mut a: Vertex, mut b: Vertex, mut sa: i8) -> (Vertex, Vertex) {
    while halvable(&a, &b) {
        let m = midpoint(&a, &b);
        match p.sign_at(&m) {
            Some(s) if s == sa => {
                a = m;
                sa = s;
            }
            Some(_) => b = m,
            None => return (m, m),
        }
    }
    canonical(a, b)
}

/// Result of a certified curve analysis on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveCount {
    /// Components in `RP^2`.
    pub components: usize,
    /// Components on `S^2` before antipodal identification.
    pub sphere_components: usize,
    pub self_antipodal: usize,
    pub stats: SubdivisionStats,
}

fn multinomial(d: usize, e: &[usize; 3]) -> f64 {
    let f = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    f(d) / (f(e[0]) * f(e[1]) * f(e[2]))
}

/// Certified component count; `Err(NotTransversal)` when a vertex, midpoint or cell
/// cannot be certified, `Err(BudgetExceeded)` past `budget` cells.
pub fn analyze_curve(p: &TernaryForm, budget: usize) -> Result<CurveCount> {
    let d = p.degree;
    if p.terms.iter().all(|(_, c)| *c == 0.0) {
        return Err(Error::Degenerate("zero polynomial".into()));
    }
    let one = 1i64 << SCALE_BITS;
    let mut stack = Vec::new();
    for signs in 0..8u8 {
        let s = [0, 1, 2].map(|t| if signs >> t & 1 == 1 { -1i64 } else { 1 });
        let verts = [[s[0] * one, 0, 0], [0, s[1] * one, 0], [0, 0, s[2] * one]];
        let len = (d + 1) * (d + 2) / 2;
        let mut net = Net { d, coef: vec![0.0; len], err: vec![0.0; len] };
        for (e, c) in &p.terms {
            let sign = (0..3).map(|t| if s[t] < 0 && e[t] % 2 == 1 { -1.0 } else { 1.0 }).product::<f64>();
            let v = sign * c / multinomial(d, e);
            let t = idx(d, e[0], e[1]);
            net.coef[t] = v;
            net.err[t] = 4.0 * (d as f64 + 2.0) * U * v.abs();
        }
        stack.push(Cell { verts, net, depth: 0 });
    }
    let mut uf = UnionFind::default();
    let mut keys = Vec::new();
    let mut stats = SubdivisionStats::default();
    while let Some(cell) = stack.pop() {
        stats.cells += 1;
        stats.max_depth = stats.max_depth.max(cell.depth);
        if stats.cells > budget {
            let partial = count_components(&mut uf, &keys).0;
            return Err(Error::BudgetExceeded { budget, partial_components: partial });
        }
        let net = &cell.net;
        if net.one_signed() {
            continue;
        }
        let corners = net.corner_signs();
        if corners.iter().any(Option::is_none) {
            return Err(Error::NotTransversal);
        }
        let corners = corners.map(Option::unwrap);
        let mut simple = true;
        let mut crossings = Vec::new();
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            let (c, e) = net.edge(a, b);
            if max_variations(&c, &e) > 1 {
                simple = false;
                break;
            }
            if corners[a] != corners[b] {
                crossings.push((a, b));
            }
        }
        if simple {
            simple = crossings.len() % 2 == 0
                && crossings.len() <= 2
                && (net.monotone(0, 1) || net.monotone(0, 2) || net.monotone(1, 2));
        }
        if simple {
            if crossings.len() == 2 {
                let ids: Vec<usize> = crossings
                    .iter()
                    .map(|&(a, b)| {
                        let key = crossing_key(p, cell.verts[a], cell.verts[b], corners[a]);
                        keys.push(key);
                        uf.id(key)
                    })
                    .collect();
                uf.union(ids[0], ids[1]);
            }
            continue;
        }
        if cell.depth >= MAX_CELL_DEPTH {
            return Err(Error::NotTransversal);
        }
        let [peak, left, right] = cell.verts;
        let mid = midpoint(&left, &right);
        let (a, b) = net.bisect();
        // children (mid, peak, left) and (mid, right, peak)
        stack.push(Cell { verts: [mid, peak, left], net: a.permuted([2, 0, 1]), depth: cell.depth + 1 });
        stack.push(Cell { verts: [mid, right, peak], net: b.permuted([1, 2, 0]), depth: cell.depth + 1 });
    }
    // every crossing lies on exactly two cells
    let mut seen: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for k in &keys {
        *seen.entry(*k).or_insert(0) += 1;
    }
    if seen.values().any(|&c| c != 2) {
        return Err(Error::NotTransversal);
    }
    let (sphere, self_anti) = count_components(&mut uf, &keys);
    let pairs = sphere - self_anti;
    if pairs % 2 != 0 {
        return Err(Error::NotTransversal);
    }
    Ok(CurveCount { components: self_anti + pairs / 2, sphere_components: sphere, self_antipodal: self_anti, stats })
}

fn count_components(uf: &mut UnionFind, keys: &[(Vertex, Vertex)]) -> (usize, usize) {
    let mut roots = std::collections::BTreeSet::new();
    let mut self_anti = std::collections::BTreeSet::new();
    for &(a, b) in keys {
        let i = uf.id((a, b));
        let r = uf.find(i);
        roots.insert(r);
        let neg = |v: Vertex| v.map(|t| -t);
        let anti = canonical(neg(a), neg(b));
        if let Some(&j) = uf.ids.get(&anti) {
            if uf.find(j) == r {
                self_anti.insert(r);
            }
        }
    }
    (roots.len(), self_anti.len())
}
