//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use randci::topology::TernaryForm;

/// Real roots of `sum c_k t^k` from companion-matrix eigenvalues, plus the root at
/// infinity when the top coefficient vanishes. `None` when an eigenvalue is too close
/// to the real axis to classify.
pub fn eigen_root_count(c: &[f64]) -> Option<usize> {
    let mut top = c.len() - 1;
    let mut at_infinity = 0;
    while c[top] == 0.0 {
        top -= 1;
        at_infinity += 1;
    }
    if top == 0 {
        return Some(at_infinity);
    }
    let mut m = DMatrix::<f64>::zeros(top, top);
    for i in 1..top {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..top {
        m[(i, top - 1)] = -c[i] / c[top];
    }
    let mut real = 0;
    for z in m.complex_eigenvalues().iter() {
        let scale = 1.0 + z.norm();
        if z.im.abs() < 1e-9 * scale {
            real += 1;
        } else if z.im.abs() < 1e-5 * scale {
            return None;
        }
    }
    Some(real + at_infinity)
}

/// Sign grid on the surface of the cube `[-1, 1]^3` with `n` cells per face edge; the
/// number of sign regions minus one is the number of curve components on the sphere.
pub fn marching_sphere_components(p: &TernaryForm, n: usize) -> usize {
    let side = n + 1;
    let per_face = side * side;
    let mut parent: Vec<u32> = (0..(6 * per_face) as u32).collect();
    fn find(parent: &mut [u32], mut i: u32) -> u32 {
        while parent[i as usize] != i {
            let g = parent[parent[i as usize] as usize];
            parent[i as usize] = g;
            i = g;
        }
        i
    }
    fn union(parent: &mut [u32], a: u32, b: u32) {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
    let coord = |k: usize| -1.0 + 2.0 * k as f64 / n as f64;
    let mut signs = vec![false; 6 * per_face];
    let lattice = |f: usize, u: usize, v: usize| -> [usize; 3] {
        let (axis, hi) = (f / 2, f % 2 == 1);
        let mut q = [0usize; 3];
        q[axis] = if hi { n } else { 0 };
        q[(axis + 1) % 3] = u;
        q[(axis + 2) % 3] = v;
        q
    };
    for f in 0..6 {
        for v in 0..side {
            // coefficients of p along the row as a polynomial in the u coordinate
            let mut row = vec![0.0; p.degree + 1];
            let q0 = lattice(f, 0, v);
            let axis_u = (f / 2 + 1) % 3;
            for (e, c) in &p.terms {
                let mut fixed = *c;
                for t in 0..3 {
                    if t != axis_u {
                        fixed *= coord(q0[t]).powi(e[t] as i32);
                    }
                }
                row[e[axis_u]] += fixed;
            }
            for u in 0..side {
                let x = coord(u);
                let val = row.iter().rev().fold(0.0, |acc, c| acc * x + c);
                signs[f * per_face + v * side + u] = val >= 0.0;
            }
        }
    }
    for f in 0..6 {
        for v in 0..side {
            for u in 0..side {
                let i = f * per_face + v * side + u;
                if u + 1 < side && signs[i] == signs[i + 1] {
                    union(&mut parent, i as u32, (i + 1) as u32);
                }
                if v + 1 < side && signs[i] == signs[i + side] {
                    union(&mut parent, i as u32, (i + side) as u32);
                }
            }
        }
    }
    // stitch the duplicated boundary points of adjacent faces
    let mut boundary = std::collections::HashMap::new();
    for f in 0..6 {
        for v in 0..side {
            for u in 0..side {
                if u == 0 || v == 0 || u == n || v == n {
                    let i = (f * per_face + v * side + u) as u32;
                    let key = lattice(f, u, v);
                    if let Some(&j) = boundary.get(&key) {
                        union(&mut parent, i, j);
                    } else {
                        boundary.insert(key, i);
                    }
                }
            }
        }
    }
    let mut regions = std::collections::HashSet::new();
    for i in 0..parent.len() as u32 {
        regions.insert(find(&mut parent, i));
    }
    regions.len() - 1
}

/// `min_{|v| = 1} |A v|^2` by random restarts and coordinate refinement. A matrix of rank
/// at most `m - 1` has a unit null vector `v`, and the nearest such matrix with that null
/// vector is `A (I - v v^T)`, at squared distance `|A v|^2`.
pub fn brute_force_rank_deficient(a: &DMatrix<f64>, rng: &mut ChaCha8Rng) -> f64 {
    let m = a.ncols();
    let cost = |v: &[f64]| {
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut s = 0.0;
        for r in 0..a.nrows() {
            let dot: f64 = (0..m).map(|c| a[(r, c)] * v[c] / nv).sum();
            s += dot * dot;
        }
        s
    };
    let mut best = f64::INFINITY;
    for _ in 0..40 {
        let mut v: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut f = cost(&v);
        let mut step = 0.5;
        while step > 1e-12 {
            let mut improved = false;
            for k in 0..m {
                for sgn in [1.0, -1.0] {
                    let mut w = v.clone();
                    w[k] += sgn * step;
                    let g = cost(&w);
                    if g < f {
                        v = w;
                        f = g;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.min(f);
    }
    best
}
