//! Rank-constrained matrix approximation, plain and entrywise weighted.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smallest of the `min(n, m)` singular values.
pub fn smallest_singular_value(a: &DMatrix<f64>) -> f64 {
    if a.ncols() == 1 {
        return a.norm();
    }
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Nearest matrix of rank at most `rank` in Frobenius norm.
pub fn truncate_rank(a: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    if rank == 0 {
        return DMatrix::zeros(a.nrows(), a.ncols());
    }
    let svd = a.clone().svd(true, true);
    let mut sv = svd.singular_values.clone();
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    for &k in order.iter().skip(rank) {
        sv[k] = 0.0;
    }
    let u = svd.u.unwrap();
    let vt = svd.v_t.unwrap();
    &u * DMatrix::from_diagonal(&sv) * &vt
}

pub const ALS_STARTS: usize = 5;
pub const ALS_TOL: f64 = 1e-9;
const ALS_MAX_ITERS: usize = 2000;
const ALS_SEED: u64 = 0x5eed_a15;

fn weighted_cost(a: &DMatrix<f64>, w: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(w.iter()).zip(b.iter()).map(|((x, w), y)| w * (x - y).powi(2)).sum()
}

/// Solves the small weighted least-squares problem `min_z sum_k w_k (t_k - f_k . z)^2`.
fn weighted_ls(f: &DMatrix<f64>, t: &[f64], w: &[f64]) -> Vec<f64> {
    let k = f.ncols();
    let mut g = DMatrix::<f64>::zeros(k, k);
    let mut rhs = nalgebra::DVector::<f64>::zeros(k);
    for (row, (&tk, &wk)) in t.iter().zip(w).enumerate() {
        for p in 0..k {
            rhs[p] += wk * f[(row, p)] * tk;
            for q in 0..k {
                g[(p, q)] += wk * f[(row, p)] * f[(row, q)];
            }
        }
    }
    // tiny ridge keeps rows with all-zero weight well posed
    let scale = g.diagonal().iter().copied().fold(0.0, f64::max).max(1.0);
    for p in 0..k {
        g[(p, p)] += 1e-14 * scale;
    }
    match g.clone().cholesky() {
        Some(c) => c.solve(&rhs).iter().copied().collect(),
        None => g.lu().solve(&rhs).map(|v| v.iter().copied().collect()).unwrap_or_else(|| vec![0.0; k]),
    }
}

/// Minimizes `sum w_rc (A - U V^T)_rc^2` over factors of inner dimension `rank` by
/// alternating least squares. Returns the best cost over the deterministic starts and the
/// minimizing matrix.
pub fn weighted_low_rank(a: &DMatrix<f64>, w: &DMatrix<f64>, rank: usize) -> (f64, DMatrix<f64>) {
    let (n, m) = a.shape();
    if rank == 0 {
        return (weighted_cost(a, w, &DMatrix::zeros(n, m)), DMatrix::zeros(n, m));
    }
    if rank >= n.min(m) {
        return (0.0, a.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ALS_SEED);
    let mut best: Option<(f64, DMatrix<f64>)> = None;
    for start in 0..ALS_STARTS {
        let mut u = if start == 0 {
            // left singular vectors of the scaled matrix; exact when weights are constant per column
            let scaled = a.zip_map(w, |x, w| x * w.sqrt());
            let svd = scaled.svd(true, false);
            let uu = svd.u.unwrap();
            let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
            order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
            DMatrix::from_fn(n, rank, |r, k| uu[(r, order[k])])
        } else {
            DMatrix::from_fn(n, rank, |_, _| rng.random_range(-1.0..1.0))
        };
        let mut v = DMatrix::<f64>::zeros(m, rank);
        let mut prev = f64::INFINITY;
        for _ in 0..ALS_MAX_ITERS {
            for c in 0..m {
                let t: Vec<f64> = (0..n).map(|r| a[(r, c)]).collect();
                let wc: Vec<f64> = (0..n).map(|r| w[(r, c)]).collect();
                let z = weighted_ls(&u, &t, &wc);
                for k in 0..rank {
                    v[(c, k)] = z[k];
                }
            }
            for r in 0..n {
                let t: Vec<f64> = (0..m).map(|c| a[(r, c)]).collect();
                let wr: Vec<f64> = (0..m).map(|c| w[(r, c)]).collect();
                let z = weighted_ls(&v, &t, &wr);
                for k in 0..rank {
                    u[(r, k)] = z[k];
                }
            }
            let cost = weighted_cost(a, w, &(&u * v.transpose()));
            if prev - cost <= ALS_TOL * prev.max(f64::MIN_POSITIVE) {
                prev = cost;
                break;
            }
            prev = cost;
        }
        let b = &u * v.transpose();
        if best.as_ref().is_none_or(|(c, _)| prev < *c) {
            best = Some((prev, b));
        }
    }
    best.unwrap()
}
