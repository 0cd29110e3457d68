//! Search grids on the real locus and local refinement by compass search.

use std::f64::consts::PI;

use crate::ambient::AmbientSpace;
use crate::error::{Error, Result};

use super::point::RealPoint;

/// Grid density and refinement effort for searches over the real locus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchParams {
    /// Grid spacing is `pi / (resolution * max_degree)`.
    pub resolution: usize,
    pub polish_steps: usize,
    /// Number of best grid points refined.
    pub polish_starts: usize,
}

/// Smallest accepted `resolution`.
pub const MIN_RESOLUTION: usize = 8;

impl Default for SearchParams {
    fn default() -> Self {
        Self { resolution: MIN_RESOLUTION, polish_steps: 50, polish_starts: 10 }
    }
}

impl SearchParams {
    pub fn new(resolution: usize, polish_steps: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::InvalidConfig(format!("resolution {resolution} below minimum {MIN_RESOLUTION}")));
        }
        Ok(Self { resolution, polish_steps, ..Self::default() })
    }

    pub fn spacing(&self, max_degree: usize) -> f64 {
        PI / (self.resolution * max_degree.max(1)) as f64
    }
}

/// Points of one factor `RP^n`, `n <= 2`, at geodesic spacing at most `h`.
fn factor_grid(n: usize, h: f64) -> Result<Vec<Vec<f64>>> {
    match n {
        1 => {
            let k = (PI / h).ceil() as usize;
            Ok((0..k)
                .map(|t| {
                    let th = PI * t as f64 / k as f64;
                    vec![th.cos(), th.sin()]
                })
                .collect())
        }
        2 => {
            // upper hemisphere in rings of constant polar angle
            let rings = (PI / 2.0 / h).ceil() as usize;
            let mut pts = vec![vec![0.0, 0.0, 1.0]];
            for r in 1..=rings {
                let phi = PI / 2.0 * r as f64 / rings as f64;
                let count = ((2.0 * PI * phi.sin()) / h).ceil().max(1.0) as usize;
                for t in 0..count {
                    let th = 2.0 * PI * t as f64 / count as f64;
                    pts.push(vec![phi.sin() * th.cos(), phi.sin() * th.sin(), phi.cos()]);
                }
            }
            Ok(pts)
        }
        _ => Err(Error::Unsupported(format!("grid search on RP^{n} (only n <= 2)"))),
    }
}

/// Cartesian product of per-factor grids.
pub fn search_grid(ambient: &AmbientSpace, h: f64) -> Result<Vec<RealPoint>> {
    let mut points: Vec<Vec<Vec<f64>>> = vec![Vec::new()];
    for &n in ambient.factors() {
        let g = factor_grid(n, h)?;
        let mut next = Vec::with_capacity(points.len() * g.len());
        for p in &points {
            for q in &g {
                let mut c = p.clone();
                c.push(q.clone());
                next.push(c);
            }
        }
        points = next;
    }
    Ok(points.into_iter().map(|c| RealPoint::new(ambient, c).expect("unit vectors")).collect())
}

/// Compass search minimizing `f` from `start`, with initial step `h`.
pub fn compass_minimize<F: Fn(&RealPoint) -> f64>(f: &F, start: &RealPoint, h: f64, steps: usize) -> (RealPoint, f64) {
    let mut x = start.clone();
    let mut fx = f(&x);
    let mut step = h;
    for _ in 0..steps {
        let mut improved = false;
        for v in x.tangent_frame() {
            for sign in [1.0, -1.0] {
                let y = x.moved(&v.flat, sign * step);
                let fy = f(&y);
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}

/// Minimizes `f` over the grid, then refines the best `params.polish_starts` points.
pub fn grid_minimize<F: Fn(&RealPoint) -> f64>(
    ambient: &AmbientSpace,
    max_degree: usize,
    params: &SearchParams,
    f: &F,
) -> Result<(RealPoint, f64, f64)> {
    let h = params.spacing(max_degree);
    let grid = search_grid(ambient, h)?;
    let mut vals: Vec<(f64, usize)> = grid.iter().enumerate().map(|(k, p)| (f(p), k)).collect();
    vals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut best = (grid[vals[0].1].clone(), vals[0].0);
    for &(_, k) in vals.iter().take(params.polish_starts) {
        let (p, v) = compass_minimize(f, &grid[k], h, params.polish_steps);
        if v < best.1 {
            best = (p, v);
        }
    }
    Ok((best.0, best.1, h))
}
