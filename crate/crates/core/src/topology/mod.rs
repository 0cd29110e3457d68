//! Certified topology of real zero loci at desk scale: roots on `RP^1`, components of
//! curves in `RP^2`, and solutions of square systems in `RP^2`.

mod bernstein;
mod curves;
mod system;

pub use bernstein::{count_binary_form_roots, count_interior_roots, BoundedBernstein, SubdivisionStats, MAX_DEPTH};
pub use curves::{analyze_curve, CurveCount, TernaryForm, DEFAULT_BUDGET, MAX_CELL_DEPTH};
pub use system::{sheared_resultant, solve_square_system, SystemCount};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kostlan::{RawPoly, SectionSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Points,
    Curve,
}

/// Measured topology of a real zero locus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologyProfile {
    pub kind: TopologyKind,
    /// Roots, solutions or components.
    pub count: usize,
    pub betti_total: usize,
    pub certified: bool,
    pub budget_spent: SubdivisionStats,
    /// For curves: components on the sphere before antipodal identification.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sphere_components: Option<usize>,
    /// For curves: rotated retries needed before certification.
    pub retries: usize,
}

impl TopologyProfile {
    fn points(count: usize, stats: SubdivisionStats) -> Self {
        Self {
            kind: TopologyKind::Points,
            count,
            betti_total: count,
            certified: true,
            budget_spent: stats,
            sphere_components: None,
            retries: 0,
        }
    }
}

fn require_shape(s: &SectionSystem, factors: &[usize], m: usize) -> Result<()> {
    if s.ambient().factors() != factors || s.num_bundles() != m {
        return Err(Error::Unsupported(format!(
            "expected {m} equation(s) on a space with factors {factors:?}, got {} on {:?}",
            s.num_bundles(),
            s.ambient().factors()
        )));
    }
    Ok(())
}

/// Raw coefficients of bundle `i` as a binary form, `c[k]` multiplying `X0^{d-k} X1^k`.
pub fn binary_form(s: &SectionSystem, i: usize) -> Vec<f64> {
    // basis order on P^1 lists X0^d first, so entry k carries X1^k
    s.raw()[i].clone()
}

pub fn ternary_form(s: &SectionSystem, i: usize) -> TernaryForm {
    let raw = s.raw();
    let basis = s.space().basis(i);
    let terms = basis.entries().iter().zip(&raw[i]).map(|(e, c)| ([e[0], e[1], e[2]], *c)).collect();
    TernaryForm { degree: basis.degrees()[0], terms }
}

/// Exact number of real projective roots of a section on `P^1`.
pub fn count_real_roots(s: &SectionSystem) -> Result<TopologyProfile> {
    require_shape(s, &[1], 1)?;
    let c = binary_form(s, 0);
    let (n, stats) = count_binary_form_roots(&c, &vec![0.0; c.len()])?;
    Ok(TopologyProfile::points(n, stats))
}

/// Rational rotations `(I - A)(I + A)^{-1}` for small skew-symmetric integer `A`, used
/// when a vertex of the subdivision lands on the curve.
fn retry_rotations() -> Vec<[[f64; 3]; 3]> {
    let cayley = |a: f64, b: f64, c: f64| {
        // A = [[0, -c, b], [c, 0, -a], [-b, a, 0]]
        let n = 1.0 + a * a + b * b + c * c;
        [
            [(1.0 + a * a - b * b - c * c) / n, 2.0 * (a * b - c) / n, 2.0 * (a * c + b) / n],
            [2.0 * (a * b + c) / n, (1.0 - a * a + b * b - c * c) / n, 2.0 * (b * c - a) / n],
            [2.0 * (a * c - b) / n, 2.0 * (b * c + a) / n, (1.0 - a * a - b * b + c * c) / n],
        ]
    };
    vec![cayley(0.1, 0.2, 0.3), cayley(-0.3, 0.15, 0.05), cayley(0.25, -0.1, 0.2)]
}

fn rotate_form(p: &TernaryForm, r: &[[f64; 3]; 3]) -> TernaryForm {
    let mut raw = RawPoly::default();
    for (e, c) in &p.terms {
        *raw.terms.entry(e.to_vec()).or_insert(0.0) += c;
    }
    let mats = vec![r.iter().map(|row| row.to_vec()).collect::<Vec<_>>()];
    let x = crate::ambient::AmbientSpace::projective(2);
    let rot = raw.rotated(&x, &mats);
    TernaryForm { degree: p.degree, terms: rot.terms.into_iter().map(|(e, c)| ([e[0], e[1], e[2]], c)).collect() }
}

/// Connected components of the real plane curve of a section on `P^2`.
///
/// When the first subdivision cannot be certified (for instance because the curve passes
/// exactly through an octahedron vertex), the count is retried on rotated copies; the
/// rotated coefficients carry rounding, so such a count refers to a nearby curve.
pub fn curve_components(s: &SectionSystem, budget: usize) -> Result<TopologyProfile> {
    require_shape(s, &[2], 1)?;
    let p = ternary_form(s, 0);
    let mut attempt = analyze_curve(&p, budget);
    let mut retries = 0;
    let mut spent = SubdivisionStats::default();
    for r in retry_rotations() {
        match &attempt {
            Err(Error::NotTransversal) => {}
            _ => break,
        }
        retries += 1;
        attempt = analyze_curve(&rotate_form(&p, &r), budget);
    }
    let c = attempt?;
    spent.merge(c.stats);
    Ok(TopologyProfile {
        kind: TopologyKind::Curve,
        count: c.components,
        betti_total: 2 * c.components,
        certified: true,
        budget_spent: spent,
        sphere_components: Some(c.sphere_components),
        retries,
    })
}

/// Real projective solutions of two equations on `P^2`.
pub fn square_system_solutions(s: &SectionSystem) -> Result<TopologyProfile> {
    require_shape(s, &[2], 2)?;
    let r = solve_square_system(&ternary_form(s, 0), &ternary_form(s, 1))?;
    Ok(TopologyProfile::points(r.solutions, r.stats))
}

/// Dispatches on the shape of the section.
pub fn measure_topology(s: &SectionSystem, budget: usize) -> Result<TopologyProfile> {
    match (s.ambient().factors(), s.num_bundles()) {
        ([1], 1) => count_real_roots(s),
        ([2], 1) => curve_components(s, budget),
        ([2], 2) => square_system_solutions(s),
        (f, m) => Err(Error::Unsupported(format!("topology of {m} equation(s) on factors {f:?}"))),
    }
}

/// Compares a certified profile with a Smith–Thom bound; returns `(maximal, deficit)`.
pub fn is_maximal(profile: &TopologyProfile, bound: &BigInt) -> Result<(bool, BigInt)> {
    if !profile.certified {
        return Err(Error::Uncertified);
    }
    let deficit = bound - BigInt::from(profile.betti_total);
    if deficit < BigInt::from(0) {
        return Err(Error::Numerical(format!("betti total {} exceeds bound {bound}", profile.betti_total)));
    }
    Ok((deficit == BigInt::from(0), deficit))
}
