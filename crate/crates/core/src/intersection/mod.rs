//! Exact Chern-class calculus for complete intersections in products of projective
//! spaces.
//!
//! Every intersection number reduces to extracting the coefficient of the top class
//! `H_1^{n_1} ... H_k^{n_k}` in a truncated polynomial ring, so all results are exact
//! integers, or exact integer polynomials in the formal degree `d`.

mod dpoly;
mod ring;

pub(crate) use dpoly::BigIntNumber;
pub use dpoly::DPoly;
pub use ring::CohomologyElement;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::ambient::{AmbientSpace, BundleSystem, Powers};
use crate::error::{Error, Result};

/// Total Chern class of the tangent bundle, `prod_j (1 + H_j)^{n_j + 1}`.
pub fn chern_total(x: &AmbientSpace) -> CohomologyElement {
    let one = CohomologyElement::one(x);
    (0..x.num_factors()).fold(one.clone(), |acc, j| {
        let factor = &one + &CohomologyElement::hyperplane(x, j);
        &acc * &factor.pow(x.factors()[j] + 1)
    })
}

/// Coefficient of the top monomial.
pub fn integrate(x: &AmbientSpace, c: &CohomologyElement) -> DPoly {
    c.coefficient(x.factors())
}

/// `c_1(L_i)` without the tensor power.
pub fn first_chern(x: &AmbientSpace, b: &BundleSystem, i: usize) -> CohomologyElement {
    b.multidegrees()[i].iter().enumerate().fold(CohomologyElement::zero(x), |acc, (j, &a)| {
        &acc + &CohomologyElement::hyperplane(x, j).scale(&DPoly::constant(a as i64))
    })
}

/// Class of the divisor of a section of `L_i^{d_i}` (or `L_i^d`).
fn divisor_class(x: &AmbientSpace, b: &BundleSystem, i: usize) -> CohomologyElement {
    let power = match b.powers() {
        Powers::Symbolic => DPoly::var(),
        Powers::Numeric(p) => DPoly::constant(p[i] as i64),
    };
    first_chern(x, b, i).scale(&power)
}

fn check_codim(x: &AmbientSpace, b: &BundleSystem) -> Result<()> {
    if b.num_bundles() > x.dim() {
        return Err(Error::Overdetermined { m: b.num_bundles(), n: x.dim() });
    }
    Ok(())
}

/// Euler characteristic of the zero locus of the divisors `classes`, computed by the
/// adjunction recursion: each hypersurface divides the running Chern class by
/// `1 + D_i` and multiplies the fundamental class by `D_i`.
fn euler_of_divisors(x: &AmbientSpace, classes: &[CohomologyElement]) -> DPoly {
    if classes.len() > x.dim() {
        // an overdetermined generic intersection is empty
        return DPoly::default();
    }
    let mut chern = chern_total(x);
    let mut fundamental = CohomologyElement::one(x);
    for d in classes {
        chern = &chern * &CohomologyElement::one_plus_inverse(d);
        fundamental = &fundamental * d;
    }
    let q = x.dim() - classes.len();
    integrate(x, &(&chern.graded_part(q) * &fundamental))
}

/// Exact Euler characteristic of the complete intersection `Z_{s_1} ∩ ... ∩ Z_{s_m}`.
pub fn euler_char_exact(x: &AmbientSpace, b: &BundleSystem) -> Result<DPoly> {
    check_codim(x, b)?;
    let classes: Vec<_> = (0..b.num_bundles()).map(|i| divisor_class(x, b, i)).collect();
    Ok(euler_of_divisors(x, &classes))
}

/// Betti numbers `b_0, ..., b_{2n}` of the ambient product.
pub fn ambient_betti(x: &AmbientSpace) -> Vec<u64> {
    let mut poincare = vec![1u64];
    for &n in x.factors() {
        let mut next = vec![0u64; poincare.len() + n];
        for (q, &c) in poincare.iter().enumerate() {
            for e in 0..=n {
                next[q + e] += c;
            }
        }
        poincare = next;
    }
    let mut betti = vec![0u64; 2 * x.dim() + 1];
    for (q, c) in poincare.into_iter().enumerate() {
        betti[2 * q] = c;
    }
    betti
}

/// Betti numbers of the complete intersection (Lefschetz below the middle degree,
/// Poincaré duality above, the middle one recovered from the Euler characteristic).
pub fn betti_exact(x: &AmbientSpace, b: &BundleSystem) -> Result<Vec<DPoly>> {
    let chi = euler_char_exact(x, b)?;
    let q = x.dim() - b.num_bundles();
    let ambient = ambient_betti(x);
    let mut betti = vec![DPoly::default(); 2 * q + 1];
    for i in 0..q {
        betti[i] = DPoly::constant(ambient[i]);
        betti[2 * q - i] = DPoly::constant(ambient[i]);
    }
    let mut others = DPoly::default();
    for (i, bi) in betti.iter().enumerate() {
        if i != q {
            others = if i % 2 == 0 { &others + bi } else { &others - bi };
        }
    }
    let middle = &chi - &others;
    betti[q] = if q % 2 == 0 { middle } else { -middle };
    Ok(betti)
}

/// Total Betti number of the complete intersection.
pub fn total_betti_exact(x: &AmbientSpace, b: &BundleSystem) -> Result<DPoly> {
    Ok(betti_exact(x, b)?.iter().fold(DPoly::default(), |acc, p| &acc + p))
}

/// Smith–Thom upper bound for the total Betti number of the real locus.
pub fn smith_thom_bound(x: &AmbientSpace, b: &BundleSystem) -> Result<DPoly> {
    total_betti_exact(x, b)
}

/// All tuples of `parts` non-negative integers summing to `total`.
pub(crate) fn compositions(total: i64, parts: usize) -> Vec<Vec<usize>> {
    if total < 0 {
        return Vec::new();
    }
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let total = total as usize;
    let mut out = Vec::new();
    let mut cur = vec![0usize; parts];
    fn rec(pos: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in (0..=left).rev() {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
    }
    rec(0, total, &mut cur, &mut out);
    out
}

/// `∫_X prod_i c_1(L_i)^{e_i}` as an exact integer.
fn chern_monomial_integral(x: &AmbientSpace, b: &BundleSystem, exps: &[(usize, usize)]) -> BigInt {
    let prod = exps.iter().fold(CohomologyElement::one(x), |acc, &(i, e)| &acc * &first_chern(x, b, i).pow(e));
    integrate(x, &prod).coeff(0)
}

/// Leading constant `v(L_1, ..., L_m)` of the total Betti number.
pub fn leading_v(x: &AmbientSpace, b: &BundleSystem) -> Result<BigInt> {
    check_codim(x, b)?;
    let (n, m) = (x.dim() as i64, b.num_bundles());
    let mut v = BigInt::zero();
    for comp in compositions(n - m as i64, m) {
        let exps: Vec<_> = comp.iter().enumerate().map(|(i, &e)| (i, e + 1)).collect();
        v += chern_monomial_integral(x, b, &exps);
    }
    Ok(v)
}

/// Number of critical points of the Lefschetz pencil spanned in the `pencil_index`-th
/// coordinate (1-based) on the intersection of the other divisors.
pub fn pencil_crit_count(x: &AmbientSpace, b: &BundleSystem, pencil_index: usize) -> Result<DPoly> {
    check_codim(x, b)?;
    let m = b.num_bundles();
    if pencil_index == 0 || pencil_index > m {
        return Err(Error::PencilIndex { index: pencil_index, m });
    }
    let k = pencil_index - 1;
    let classes: Vec<_> = (0..m).map(|i| divisor_class(x, b, i)).collect();
    let others: Vec<_> = (0..m).filter(|&i| i != k).map(|i| classes[i].clone()).collect();
    let mut doubled = classes.clone();
    doubled.push(classes[k].clone());

    let chi_base = euler_of_divisors(x, &others);
    let chi_full = euler_of_divisors(x, &classes);
    let chi_axis = euler_of_divisors(x, &doubled);

    let codim_parity = (x.dim() - m) % 2;
    let sign = |odd: bool| if odd { DPoly::constant(-1) } else { DPoly::constant(1) };
    // (-1)^{n-m+1} χ(Y_{m-1}) + 2 (-1)^{n-m} χ(Y_m) + (-1)^{n-m+1} χ(Y_m ∩ Z')
    let outer = sign(codim_parity == 0);
    let middle = sign(codim_parity == 1).scale(&BigInt::from(2));
    Ok(&(&(&outer * &chi_base) + &(&middle * &chi_full)) + &(&outer * &chi_axis))
}

/// Leading coefficient of the discriminant degree, as the closed formula gives it (`r_formula`) and as the
/// pencil critical-point count forces it (`r_counted`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminantLeading {
    #[serde(serialize_with = "ser_big")]
    pub r_formula: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub r_counted: BigInt,
}

fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    BigIntNumber(v).serialize(s)
}

/// The closed three-sum formula for `r_k`, evaluated term by term (empty sums are zero).
fn r_formula_term(x: &AmbientSpace, b: &BundleSystem, k: usize) -> BigInt {
    let (n, m) = (x.dim() as i64, b.num_bundles());
    let mut total = BigInt::zero();
    let rest: Vec<usize> = (0..m).filter(|&i| i != k).collect();
    for comp in compositions(n - m as i64 + 1, rest.len()) {
        let exps: Vec<_> = rest.iter().zip(&comp).map(|(&i, &e)| (i, e + 1)).collect();
        total += chern_monomial_integral(x, b, &exps);
    }
    for comp in compositions(n - m as i64, m) {
        let exps: Vec<_> = comp.iter().enumerate().map(|(i, &e)| (i, e + 1)).collect();
        total += chern_monomial_integral(x, b, &exps);
    }
    for comp in compositions(n - m as i64 - 1, m + 1) {
        let extra = comp[m];
        let exps: Vec<_> = (0..m).map(|i| (i, comp[i] + 1 + if i == k { extra + 1 } else { 0 })).collect();
        total += chern_monomial_integral(x, b, &exps);
    }
    total
}

pub fn discriminant_degree_leading(x: &AmbientSpace, b: &BundleSystem) -> Result<DiscriminantLeading> {
    check_codim(x, b)?;
    let sym = b.to_symbolic();
    let m = b.num_bundles();
    let mut crit = DPoly::default();
    for k in 1..=m {
        crit += &pencil_crit_count(x, &sym, k)?;
    }
    let r_formula = (0..m).map(|k| r_formula_term(x, &sym, k)).sum();
    Ok(DiscriminantLeading { r_formula, r_counted: crit.coeff(x.dim()) })
}

/// All invariants of one complete intersection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    pub ambient: AmbientSpace,
    pub bundles: BundleSystem,
    pub euler_poly: DPoly,
    pub betti_vector: Vec<DPoly>,
    pub total_betti_poly: DPoly,
    #[serde(serialize_with = "ser_big")]
    pub v_const: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub r_formula: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub r_counted: BigInt,
    pub smith_thom_bound: DPoly,
}

pub fn invariant_report(x: &AmbientSpace, b: &BundleSystem) -> Result<InvariantReport> {
    let euler_poly = euler_char_exact(x, b)?;
    let betti_vector = betti_exact(x, b)?;
    let total_betti_poly = betti_vector.iter().fold(DPoly::default(), |acc, p| &acc + p);
    let r = discriminant_degree_leading(x, b)?;
    Ok(InvariantReport {
        ambient: x.clone(),
        bundles: b.clone(),
        euler_poly,
        betti_vector,
        smith_thom_bound: total_betti_poly.clone(),
        total_betti_poly,
        v_const: leading_v(x, b)?,
        r_formula: r.r_formula,
        r_counted: r.r_counted,
    })
}

impl std::fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ambient factors    {:?}", self.ambient.factors())?;
        writeln!(f, "multidegrees       {:?}", self.bundles.multidegrees())?;
        match self.bundles.powers() {
            Powers::Symbolic => writeln!(f, "powers             d")?,
            Powers::Numeric(p) => writeln!(f, "powers             {p:?}")?,
        }
        writeln!(f, "euler              {}", self.euler_poly)?;
        let betti: Vec<String> = self.betti_vector.iter().map(ToString::to_string).collect();
        writeln!(f, "betti              [{}]", betti.join(", "))?;
        writeln!(f, "total betti        {}", self.total_betti_poly)?;
        writeln!(f, "v                  {}", self.v_const)?;
        writeln!(f, "r (formula)        {}", self.r_formula)?;
        writeln!(f, "r (pencil count)   {}", self.r_counted)?;
        write!(f, "smith-thom bound   {}", self.smith_thom_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize) -> AmbientSpace {
        AmbientSpace::projective(n)
    }

    fn sym(x: &AmbientSpace, m: usize) -> BundleSystem {
        BundleSystem::symbolic(x, m).unwrap()
    }

    fn poly(c: &[i64]) -> DPoly {
        DPoly::from_i64s(c)
    }

    #[test]
    fn chern_classes_of_small_products() {
        let x = p(1);
        let h = CohomologyElement::hyperplane(&x, 0);
        assert_eq!(chern_total(&x), &CohomologyElement::one(&x) + &h.scale(&poly(&[2])));

        let x = p(2);
        let h = CohomologyElement::hyperplane(&x, 0);
        let expect = &(&CohomologyElement::one(&x) + &h.scale(&poly(&[3]))) + &h.pow(2).scale(&poly(&[3]));
        assert_eq!(chern_total(&x), expect);

        let x = AmbientSpace::new(vec![1, 1]).unwrap();
        let c = chern_total(&x);
        assert_eq!(c.coefficient(&[0, 0]), poly(&[1]));
        assert_eq!(c.coefficient(&[1, 0]), poly(&[2]));
        assert_eq!(c.coefficient(&[0, 1]), poly(&[2]));
        assert_eq!(c.coefficient(&[1, 1]), poly(&[4]));
    }

    #[test]
    fn integration_extracts_top_coefficient() {
        let x = p(2);
        let h = CohomologyElement::hyperplane(&x, 0);
        assert_eq!(integrate(&x, &h.pow(2)), poly(&[1]));
        assert_eq!(integrate(&x, &h), DPoly::default());
        let x = AmbientSpace::new(vec![1, 1]).unwrap();
        let t = CohomologyElement::monomial(&x, vec![1, 1], poly(&[3]));
        assert_eq!(integrate(&x, &t), poly(&[3]));
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(euler_char_exact(&p(2), &sym(&p(2), 1)).unwrap(), poly(&[0, 3, -1]));
        let cubic = BundleSystem::uniform(&p(2), 1, 3).unwrap();
        assert_eq!(euler_char_exact(&p(2), &cubic).unwrap(), poly(&[0]));
        assert_eq!(euler_char_exact(&p(3), &sym(&p(3), 2)).unwrap(), poly(&[0, 0, 4, -2]));
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(total_betti_exact(&p(2), &sym(&p(2), 1)).unwrap(), poly(&[4, -3, 1]));
        let line = BundleSystem::uniform(&p(2), 1, 1).unwrap();
        assert_eq!(total_betti_exact(&p(2), &line).unwrap(), poly(&[2]));
        assert_eq!(total_betti_exact(&p(3), &sym(&p(3), 2)).unwrap(), poly(&[4, 0, -4, 2]));
    }

    #[test]
    fn leading_constants() {
        assert_eq!(leading_v(&p(1), &sym(&p(1), 1)).unwrap(), BigInt::from(1));
        assert_eq!(leading_v(&p(3), &sym(&p(3), 2)).unwrap(), BigInt::from(2));
        let conic = BundleSystem::new(&p(2), vec![vec![2]], Powers::Symbolic).unwrap();
        assert_eq!(leading_v(&p(2), &conic).unwrap(), BigInt::from(4));
    }

    #[test]
    fn pencil_counts() {
        assert_eq!(pencil_crit_count(&p(1), &sym(&p(1), 1), 1).unwrap(), poly(&[-2, 2]));
        assert_eq!(pencil_crit_count(&p(2), &sym(&p(2), 1), 1).unwrap(), poly(&[3, -6, 3]));
        let lines = BundleSystem::uniform(&p(2), 1, 1).unwrap();
        assert_eq!(pencil_crit_count(&p(2), &lines, 1).unwrap(), poly(&[0]));
        assert!(matches!(pencil_crit_count(&p(2), &sym(&p(2), 1), 2), Err(Error::PencilIndex { index: 2, m: 1 })));
    }

    #[test]
    fn discriminant_leading_terms() {
        let r = discriminant_degree_leading(&p(2), &sym(&p(2), 1)).unwrap();
        assert_eq!(r.r_counted, BigInt::from(3));
        assert_eq!(r.r_formula, BigInt::from(2));
        let r = discriminant_degree_leading(&p(1), &sym(&p(1), 1)).unwrap();
        assert_eq!(r.r_counted, BigInt::from(2));
    }

    #[test]
    fn smith_thom_examples() {
        assert_eq!(smith_thom_bound(&p(1), &sym(&p(1), 1)).unwrap(), poly(&[0, 1]));
        assert_eq!(smith_thom_bound(&p(2), &sym(&p(2), 1)).unwrap(), poly(&[4, -3, 1]));
        let conic = BundleSystem::uniform(&p(2), 1, 2).unwrap();
        assert_eq!(smith_thom_bound(&p(2), &conic).unwrap(), poly(&[2]));
    }

    #[test]
    fn overdetermined_systems_are_rejected() {
        let x = p(1);
        let b = BundleSystem::new(&p(2), vec![vec![1], vec![1]], Powers::Symbolic).unwrap();
        assert!(matches!(euler_char_exact(&x, &b), Err(Error::Overdetermined { .. })));
        assert!(BundleSystem::symbolic(&x, 2).is_err());
    }

    #[test]
    fn compositions_enumerate_all_tuples() {
        assert_eq!(compositions(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(compositions(1, 0), Vec::<Vec<usize>>::new());
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
        assert!(compositions(-1, 3).is_empty());
    }

    #[test]
    fn report_json_uses_coefficient_arrays() {
        let rep = invariant_report(&p(2), &sym(&p(2), 1)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["euler_poly"], serde_json::json!([0, 3, -1]));
        assert_eq!(v["total_betti_poly"], serde_json::json!([4, -3, 1]));
        assert_eq!(v["v_const"], serde_json::json!(1));
    }
}
