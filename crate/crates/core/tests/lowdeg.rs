use std::sync::Arc;

use proptest::prelude::*;
use randci::kostlan::{sample, BasisSet, RngSeed, SearchParams};
use randci::lowdeg::{
    multiply_by_sigma_power, residual_profile, sigma_default, subspace_basis, EllMode, SigmaSection, SubspaceBasis,
};
use randci::topology::count_real_roots;
use randci::AmbientSpace;

fn setup(n: usize, m: usize, d: usize, ell: usize) -> (Arc<BasisSet>, SigmaSection, SubspaceBasis) {
    let x = AmbientSpace::projective(n);
    let sp = Arc::new(BasisSet::uniform(&x, m, d).unwrap());
    let sigma = sigma_default(&x, sp.bundles()).unwrap();
    let sub = subspace_basis(&sp, &sigma, ell).unwrap();
    (sp, sigma, sub)
}

#[test]
fn subspace_is_orthonormal_and_divisible() {
    for (n, m, d, ell) in [(1, 1, 12, 3), (2, 1, 6, 2), (2, 2, 5, 1)] {
        let (_, sigma, sub) = setup(n, m, d, ell);
        let el = sub.elements();
        let per_bundle = randci::kostlan::MonomialBasis::new(&AmbientSpace::projective(n), &[d - 2 * ell]).len();
        assert_eq!(el.len(), m * per_bundle);
        for (a, ea) in el.iter().enumerate() {
            for (b, eb) in el.iter().enumerate() {
                let ip = ea.inner_product(eb).unwrap();
                assert!((ip - if a == b { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
            let q = sub.divide(ea).unwrap();
            let back = multiply_by_sigma_power(&q, &sigma, ell).unwrap();
            assert!(back.sub(ea).unwrap().norm_l2() < 1e-9);
        }
    }
}

#[test]
fn sigma_multiples_keep_real_roots() {
    let x = AmbientSpace::projective(1);
    for t in 0..100u64 {
        let d = 2 + (t as usize % 15);
        let sp = Arc::new(BasisSet::uniform(&x, 1, d).unwrap());
        let sigma = sigma_default(&x, sp.bundles()).unwrap();
        let s = sample(&sp, RngSeed::new(90, t, 0));
        let ell = 1 + (t as usize % 3);
        let prod = multiply_by_sigma_power(&s, &sigma, ell).unwrap();
        assert_eq!(count_real_roots(&prod).unwrap().count, count_real_roots(&s).unwrap().count);
    }
}

#[test]
fn projected_part_and_quotient_share_roots() {
    for t in 0..100u64 {
        let d = 4 + (t as usize % 17);
        let (sp, _, sub) = setup(1, 1, d, 1);
        let s = sample(&sp, RngSeed::new(91, t, 0));
        let (s0, _) = sub.project(&s).unwrap();
        let q = sub.approx(&s).unwrap();
        assert_eq!(count_real_roots(&s0).unwrap().count, count_real_roots(&q).unwrap().count, "trial {t}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_properties(seed in any::<u64>(), d in 2usize..16, ell_frac in 0.0f64..1.0, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let ell = ((d / 2) as f64 * ell_frac).floor() as usize;
        let (sp, _, sub) = setup(1, 1, d, ell);
        let s = sample(&sp, RngSeed::new(seed, 0, 0));
        let t = sample(&sp, RngSeed::new(seed, 1, 0));
        let (s0, perp) = sub.project(&s).unwrap();
        prop_assert!(s0.add(&perp).unwrap().sub(&s).unwrap().norm_l2() < 1e-12);
        let pyth = s0.norm_l2().powi(2) + perp.norm_l2().powi(2) - s.norm_l2().powi(2);
        prop_assert!(pyth.abs() < 1e-10 * s.norm_l2().powi(2).max(1.0));
        for e in sub.elements() {
            prop_assert!(perp.inner_product(&e).unwrap().abs() < 1e-10);
        }
        let (again, rest) = sub.project(&s0).unwrap();
        prop_assert!(again.sub(&s0).unwrap().norm_l2() < 1e-10 && rest.norm_l2() < 1e-10);
        let (z, _) = sub.project(&perp).unwrap();
        prop_assert!(z.norm_l2() < 1e-10);
        let combo = s.scaled(alpha).axpy(beta, &t).unwrap();
        let (c0, _) = sub.project(&combo).unwrap();
        let (t0, _) = sub.project(&t).unwrap();
        let lin = s0.scaled(alpha).axpy(beta, &t0).unwrap();
        prop_assert!(c0.sub(&lin).unwrap().norm_l2() < 1e-10);
    }
}

#[test]
fn one_step_residual_decays() {
    let x = AmbientSpace::projective(1);
    let b = randci::BundleSystem::uniform(&x, 1, 1).unwrap();
    let p = SearchParams::default();
    let prof = residual_profile(&x, &b, 2, EllMode::Fixed(1), &[10, 20, 30, 40], 50, 2024, &p).unwrap();
    let means: Vec<f64> = prof.rows.iter().map(|r| r.mean).collect();
    assert!(means.windows(2).all(|w| w[1] < w[0]), "{means:?}");
    let fit = prof.fit_linear.unwrap();
    assert!(fit.slope < 0.0 && fit.r2 >= 0.9, "{fit:?}");
    for w in prof.rows.windows(3) {
        assert!(w[0].max >= 10.0 * w[2].max, "{} vs {}", w[0].max, w[2].max);
    }
}
