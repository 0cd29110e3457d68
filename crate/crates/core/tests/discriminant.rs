mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::brute_force_rank_deficient;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use randci::discriminant::{
    discriminant_distance, fiber_distance, smallest_singular_value, stability_check, tube_fraction, tube_samples,
    Verdict,
};
use randci::kostlan::{c1_norm, sample, search_grid, BasisSet, RealPoint, RngSeed, SearchParams, SectionSystem};
use randci::topology::count_real_roots;
use randci::AmbientSpace;

fn p1(d: usize) -> Arc<BasisSet> {
    Arc::new(BasisSet::uniform(&AmbientSpace::projective(1), 1, d).unwrap())
}

#[test]
fn eckart_young_against_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..100 {
        let m = rng.random_range(1..=4);
        let n = rng.random_range(m..=4);
        let a = DMatrix::from_fn(n, m, |_, _| rng.random_range(-2.0..2.0));
        let sv = smallest_singular_value(&a).powi(2);
        let brute = brute_force_rank_deficient(&a, &mut rng);
        assert!((sv.sqrt() - brute.sqrt()).abs() < 1e-6, "{sv} {brute}");
    }
    let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
    assert!((brute_force_rank_deficient(&a, &mut rng).sqrt() - 1.0).abs() < 1e-9);
}

#[test]
fn product_monomial_against_normal_equations() {
    // Monomial Gram matrix for degree 2 on P^1: <x^a, x^b> = delta_ab a! b! / 3!.
    let gram = DMatrix::<f64>::from_row_slice(3, 3, &[1.0 / 3.0, 0.0, 0.0, 0.0, 1.0 / 6.0, 0.0, 0.0, 0.0, 1.0 / 3.0]);
    // s = X0 X1 in monomial coordinates (X0^2, X0 X1, X1^2); sections singular at (1, 0) are
    // spanned by X1^2.
    let s = nalgebra::DVector::<f64>::from_vec(vec![0.0, 1.0, 0.0]);
    let f = nalgebra::DVector::from_vec(vec![0.0, 0.0, 1.0]);
    let c = (f.transpose() * &gram * &s)[0] / (f.transpose() * &gram * &f)[0];
    let r = &s - &f * c;
    let oracle = (r.transpose() * &gram * &r)[0].sqrt();
    let sp = p1(2);
    let sec = SectionSystem::from_raw_terms(sp, &[vec![(vec![1, 1], 1.0)]]).unwrap();
    let res = fiber_distance(&sec, &RealPoint::on_circle(0.0)).unwrap();
    assert!(res.jet_frame.a0[0].abs() < 1e-15);
    assert!((res.l2_distance - oracle).abs() < 1e-12);
    assert!((res.l2_distance - res.jet_frame.a[(0, 0)].abs()).abs() < 1e-15);
}

#[test]
fn global_minimum_against_dense_scan() {
    let sp = p1(2);
    let sec = SectionSystem::from_raw_terms(sp, &[vec![(vec![1, 1], 1.0)]]).unwrap();
    let f = |t: f64| fiber_distance(&sec, &RealPoint::on_circle(t)).unwrap().l2_distance;
    let steps = 100_000;
    let (mut lo, mut best) = (0.0, f64::INFINITY);
    for k in 0..steps {
        let t = PI * k as f64 / steps as f64;
        let v = f(t);
        if v < best {
            best = v;
            lo = t;
        }
    }
    // golden-section refinement around the best scan point
    let (mut a, mut b) = (lo - PI / steps as f64, lo + PI / steps as f64);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let oracle = f(0.5 * (a + b)).min(best);
    let est = discriminant_distance(&sec, &SearchParams::default()).unwrap();
    assert!(est.distance_upper > 0.0);
    assert!((est.distance_upper - oracle).abs() < 1e-6, "{} {oracle}", est.distance_upper);
}

#[test]
fn fiberwise_inequality_with_slack() {
    let h = SearchParams::default();
    for d in [20usize, 40] {
        let sp = p1(d);
        let grid = search_grid(sp.ambient(), h.spacing(d)).unwrap();
        for t in 0..10u64 {
            let s = sample(&sp, RngSeed::new(21, t, d as u64));
            for x in &grid {
                let r = fiber_distance(&s, x).unwrap();
                assert!(r.l2_distance <= r.jet_distance * (1.0 + 10.0 / d as f64));
            }
        }
    }
}

#[test]
fn small_perturbations_are_safe_and_preserve_roots() {
    let p = SearchParams::default();
    let mut safe = 0;
    for t in 0..100u64 {
        let d = 4 + (t as usize % 17);
        let sp = p1(d);
        let s = sample(&sp, RngSeed::new(60, t, 0));
        let delta = sample(&sp, RngSeed::new(60, t, 1));
        let dist = discriminant_distance(&s, &p).unwrap().distance_upper;
        let eps = 0.5 * dist / c1_norm(&delta, &p).unwrap().value;
        let s2 = s.axpy(eps, &delta).unwrap();
        let rep = stability_check(&s, &s2, &p).unwrap();
        if rep.verdict == Verdict::Safe {
            safe += 1;
            assert_eq!(count_real_roots(&s).unwrap().count, count_real_roots(&s2).unwrap().count, "trial {t}");
        }
    }
    assert_eq!(safe, 100);
}

#[test]
fn tube_fraction_is_monotone_and_nearly_linear() {
    let samples = tube_samples(&p1(8), 10_000, 17, &SearchParams::default()).unwrap();
    let radii: Vec<f64> = (0..=40).map(|k| k as f64 * 0.0025).collect();
    let fr: Vec<usize> = radii.iter().map(|&r| tube_fraction(&samples, r).inside).collect();
    assert_eq!(fr[0], 0);
    assert!(fr.windows(2).all(|w| w[0] <= w[1]));
    let a = tube_fraction(&samples, 0.01).fraction;
    let b = tube_fraction(&samples, 0.005).fraction;
    assert!(b > 0.0);
    let ratio = a / b;
    assert!((1.0..=4.0).contains(&ratio), "ratio {ratio} ({a} vs {b})");
}
