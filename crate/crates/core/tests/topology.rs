mod common;

use std::sync::Arc;

use common::{eigen_root_count, marching_sphere_components};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use randci::intersection::smith_thom_bound;
use randci::kostlan::{sample, BasisSet, RawPoly, RngSeed, SectionSystem};
use randci::topology::{
    count_real_roots, curve_components, measure_topology, square_system_solutions, ternary_form, DEFAULT_BUDGET,
};
use randci::{AmbientSpace, BundleSystem, Error};

fn space(n: usize, m: usize, d: usize) -> Arc<BasisSet> {
    Arc::new(BasisSet::uniform(&AmbientSpace::projective(n), m, d).unwrap())
}

#[test]
fn root_counts_agree_with_eigenvalues() {
    let mut checked = 0;
    for t in 0..120u64 {
        let d = 2 + (t as usize % 19);
        let s = sample(&space(1, 1, d), RngSeed::new(77, t, 0));
        let Some(oracle) = eigen_root_count(&s.raw()[0]) else { continue };
        assert_eq!(count_real_roots(&s).unwrap().count, oracle, "trial {t} degree {d}");
        checked += 1;
        if checked == 100 {
            break;
        }
    }
    assert_eq!(checked, 100);
}

#[test]
fn kostlan_mean_root_count_at_degree_16() {
    let sp = space(1, 1, 16);
    let n = 10_000;
    let counts: Vec<f64> =
        (0..n).map(|t| count_real_roots(&sample(&sp, RngSeed::new(5, t, 0))).unwrap().count as f64).collect();
    let mean = counts.iter().sum::<f64>() / n as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    assert!((mean - 4.0).abs() < 3.0 * se, "mean {mean} se {se}");
}

fn rotation2(theta: f64) -> Vec<Vec<f64>> {
    vec![vec![theta.cos(), -theta.sin()], vec![theta.sin(), theta.cos()]]
}

#[test]
fn root_counts_are_invariant() {
    let x = AmbientSpace::projective(1);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for t in 0..50u64 {
        let d = 3 + (t as usize % 10);
        let sp = space(1, 1, d);
        let s = sample(&sp, RngSeed::new(13, t, 0));
        let base = count_real_roots(&s).unwrap().count;
        let lambda = [-3.0, 0.5, 1e3][t as usize % 3];
        assert_eq!(count_real_roots(&s.scaled(lambda)).unwrap().count, base);
        let r = rotation2(rng.random_range(0.0..std::f64::consts::PI));
        let rotated = RawPoly::from_basis(sp.basis(0), &s.raw()[0]).rotated(&x, &[r]);
        let rs = SectionSystem::from_raw(sp.clone(), vec![rotated.to_basis(sp.basis(0))]).unwrap();
        assert_eq!(count_real_roots(&rs).unwrap().count, base, "trial {t}");
    }
}

#[test]
fn curve_counts_agree_with_marching_reference() {
    for t in 0..50u64 {
        let d = 1 + (t as usize % 4);
        let s = sample(&space(2, 1, d), RngSeed::new(31, t, 0));
        let prof = curve_components(&s, DEFAULT_BUDGET).unwrap();
        let sphere = marching_sphere_components(&ternary_form(&s, 0), 2048);
        let odd = d % 2;
        assert_eq!(prof.count, (sphere + odd) / 2, "trial {t} degree {d}");
        // double cover: ovals lift to pairs, the pseudo-line of an odd curve to one circle
        assert_eq!(prof.sphere_components, Some(2 * prof.count - odd));
    }
}

#[test]
fn smith_thom_holds_on_samples() {
    for (n, d, m) in [(1, 9, 1), (2, 4, 1), (2, 2, 2)] {
        let x = AmbientSpace::projective(n);
        let bound = smith_thom_bound(&x, &BundleSystem::uniform(&x, m, d).unwrap()).unwrap().coeff(0);
        for t in 0..40u64 {
            let s = sample(&space(n, m, d), RngSeed::new(3, t, 0));
            match measure_topology(&s, DEFAULT_BUDGET) {
                Ok(p) => assert!(BigInt::from(p.betti_total) <= bound),
                Err(Error::NotTransversal) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn square_systems() {
    let x = AmbientSpace::projective(2);
    let lines = Arc::new(BasisSet::uniform(&x, 2, 1).unwrap());
    for t in 0..20u64 {
        assert_eq!(square_system_solutions(&sample(&lines, RngSeed::new(4, t, 0))).unwrap().count, 1);
    }
    let mixed = Arc::new(
        BasisSet::new(&x, &BundleSystem::new(&x, vec![vec![1], vec![1]], randci::Powers::Numeric(vec![1, 2])).unwrap())
            .unwrap(),
    );
    let mut seen = [false; 3];
    for t in 0..60u64 {
        let c = square_system_solutions(&sample(&mixed, RngSeed::new(6, t, 0))).unwrap().count;
        assert!(c == 0 || c == 2);
        seen[c] = true;
    }
    assert!(seen[0] && seen[2]);
}

#[test]
fn kostlan_mean_solution_count_for_quartics() {
    let sp = space(2, 2, 4);
    let n = 2_000;
    let counts: Vec<f64> = (0..n)
        .filter_map(|t| square_system_solutions(&sample(&sp, RngSeed::new(8, t, 0))).ok())
        .map(|p| p.count as f64)
        .collect();
    let k = counts.len() as f64;
    assert!(k > 0.99 * n as f64);
    let mean = counts.iter().sum::<f64>() / k;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (k - 1.0);
    let se = (var / k).sqrt();
    assert!((mean - 4.0).abs() < 3.0 * se, "mean {mean} se {se}");
}
