use std::collections::{HashMap, HashSet};

use arbor::arith::{rat, Zmod};
use arbor::matgroups::{
    affine_fixed_fraction, density_level, density_mc, enumerate, haar_sample, image_cardinality,
    semidirect_generators, CartanKind, GroupSpec, ResidueMatrix,
};
use arbor::Error;
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

fn specs() -> Vec<GroupSpec> {
    vec![
        GroupSpec::GL2Full,
        GroupSpec::Cartan(CartanKind::Split),
        GroupSpec::CartanNormalizer(CartanKind::Split),
        GroupSpec::SplitTorusPair,
        GroupSpec::BigTorusS3,
        GroupSpec::ScalarUnits,
    ]
}

fn kernel_size(x: &ResidueMatrix) -> u64 {
    let q = x.ring.modulus;
    let d = x.d;
    let mut k = 0;
    for code in 0..q.pow(d as u32) {
        let v: Vec<u64> = (0..d).map(|i| code / q.pow(i as u32) % q).collect();
        if x.apply(&v).iter().all(|&c| c == 0) {
            k += 1;
        }
    }
    k
}

#[test]
fn enumeration_sizes_match_closed_forms() {
    for spec in specs() {
        for (ell, n) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2), (5, 1)] {
            let v = enumerate(&spec, ell, n).unwrap();
            let distinct: HashSet<&Vec<u64>> = v.iter().map(|m| &m.entries).collect();
            assert_eq!(distinct.len(), v.len(), "{spec} ℓ={ell} n={n}");
            assert_eq!(BigUint::from(v.len()), spec.predicted_order(ell, n).unwrap(), "{spec} ℓ={ell} n={n}");
        }
    }
    let ns = GroupSpec::Cartan(CartanKind::Nonsplit { c: 0, d: 1 });
    assert_eq!(enumerate(&ns, 3, 2).unwrap().len(), 8 * 9);
    assert_eq!(enumerate(&GroupSpec::GSp { g: 2 }, 2, 1).unwrap().len(), 720);
}

#[test]
fn enumerated_groups_are_closed() {
    for spec in specs() {
        let v = enumerate(&spec, 3, 2).unwrap();
        let set: HashSet<&Vec<u64>> = v.iter().map(|m| &m.entries).collect();
        for (i, a) in v.iter().enumerate().step_by(7) {
            let b = &v[(i * 31 + 5) % v.len()];
            assert!(set.contains(&a.mul(b).entries), "{spec}");
        }
    }
}

#[test]
fn intervals_are_nested_and_shrink() {
    for spec in [GroupSpec::GL2Full, GroupSpec::Cartan(CartanKind::Split), GroupSpec::BigTorusS3] {
        for ell in [2u64, 3] {
            let mut prev = density_level(&spec, ell, 1).unwrap();
            for n in 2..=if ell == 2 { 3 } else { 2 } {
                let iv = density_level(&spec, ell, n).unwrap();
                assert!(prev.encloses(&iv.lower, &iv.upper), "{spec} ℓ={ell} n={n}");
                assert!(iv.width() <= prev.width());
                prev = iv;
            }
        }
    }
}

#[test]
fn closed_form_examples_lie_inside_intervals() {
    let iv = density_level(&GroupSpec::ScalarUnits, 2, 6).unwrap();
    assert!(iv.contains(&rat(1, 3)));
    let iv = density_level(&GroupSpec::BigTorusS3, 2, 4).unwrap();
    assert!(iv.contains(&rat(67, 168)));
}

#[test]
fn upper_bound_is_the_affine_fixed_fraction() {
    for (spec, ell, n) in [
        (GroupSpec::GL2Full, 2u64, 1u32),
        (GroupSpec::GL2Full, 3, 1),
        (GroupSpec::Cartan(CartanKind::Split), 3, 2),
        (GroupSpec::BigTorusS3, 2, 2),
    ] {
        let gens = semidirect_generators(&spec, ell, n).unwrap();
        let brute = affine_fixed_fraction(&gens).unwrap();
        assert_eq!(brute, density_level(&spec, ell, n).unwrap().upper, "{spec} ℓ={ell} n={n}");
    }
}

#[test]
fn guard_and_validation_errors() {
    assert!(matches!(
        enumerate(&GroupSpec::GSp { g: 3 }, 3, 2),
        Err(Error::CardinalityGuardExceeded { .. })
    ));
    let reducible = GroupSpec::Cartan(CartanKind::Nonsplit { c: 0, d: -1 });
    assert!(enumerate(&reducible, 5, 1).is_err());
    assert!(density_level(&GroupSpec::GL2Full, 4, 1).is_err());
    for s in ["gl2", "cartan:split", "cartan-normalizer:nonsplit:c=1,d=1", "gsp:2", "bigtorus-s3"] {
        assert_eq!(s.parse::<GroupSpec>().unwrap().to_string(), s);
    }
    assert!("gl3".parse::<GroupSpec>().is_err());
}

#[test]
fn haar_sampling_is_uniform_on_gl2_f3() {
    let elems = enumerate(&GroupSpec::GL2Full, 3, 1).unwrap();
    let mut counts: HashMap<Vec<u64>, u64> = elems.iter().map(|m| (m.entries.clone(), 0)).collect();
    let draws = 48_000u64;
    for seed in 0..draws {
        let m = haar_sample(&GroupSpec::GL2Full, 3, 1, seed).unwrap();
        *counts.get_mut(&m.entries).expect("sample is a group element") += 1;
    }
    let expected = draws as f64 / elems.len() as f64;
    let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 47 degrees of freedom; 99.9th percentile ≈ 82.7.
    assert!(chi2 < 82.7, "chi² = {chi2}");
}

#[test]
fn gsp_samples_are_similitudes() {
    let elems: HashSet<Vec<u64>> =
        enumerate(&GroupSpec::GSp { g: 2 }, 2, 1).unwrap().into_iter().map(|m| m.entries).collect();
    for seed in 0..200 {
        let m = haar_sample(&GroupSpec::GSp { g: 2 }, 2, 1, seed).unwrap();
        assert!(elems.contains(&m.entries));
    }
}

#[test]
fn monte_carlo_tracks_the_exact_level_mean() {
    let (spec, ell, n) = (GroupSpec::GL2Full, 3u64, 1u32);
    let r = Zmod::new(ell, n);
    let elems = enumerate(&spec, ell, n).unwrap();
    let exact: f64 = elems
        .iter()
        .map(|m| (ell as f64).powi(-(r.ord_capped(m.minus_identity().det()) as i32)))
        .sum::<f64>()
        / elems.len() as f64;
    let est = density_mc(&spec, ell, n, 200_000, 7).unwrap();
    assert!((est.mean - exact).abs() < 2.0 * est.half_width, "{} vs {exact}", est.mean);
    let again = density_mc(&spec, ell, n, 200_000, 7).unwrap();
    assert_eq!(est.counts, again.counts);
    assert_eq!(est.counts.iter().sum::<u64>(), 200_000);
    let exact_mean: BigRational = est.exact_mean();
    assert!((arbor::arith::to_f64(&exact_mean) - est.mean).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn image_times_kernel_is_module_size(
        (ell, n) in prop_oneof![Just((2u64, 2u32)), Just((2, 3)), Just((3, 1)), Just((3, 2))],
        entries in prop::collection::vec(0u64..81, 4),
    ) {
        let r = Zmod::new(ell, n);
        let x = ResidueMatrix::new(2, r, entries.iter().map(|e| e % r.modulus).collect());
        let img = image_cardinality(&x);
        prop_assert_eq!(img * BigUint::from(kernel_size(&x)), BigUint::from(r.modulus.pow(2)));
    }

    #[test]
    fn reduction_is_a_homomorphism(
        a in prop::collection::vec(0u64..27, 4),
        b in prop::collection::vec(0u64..27, 4),
    ) {
        let r = Zmod::new(3, 3);
        let x = ResidueMatrix::new(2, r, a);
        let y = ResidueMatrix::new(2, r, b);
        prop_assert_eq!(x.mul(&y).reduce(1), x.reduce(1).mul(&y.reduce(1)));
        prop_assert_eq!(x.mul(&y).det(), r.mul(x.det(), y.det()));
    }
}
