use arbor::algebraic_groups::{AlgebraicGroupConfig, EllipticGroup};
use arbor::arith::{rat, sieve_primes, QPoly};
use arbor::galdiag::{
    curve_square_values, frobenius_statistics, gl2_class_distribution, is_rational_square, rational_square_tests,
    torsion_polynomial, torus_square_values, trace_of_frobenius, two_torsion_discriminant, two_torsion_polynomial,
    Verdict,
};
use arbor::matgroups::gl_order;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn curve(s: &str) -> [BigRational; 5] {
    match s.parse::<AlgebraicGroupConfig>().unwrap() {
        AlgebraicGroupConfig::Weierstrass { a } => a,
        _ => unreachable!(),
    }
}

fn jordan_j2(m: usize) -> usize {
    let mut v = m * m;
    for p in sieve_primes(m as u64) {
        if m % p as usize == 0 {
            v = v / (p * p) as usize * (p * p - 1) as usize;
        }
    }
    v
}

#[test]
fn reference_targets() {
    let p = torsion_polynomial(&curve("weierstrass:0,0,0,0,3"), 4).unwrap();
    assert_eq!(p.primitive, QPoly::from_ints(&[-72, 0, 0, 60, 0, 0, 1]));
    let non = curve("weierstrass:0,0,1,-1,0");
    assert_eq!(two_torsion_polynomial(&non), QPoly::from_ints(&[1, -4, 0, 4]));
    assert_eq!(two_torsion_discriminant(&non), rat(592, 1));
    let squares = rational_square_tests(&curve_square_values(&non));
    assert!(squares.entries.iter().all(|e| !e.is_square));
}

#[test]
fn torsion_degrees() {
    let a = curve("weierstrass:0,0,1,-1,0");
    for m in 2..=9 {
        let t = torsion_polynomial(&a, m).unwrap();
        let full = if m % 2 == 1 { (m * m - 1) / 2 } else { (m * m + 2) / 2 };
        assert_eq!(t.poly.degree(), Some(full), "m={m}");
        let exact = if m == 2 { 3 } else { jordan_j2(m) / 2 };
        assert_eq!(t.primitive.degree(), Some(exact), "m={m}");
        assert!(t.primitive.lead() == rat(1, 1));
    }
    assert!(torsion_polynomial(&a, 1).is_err());
    assert!(torsion_polynomial(&a, 17).is_err());
}

#[test]
fn rational_torsion_points_are_roots() {
    // y² = x³ + 1: (−1, 0) has order 2, (0, ±1) order 3, (2, ±3) order 6.
    let a = curve("weierstrass:0,0,0,0,1");
    let at = |m: usize, x: i64| torsion_polynomial(&a, m).unwrap().primitive.eval(&rat(x, 1));
    assert!(at(2, -1).is_zero());
    assert!(at(3, 0).is_zero());
    assert!(at(6, 2).is_zero());
    assert!(!at(6, 0).is_zero());
    assert!(!at(3, 2).is_zero());
    let cmr = curve("weierstrass:0,0,0,3,0");
    assert!(torsion_polynomial(&cmr, 2).unwrap().poly.eval(&rat(0, 1)).is_zero());
}

#[test]
fn square_classes() {
    assert!(is_rational_square(&rat(9, 4)));
    assert!(!is_rational_square(&rat(-9, 4)));
    assert!(!is_rational_square(&rat(2, 1)));
    assert_eq!(torus_square_values(&rat(-7, 1), 2), vec![rat(7, 1), rat(14, 1)]);
    assert_eq!(torus_square_values(&rat(1, 1), 3), vec![rat(-3, 1)]);
    assert!(torus_square_values(&rat(1, 1), 5).is_empty());
}

#[test]
fn traces_match_point_counts() {
    for p in sieve_primes(400) {
        for a in [[0u64, 0, 1, p - 1, 0], [0, 0, 0, 3 % p, 0], [1, 0, 1, 2 % p, 5 % p]] {
            let n = EllipticGroup { p, a }.count_points() as i64;
            assert_eq!(trace_of_frobenius(&a, p), p as i64 + 1 - n, "p={p}");
        }
    }
}

#[test]
fn class_distribution_sums_to_group_order() {
    for (ell, n) in [(2u64, 1u32), (2, 2), (3, 1), (2, 4)] {
        let (classes, order) = gl2_class_distribution(ell, n).unwrap();
        assert_eq!(classes.values().sum::<u64>(), order);
        assert_eq!(BigUint::from(order), gl_order(2, n, ell));
    }
}

#[test]
fn frobenius_verdicts() {
    let non = curve("weierstrass:0,0,1,-1,0");
    let rep = frobenius_statistics(&non, 2, 2, 50).unwrap();
    assert_eq!(rep.verdict, Verdict::LowSample);
    let rep = frobenius_statistics(&non, 2, 1, 20_000).unwrap();
    assert_eq!(rep.verdict, Verdict::ConsistentWithSurjective);
    assert!(rep.max_trace_ratio <= 1.0);
    let cm = frobenius_statistics(&curve("weierstrass:0,0,0,3,0"), 2, 1, 20_000).unwrap();
    assert_eq!(cm.verdict, Verdict::Inconsistent);
    assert!(frobenius_statistics(&non, 5, 2, 1_000).is_err());
    assert!(frobenius_statistics(&non, 2, 1, 2_000_000).is_err());
    assert_eq!(serde_json::to_value(Verdict::LowSample).unwrap(), "low-sample");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hasse_bound(pi in 1usize..1200, a4 in 0u64..1000, a6 in 0u64..1000) {
        let p = sieve_primes(10_000)[pi];
        let a = [0, 0, 0, a4 % p, a6 % p];
        let disc = (4 * a[3] % p * a[3] % p * a[3] + 27 * a[4] % p * a[4]) % p;
        prop_assume!(disc != 0);
        let t = trace_of_frobenius(&a, p);
        prop_assert!((t * t) as u64 <= 4 * p);
    }
}
