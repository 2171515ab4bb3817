use arbor::arith::sieve_primes;
use arbor::somos::{
    default_cap, invariant_failures, quartic_invariant, scaling_failures, somos_divides, somos_ec_identity_check,
    somos_oddorder_equivalence, somos_terms, SomosDivisibility,
};
use arbor::Error;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn first_terms() {
    let a = somos_terms(11).unwrap();
    let expect = [1, 1, 1, 1, 2, 3, 7, 23, 59, 314, 1529, 8209];
    assert_eq!(a, expect.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
    assert!(somos_terms(2).is_err());
}

#[test]
fn invariants_hold_to_one_hundred() {
    assert!(invariant_failures(100).unwrap().is_empty());
    assert!(scaling_failures(100).unwrap().is_empty());
    let a = somos_terms(10).unwrap();
    // Perturbing a window breaks the invariant.
    assert!(!quartic_invariant(&a[5], &a[6], &a[7], &(&a[8] + 1)).is_zero());
}

#[test]
fn elliptic_identity() {
    let rows = somos_ec_identity_check(12).unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|e| e.pass));
    assert_eq!(rows[0].multiple, 1);
    assert!(somos_ec_identity_check(13).is_err());
}

#[test]
fn equivalence_with_odd_order() {
    let rep = somos_oddorder_equivalence(10_000).unwrap();
    assert_eq!((rep.dividing, rep.total), (654, 1228));
    assert!(rep.counterexamples.is_empty() && rep.undetermined.is_empty());
    assert!(somos_oddorder_equivalence(20_000).is_err());
}

#[test]
fn divisibility_rejects_composites() {
    assert!(matches!(somos_divides(15, 100), Err(Error::Invalid(_))));
    assert_eq!(somos_divides(2, 16).unwrap(), SomosDivisibility::Divides(4));
    assert_eq!(somos_divides(3, 24).unwrap(), SomosDivisibility::Divides(5));
}

#[test]
fn modular_divisibility_matches_exact_terms() {
    let a = somos_terms(50).unwrap();
    for p in sieve_primes(100) {
        let first = a.iter().position(|t| (t % BigInt::from(p)).is_zero());
        let got = somos_divides(p, default_cap(p)).unwrap();
        match first {
            Some(i) => assert_eq!(got, SomosDivisibility::Divides(i), "p={p}"),
            // No zero through a₅₀ is consistent only with "never" or a later index.
            None => assert!(matches!(got, SomosDivisibility::Never) || matches!(got, SomosDivisibility::Divides(i) if i > 50), "p={p}: {got:?}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn never_means_never(pi in 0usize..300) {
        let p = sieve_primes(2000)[pi];
        if let SomosDivisibility::Never = somos_divides(p, default_cap(p)).unwrap() {
            let a = somos_terms(200).unwrap();
            let pb = BigInt::from(p);
            prop_assert!(a.iter().all(|t| !(t % &pb).is_zero()));
        }
    }
}
