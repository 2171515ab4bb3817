use std::collections::HashSet;

use arbor::arith::factor::{factorize_u128, is_probable_prime};
use arbor::arith::field::{Field, Fp, Fq};
use arbor::arith::modular::{inv_mod, is_prime_u64, mul_mod, pow_mod};
use arbor::arith::poly;
use arbor::arith::{ord_ell, sieve_primes, smith_valuations, to_decimal, Valuation, Zmod};
use num_bigint::BigInt;
use proptest::prelude::*;

fn trial_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Size of the column span of a d×d matrix over Z/ℓⁿ, by closure.
fn span_size(m: &[u64], d: usize, r: &Zmod) -> usize {
    let cols: Vec<Vec<u64>> = (0..d).map(|j| (0..d).map(|i| m[i * d + j] % r.modulus).collect()).collect();
    let mut seen = HashSet::from([vec![0u64; d]]);
    let mut frontier = vec![vec![0u64; d]];
    while let Some(v) = frontier.pop() {
        for c in &cols {
            let w: Vec<u64> = v.iter().zip(c).map(|(&a, &b)| r.add(a, b)).collect();
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen.len()
}

#[test]
fn sieve_matches_trial_division() {
    let primes = sieve_primes(5000);
    let brute: Vec<u64> = (0..=5000).filter(|&n| trial_prime(n)).collect();
    assert_eq!(primes, brute);
    assert!(sieve_primes(1).is_empty());
}

#[test]
fn ord_ell_of_zero_is_infinite() {
    assert_eq!(ord_ell(&BigInt::from(0), 3), Valuation::Infinite);
    assert_eq!(ord_ell(&BigInt::from(-72), 2), Valuation::Finite(3));
}

#[test]
fn decimal_rendering() {
    assert_eq!(to_decimal(&arbor::arith::rat(11, 21), 5), "0.52381");
    assert_eq!(to_decimal(&arbor::arith::rat(1, 3), 3), "0.333");
}

#[test]
fn extension_field_units_form_a_cyclic_group() {
    let f = Fq::new(7, &[3, 1, 1]).unwrap(); // t² + t + 3 irreducible mod 7
    let g = f.generator();
    let mut seen = HashSet::new();
    let mut x = f.one();
    for _ in 0..48 {
        seen.insert(x);
        x = f.mul(x, g);
    }
    assert_eq!(x, f.one());
    assert!(seen.len() <= 48);
    for e in seen {
        assert_eq!(f.mul(e, f.inv(e).unwrap()), f.one());
    }
    assert!(Fq::new(7, &[6, 0, 1]).is_err());
}

proptest! {
    #[test]
    fn primality_agrees(n in 0u64..200_000) {
        prop_assert_eq!(is_prime_u64(n), trial_prime(n));
        prop_assert_eq!(is_probable_prime(n as u128), trial_prime(n));
    }

    #[test]
    fn factorization_multiplies_back(n in 1u128..(1u128 << 62)) {
        let fs = factorize_u128(n);
        let prod: u128 = fs.iter().map(|&(p, e)| p.pow(e)).product();
        prop_assert_eq!(prod, n);
        for (p, _) in fs {
            prop_assert!(is_probable_prime(p));
        }
    }

    #[test]
    fn modular_inverse_and_fermat(a in 1u64..1_000_000, pi in 0usize..100) {
        let p = sieve_primes(1000)[pi + 68];
        if a % p != 0 {
            let i = inv_mod(a, p).unwrap();
            prop_assert_eq!(mul_mod(a, i, p), 1);
            prop_assert_eq!(pow_mod(a, (p - 1) as u128, p), 1);
        }
    }

    #[test]
    fn smith_matches_image_size(
        (ell, n) in prop_oneof![Just((2u64, 1u32)), Just((2, 2)), Just((2, 3)), Just((3, 1)), Just((3, 2)), Just((5, 1))],
        d in 1usize..=3,
        seed in prop::collection::vec(0u64..1000, 9),
    ) {
        let r = Zmod::new(ell, n);
        let m: Vec<u64> = seed[..d * d].iter().map(|x| x % r.modulus).collect();
        let v = smith_valuations(&m, d, &r);
        prop_assert_eq!(v.len(), d);
        prop_assert!(v.windows(2).all(|w| w[0] <= w[1]));
        let log: u32 = d as u32 * n - v.iter().sum::<u32>();
        prop_assert_eq!(span_size(&m, d, &r), ell.pow(log) as usize);
    }

    #[test]
    fn polynomial_division_roundtrip(
        a in prop::collection::vec(0u64..11, 1..8),
        b in prop::collection::vec(0u64..11, 1..5),
    ) {
        let f = Fp::new(11);
        let b = poly::trim(&f, b);
        prop_assume!(!b.is_empty());
        let (q, r) = poly::divrem(&f, &a, &b);
        let back = poly::add(&f, &poly::mul(&f, &q, &b), &r);
        prop_assert_eq!(back, poly::trim(&f, a.clone()));
        prop_assert!(poly::deg(&r).is_none_or(|dr| dr < poly::deg(&b).unwrap()));
        let g = poly::gcd(&f, &a, &b);
        prop_assert!(poly::rem(&f, &b, &g).is_empty());
    }

    #[test]
    fn factor_degrees_sum_to_degree(
        p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
        a in prop::collection::vec(0u64..7, 2..9),
    ) {
        let f = Fp::new(p);
        let mut a: Vec<u64> = a.into_iter().map(|c| c % p).collect();
        *a.last_mut().unwrap() = 1;
        let degs = poly::factor_degrees(&f, &a);
        let total: usize = degs.iter().map(|&(d, m)| d * m as usize).sum();
        prop_assert_eq!(total, a.len() - 1);
        let linear: u32 = degs.iter().filter(|x| x.0 == 1).map(|x| x.1).sum();
        let distinct_roots = poly::roots_by_search(&f, &a).len() as u32;
        prop_assert!(distinct_roots <= linear);
        prop_assert_eq!(poly::is_irreducible(&f, &a), degs == vec![(a.len() - 1, 1)]);
    }
}
