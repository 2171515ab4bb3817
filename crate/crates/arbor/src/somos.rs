//! The Somos-4 sequence, its quartic invariant, and its link to multiples of
//! (0,0) on y² + y = x³ − x.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic_groups::{GroupOps, RationalCurve};
use crate::arith::modular::{add_mod, inv_mod, mul_mod};
use crate::error::{Error, Result};
use crate::redscan::{classify, example, primes_up_to, PrimeStatus};

/// a₀..a_N.
pub fn somos_terms(n: usize) -> Result<Vec<BigInt>> {
    if n < 3 {
        return Err(Error::Invalid("need N ≥ 3".into()));
    }
    let mut a: Vec<BigInt> = vec![BigInt::one(); 4];
    for k in 4..=n {
        let num = &a[k - 1] * &a[k - 3] + &a[k - 2] * &a[k - 2];
        let (q, r) = num.div_rem(&a[k - 4]);
        if !r.is_zero() {
            return Err(Error::NonIntegralTerm(k));
        }
        a.push(q);
    }
    Ok(a)
}

/// a²d² − 4abcd + ac³ + b³d + b²c².
pub fn quartic_invariant(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> BigInt {
    a * a * d * d - 4 * a * b * c * d + a * c * c * c + b * b * b * d + b * b * c * c
}

/// Indices n ≤ n_max at which the invariant fails on a_{n−3}..a_n.
pub fn invariant_failures(n_max: usize) -> Result<Vec<usize>> {
    let a = somos_terms(n_max.max(3))?;
    Ok((3..=n_max).filter(|&n| !quartic_invariant(&a[n - 3], &a[n - 2], &a[n - 1], &a[n]).is_zero()).collect())
}

/// Indices 4 ≤ n ≤ n_max where a_{n−2}·F(a_{n−1..n+2}) ≠ a_{n+2}·F(a_{n−2..n+1}).
pub fn scaling_failures(n_max: usize) -> Result<Vec<usize>> {
    let a = somos_terms(n_max + 2)?;
    Ok((4..=n_max)
        .filter(|&n| {
            let f1 = quartic_invariant(&a[n - 1], &a[n], &a[n + 1], &a[n + 2]);
            let f0 = quartic_invariant(&a[n - 2], &a[n - 1], &a[n], &a[n + 1]);
            &a[n - 2] * f1 != &a[n + 2] * f0
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EcIdentityEntry {
    pub n: usize,
    pub multiple: i64,
    pub pass: bool,
}

pub fn somos_curve() -> RationalCurve {
    let z = BigRational::zero;
    let i = |n: i64| BigRational::from_integer(n.into());
    RationalCurve { a: [z(), z(), i(1), i(-1), z()] }
}

/// Compares [2n − 3](0,0) with the coordinates built from a_{n−1}..a_{n+2}.
pub fn somos_ec_identity_check(n_max: usize) -> Result<Vec<EcIdentityEntry>> {
    if !(2..=12).contains(&n_max) {
        return Err(Error::Invalid("need 2 ≤ n_max ≤ 12".into()));
    }
    let a = somos_terms(n_max + 2)?;
    let e = somos_curve();
    let base = Some((BigRational::zero(), BigRational::zero()));
    let mut out = Vec::new();
    for n in 2..=n_max {
        let k = 2 * n as i64 - 3;
        let pt = e.scalar(&base, k as u128);
        let r = |x: &BigInt| BigRational::from_integer(x.clone());
        let (am, a0, a1, a2) = (r(&a[n - 1]), r(&a[n]), r(&a[n + 1]), r(&a[n + 2]));
        let x = (&a0 * &a0 - &am * &a1) / (&a0 * &a0);
        let y = (&am * &am * &a2 - BigRational::from_integer(2.into()) * &am * &a0 * &a1) / (&a0 * &a0 * &a0);
        out.push(EcIdentityEntry { n, multiple: k, pass: pt == Some((x, y)) });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SomosDivisibility {
    /// First index with p | a_n.
    Divides(usize),
    Never,
    Undetermined,
}

impl SomosDivisibility {
    pub fn divides(&self) -> Option<bool> {
        match self {
            SomosDivisibility::Divides(_) => Some(true),
            SomosDivisibility::Never => Some(false),
            SomosDivisibility::Undetermined => None,
        }
    }
}

/// Runs the recurrence mod p. A window (a, b, c, d) is compared with earlier
/// ones up to the rescaling a_n ↦ λμⁿa_n, under which zero terms are preserved.
pub fn somos_divides(p: u64, cap: usize) -> Result<SomosDivisibility> {
    if p < 2 || !crate::arith::modular::is_prime_u64(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    let mut w = [1u64 % p; 4];
    if w[0] == 0 {
        return Ok(SomosDivisibility::Divides(0));
    }
    let mut seen = HashSet::new();
    for n in 4..cap.max(8) {
        let num = add_mod(mul_mod(w[3], w[1], p), mul_mod(w[2], w[2], p), p);
        let next = mul_mod(num, inv_mod(w[0], p).expect("window has no zero"), p);
        w = [w[1], w[2], w[3], next];
        if next == 0 {
            return Ok(SomosDivisibility::Divides(n));
        }
        let ib = inv_mod(w[1], p).unwrap();
        let ib2 = mul_mod(ib, ib, p);
        let key = (mul_mod(mul_mod(w[2], w[0], p), ib2, p), mul_mod(mul_mod(w[3], mul_mod(w[0], w[0], p), p), mul_mod(ib2, ib, p), p));
        if !seen.insert(key) {
            return Ok(SomosDivisibility::Never);
        }
    }
    Ok(SomosDivisibility::Undetermined)
}

pub fn default_cap(p: u64) -> usize {
    8 * p as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub bound: u64,
    pub total: u64,
    /// Good primes dividing some term.
    pub dividing: u64,
    pub counterexamples: Vec<u64>,
    pub undetermined: Vec<u64>,
}

/// For each good prime p ≤ x of the noncmex scan, p | some a_n must match
/// "(0,0) has odd order mod p".
pub fn somos_oddorder_equivalence(x: u64) -> Result<EquivalenceReport> {
    if x > 10_000 {
        return Err(Error::Invalid("equivalence bound is capped at 10⁴".into()));
    }
    let cfg = example("noncmex")?;
    let rows: Vec<Option<(u64, Option<bool>, bool)>> = primes_up_to(x)
        .par_iter()
        .map(|&p| -> Result<_> {
            let status = classify(&cfg, p)?;
            if status == PrimeStatus::Skipped {
                return Ok(None);
            }
            let d = somos_divides(p, default_cap(p))?.divides();
            Ok(Some((p, d, status == PrimeStatus::Good)))
        })
        .collect::<Result<_>>()?;
    let mut rep = EquivalenceReport { bound: x, total: 0, dividing: 0, counterexamples: vec![], undetermined: vec![] };
    for (p, d, odd) in rows.into_iter().flatten() {
        rep.total += 1;
        match d {
            None => rep.undetermined.push(p),
            Some(d) => {
                if d {
                    rep.dividing += 1;
                }
                if d != odd {
                    rep.counterexamples.push(p);
                }
            }
        }
    }
    Ok(rep)
}
