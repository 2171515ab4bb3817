use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// An ℓ-adic valuation; `Infinite` is reserved for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `min(self, cap)` as a plain integer.
    pub fn capped(self, cap: u32) -> u32 {
        match self {
            Valuation::Finite(v) => v.min(cap),
            Valuation::Infinite => cap,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn ord_ell(x: &BigInt, ell: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let ell = BigInt::from(ell);
    let mut x = x.clone();
    let mut k = 0;
    loop {
        let (q, r) = (&x / &ell, &x % &ell);
        if !r.is_zero() {
            return Valuation::Finite(k);
        }
        x = q;
        k += 1;
    }
}

pub fn ord_ell_u64(mut x: u64, ell: u64) -> Valuation {
    if x == 0 {
        return Valuation::Infinite;
    }
    let mut k = 0;
    while x % ell == 0 {
        x /= ell;
        k += 1;
    }
    Valuation::Finite(k)
}

/// The part of `e` prime to `ell`.
pub fn ell_free_part(e: &BigUint, ell: u64) -> BigUint {
    assert!(!e.is_zero(), "ell_free_part needs a positive argument");
    let ell = BigUint::from(ell);
    let mut e = e.clone();
    while (&e % &ell).is_zero() {
        e /= &ell;
    }
    e
}

pub fn ell_free_part_u128(mut e: u128, ell: u64) -> u128 {
    assert!(e > 0, "ell_free_part needs a positive argument");
    let ell = ell as u128;
    while e % ell == 0 {
        e /= ell;
    }
    e
}

pub fn big_pow(base: u64, exp: u32) -> BigUint {
    let mut r = BigUint::one();
    let b = BigUint::from(base);
    for _ in 0..exp {
        r *= &b;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(ord_ell(&BigInt::from(0), 2), Valuation::Infinite);
        assert_eq!(ord_ell(&BigInt::from(1), 5), Valuation::Finite(0));
        assert_eq!(ord_ell(&BigInt::from(24), 2), Valuation::Finite(3));
        assert_eq!(ord_ell(&BigInt::from(-24), 2), Valuation::Finite(3));
        assert_eq!(ell_free_part(&BigUint::from(8u32), 2), BigUint::from(1u32));
        assert_eq!(ell_free_part(&BigUint::from(40u32), 2), BigUint::from(5u32));
        assert_eq!(ell_free_part(&BigUint::from(63u32), 3), BigUint::from(7u32));
    }

    #[test]
    fn infinity_absorbs() {
        assert_eq!(Valuation::Finite(2) + Valuation::Infinite, Valuation::Infinite);
        assert!(Valuation::Finite(u32::MAX) < Valuation::Infinite);
    }
}
