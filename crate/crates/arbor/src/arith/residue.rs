use std::fmt;

use serde::{Deserialize, Serialize};

use super::modular::{add_mod, inv_mod, mul_mod, pow_mod, sub_mod};
use super::valuation::{ord_ell_u64, Valuation};

/// The ring Z/ℓⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Zmod {
    pub ell: u64,
    pub n: u32,
    pub modulus: u64,
}

impl Zmod {
    pub fn new(ell: u64, n: u32) -> Zmod {
        assert!(n >= 1, "level must be at least 1");
        let modulus = (ell as u128)
            .checked_pow(n)
            .filter(|&m| m < (1u128 << 63))
            .expect("ℓⁿ must stay below 2^63") as u64;
        Zmod { ell, n, modulus }
    }

    pub fn elem(&self, v: i64) -> ResidueInt {
        ResidueInt { value: super::modular::reduce_i64(v, self.modulus), modulus: self.modulus }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.modulus)
    }
    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.modulus)
    }
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.modulus)
    }
    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        sub_mod(0, a, self.modulus)
    }
    pub fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.modulus)
    }
    pub fn is_unit(&self, a: u64) -> bool {
        a % self.ell != 0
    }

    /// Valuation of a residue, with 0 mapped to `Infinite`.
    pub fn ord(&self, a: u64) -> Valuation {
        ord_ell_u64(a % self.modulus, self.ell)
    }

    /// Valuation capped at n.
    pub fn ord_capped(&self, a: u64) -> u32 {
        self.ord(a).capped(self.n)
    }

    /// Number of units, φ(ℓⁿ).
    pub fn unit_count(&self) -> u64 {
        self.modulus / self.ell * (self.ell - 1)
    }

    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.modulus).filter(move |&a| self.is_unit(a))
    }

    pub fn pow(&self, a: u64, e: u128) -> u64 {
        pow_mod(a, e, self.modulus)
    }
}

/// An element of Z/ℓⁿ carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueInt {
    pub value: u64,
    pub modulus: u64,
}

impl ResidueInt {
    pub fn new(value: u64, modulus: u64) -> ResidueInt {
        ResidueInt { value: value % modulus, modulus }
    }

    fn check(&self, other: &ResidueInt) {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
    }
}

impl std::ops::Add for ResidueInt {
    type Output = ResidueInt;
    fn add(self, o: ResidueInt) -> ResidueInt {
        self.check(&o);
        ResidueInt { value: add_mod(self.value, o.value, self.modulus), modulus: self.modulus }
    }
}

impl std::ops::Sub for ResidueInt {
    type Output = ResidueInt;
    fn sub(self, o: ResidueInt) -> ResidueInt {
        self.check(&o);
        ResidueInt { value: sub_mod(self.value, o.value, self.modulus), modulus: self.modulus }
    }
}

impl std::ops::Mul for ResidueInt {
    type Output = ResidueInt;
    fn mul(self, o: ResidueInt) -> ResidueInt {
        self.check(&o);
        ResidueInt { value: mul_mod(self.value, o.value, self.modulus), modulus: self.modulus }
    }
}

impl fmt::Display for ResidueInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}
