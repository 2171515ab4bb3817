//! Prime fields and their small extensions F_p[t]/(m(t)).

use std::fmt::Debug;
use std::hash::Hash;

use super::modular::{add_mod, inv_mod, mul_mod, sub_mod};
use super::poly;
use crate::error::{Error, Result};

pub const MAX_EXT: usize = 6;

pub trait Field {
    type Elem: Copy + Eq + Hash + Debug;

    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, a: u64) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: Self::Elem) -> bool;
    /// Append a canonical encoding of `a` to `out`.
    fn encode(&self, a: Self::Elem, out: &mut Vec<u64>);

    fn from_i64(&self, a: i64) -> Self::Elem {
        let p = self.characteristic();
        self.from_u64(super::modular::reduce_i64(a, p))
    }

    fn pow(&self, mut a: Self::Elem, mut e: u128) -> Self::Elem {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn div(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.mul(a, self.inv(b).expect("division by zero in field"))
    }
}

/// The prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        Fp { p }
    }
}

impl Field for Fp {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_u64(&self, a: u64) -> u64 {
        a % self.p
    }
    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.p)
    }
    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.p)
    }
    #[inline]
    fn neg(&self, a: u64) -> u64 {
        sub_mod(0, a, self.p)
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }
    fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            inv_mod(a, self.p)
        }
    }
    fn is_zero(&self, a: u64) -> bool {
        a == 0
    }
    fn encode(&self, a: u64, out: &mut Vec<u64>) {
        out.push(a);
    }
}

/// F_{p^k} as F_p[t]/(m), m monic irreducible of degree k ≤ 6.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    pub p: u64,
    pub k: usize,
    /// Monic modulus, low-order coefficient first, length k+1.
    pub modulus: Vec<u64>,
}

pub type FqElem = [u64; MAX_EXT];

impl Fq {
    /// Builds the extension, checking irreducibility of the modulus.
    pub fn new(p: u64, modulus: &[u64]) -> Result<Fq> {
        let fp = Fp::new(p);
        let m = poly::trim(&fp, modulus.iter().map(|&c| c % p).collect());
        let k = m.len().saturating_sub(1);
        if k == 0 || k > MAX_EXT {
            return Err(Error::Invalid(format!("extension degree {k} out of range")));
        }
        if m[k] != 1 {
            return Err(Error::Invalid("extension modulus must be monic".into()));
        }
        if !poly::is_irreducible(&fp, &m) {
            return Err(Error::Invalid(format!("modulus {m:?} is reducible mod {p}")));
        }
        Ok(Fq { p, k, modulus: m })
    }

    /// The class of t.
    pub fn generator(&self) -> FqElem {
        let mut e = [0; MAX_EXT];
        if self.k == 1 {
            e[0] = sub_mod(0, self.modulus[0], self.p);
        } else {
            e[1] = 1;
        }
        e
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    pub fn from_coeffs(&self, c: &[u64]) -> FqElem {
        let fp = Fp::new(self.p);
        let r = poly::rem(&fp, &c.iter().map(|&x| x % self.p).collect::<Vec<_>>(), &self.modulus);
        let mut e = [0; MAX_EXT];
        e[..r.len()].copy_from_slice(&r);
        e
    }
}

impl Field for Fq {
    type Elem = FqElem;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> FqElem {
        [0; MAX_EXT]
    }
    fn one(&self) -> FqElem {
        let mut e = [0; MAX_EXT];
        e[0] = 1 % self.p;
        e
    }
    fn from_u64(&self, a: u64) -> FqElem {
        let mut e = [0; MAX_EXT];
        e[0] = a % self.p;
        e
    }
    fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let mut r = [0; MAX_EXT];
        for i in 0..self.k {
            r[i] = add_mod(a[i], b[i], self.p);
        }
        r
    }
    fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        let mut r = [0; MAX_EXT];
        for i in 0..self.k {
            r[i] = sub_mod(a[i], b[i], self.p);
        }
        r
    }
    fn neg(&self, a: FqElem) -> FqElem {
        let mut r = [0; MAX_EXT];
        for i in 0..self.k {
            r[i] = sub_mod(0, a[i], self.p);
        }
        r
    }
    fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let k = self.k;
        let p = self.p as u128;
        if k == 1 {
            let mut r = [0; MAX_EXT];
            r[0] = (a[0] as u128 * b[0] as u128 % p) as u64;
            return r;
        }
        // Accumulate in u128; k ≤ 6 products of (p-1)^2 < 2^128 for p < 2^62.
        let mut acc = [0u128; 2 * MAX_EXT - 1];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                acc[i + j] = (acc[i + j] + a[i] as u128 * b[j] as u128) % p;
            }
        }
        for d in (k..2 * k - 1).rev() {
            let c = acc[d] % p;
            if c == 0 {
                continue;
            }
            acc[d] = 0;
            // t^k = -sum m_i t^i
            for i in 0..k {
                let m = self.modulus[i] as u128;
                if m != 0 {
                    acc[d - k + i] = (acc[d - k + i] + (p - m) * c) % p;
                }
            }
        }
        let mut r = [0; MAX_EXT];
        for i in 0..k {
            r[i] = (acc[i] % p) as u64;
        }
        r
    }
    fn inv(&self, a: FqElem) -> Option<FqElem> {
        let fp = Fp::new(self.p);
        let av = poly::trim(&fp, a[..self.k].to_vec());
        if av.is_empty() {
            return None;
        }
        let (g, s, _) = poly::xgcd(&fp, &av, &self.modulus);
        if g.len() != 1 {
            return None;
        }
        let gi = fp.inv(g[0])?;
        let mut e = [0; MAX_EXT];
        for (i, c) in s.iter().enumerate() {
            e[i] = fp.mul(*c, gi);
        }
        Some(e)
    }
    fn is_zero(&self, a: FqElem) -> bool {
        a[..self.k].iter().all(|&c| c == 0)
    }
    fn encode(&self, a: FqElem, out: &mut Vec<u64>) {
        out.extend_from_slice(&a[..self.k]);
    }
}
