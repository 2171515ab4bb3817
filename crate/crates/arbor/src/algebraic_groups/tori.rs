use crate::arith::field::Fp;
use crate::arith::modular::{add_mod, legendre, mul_mod, sub_mod};
use crate::arith::poly::factor_degrees;

use super::group::GroupOps;

/// x² − d·y² = 1 over F_p with (x₁x₂ + d·y₁y₂, x₁y₂ + x₂y₁).
#[derive(Clone, Debug)]
pub struct ConicGroup {
    pub p: u64,
    pub d: u64,
}

impl ConicGroup {
    pub fn contains(&self, a: &(u64, u64)) -> bool {
        let p = self.p;
        sub_mod(mul_mod(a.0, a.0, p), mul_mod(self.d, mul_mod(a.1, a.1, p), p), p) == 1 % p
    }

    /// Exponent of the whole torus.
    pub fn exponent(&self) -> u128 {
        let p = self.p as u128;
        if self.p == 2 {
            2
        } else if self.d == 0 {
            2 * p
        } else {
            (p as i128 - legendre(self.d, self.p) as i128) as u128
        }
    }
}

impl GroupOps for ConicGroup {
    type Elem = (u64, u64);

    fn identity(&self) -> (u64, u64) {
        (1 % self.p, 0)
    }

    fn op(&self, a: &(u64, u64), b: &(u64, u64)) -> (u64, u64) {
        let p = self.p;
        (
            add_mod(mul_mod(a.0, b.0, p), mul_mod(self.d, mul_mod(a.1, b.1, p), p), p),
            add_mod(mul_mod(a.0, b.1, p), mul_mod(a.1, b.0, p), p),
        )
    }

    fn inverse(&self, a: &(u64, u64)) -> (u64, u64) {
        (a.0, sub_mod(0, a.1, self.p))
    }
}

/// Units of F_p[t]/(t³ + c₂t² + c₁t + c₀), elements x + y·t + z·t².
#[derive(Clone, Debug)]
pub struct CubicRing {
    pub p: u64,
    /// [c₀, c₁, c₂]
    pub c: [u64; 3],
}

impl CubicRing {
    pub fn mul(&self, a: &[u64; 3], b: &[u64; 3]) -> [u64; 3] {
        let p = self.p;
        let mut w = [0u64; 5];
        for i in 0..3 {
            for j in 0..3 {
                w[i + j] = add_mod(w[i + j], mul_mod(a[i], b[j], p), p);
            }
        }
        // t³ = −c₂t² − c₁t − c₀
        for k in (3..5).rev() {
            let top = w[k];
            w[k] = 0;
            for (i, &ci) in self.c.iter().enumerate() {
                w[k - 3 + i] = sub_mod(w[k - 3 + i], mul_mod(top, ci, p), p);
            }
        }
        [w[0], w[1], w[2]]
    }

    pub fn pow(&self, a: &[u64; 3], mut e: u128) -> [u64; 3] {
        let mut r = [1 % self.p, 0, 0];
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    /// Order of the unit group, from the factorisation pattern of the modulus.
    pub fn unit_group_order(&self) -> u128 {
        let fp = Fp::new(self.p);
        let f = vec![self.c[0], self.c[1], self.c[2], 1];
        let p = self.p as u128;
        factor_degrees(&fp, &f)
            .into_iter()
            .map(|(d, e)| (p.pow(d as u32) - 1) * p.pow(d as u32 * (e - 1)))
            .product()
    }
}

impl GroupOps for CubicRing {
    type Elem = [u64; 3];

    fn identity(&self) -> [u64; 3] {
        [1 % self.p, 0, 0]
    }

    fn op(&self, a: &[u64; 3], b: &[u64; 3]) -> [u64; 3] {
        self.mul(a, b)
    }

    fn inverse(&self, a: &[u64; 3]) -> [u64; 3] {
        self.pow(a, self.unit_group_order() - 1)
    }

    fn scalar(&self, a: &[u64; 3], e: u128) -> [u64; 3] {
        self.pow(a, e)
    }
}

/// (F_p^×)² for the torus xyz = 1, writing (x, y) and z = 1/(xy).
#[derive(Clone, Debug)]
pub struct PairGroup {
    pub p: u64,
}

impl GroupOps for PairGroup {
    type Elem = (u64, u64);

    fn identity(&self) -> (u64, u64) {
        (1 % self.p, 1 % self.p)
    }

    fn op(&self, a: &(u64, u64), b: &(u64, u64)) -> (u64, u64) {
        (mul_mod(a.0, b.0, self.p), mul_mod(a.1, b.1, self.p))
    }

    fn inverse(&self, a: &(u64, u64)) -> (u64, u64) {
        let p = self.p;
        let inv = |x| crate::arith::modular::inv_mod(x, p).expect("torus coordinates are units");
        (inv(a.0), inv(a.1))
    }
}
