use std::collections::HashMap;
use std::hash::Hash;

use crate::arith::modular::isqrt;
use crate::arith::valuation::ell_free_part_u128;
use crate::error::{Error, Result};

/// A finite abelian group, written additively.
pub trait GroupOps {
    type Elem: Clone + Eq + Hash + std::fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;

    fn double(&self, a: &Self::Elem) -> Self::Elem {
        self.op(a, a)
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    /// e·a by double-and-add.
    fn scalar(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut r = self.identity();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.op(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.double(&b);
            }
        }
        r
    }
}

/// Least e in [lo, hi] with e·x = 0, by baby-step giant-step.
pub fn bsgs_annihilator<G: GroupOps>(g: &G, x: &G::Elem, lo: u128, hi: u128) -> Result<u128> {
    let lo = lo.max(1);
    if hi < lo {
        return Err(Error::NotFound { lo, hi });
    }
    let width = hi - lo + 1;
    let m = (isqrt(width - 1) + 1).max(1);
    // table[−j·x] = j, smallest j kept
    let mut table: HashMap<G::Elem, u128> = HashMap::with_capacity(m as usize);
    let mut jx = g.identity();
    for j in 0..m {
        table.entry(g.inverse(&jx)).or_insert(j);
        jx = g.op(&jx, x);
    }
    let step = jx; // m·x
    let mut r = g.scalar(x, lo);
    let mut base = lo;
    while base <= hi {
        if let Some(&j) = table.get(&r) {
            let e = base + j;
            if e <= hi {
                return Ok(e);
            }
        }
        r = g.op(&r, &step);
        base += m;
    }
    Err(Error::NotFound { lo, hi })
}

/// Whether ℓ ∤ ord(x), given any annihilator e of x.
pub fn order_coprime<G: GroupOps>(g: &G, x: &G::Elem, e: u128, ell: u64) -> bool {
    let m = ell_free_part_u128(e, ell);
    g.is_identity(&g.scalar(x, m))
}

/// Exact order of x given an annihilator, via its factorisation.
pub fn exact_order<G: GroupOps>(g: &G, x: &G::Elem, e: u128) -> u128 {
    let mut ord = e;
    for (q, k) in crate::arith::factorize_u128(e) {
        for _ in 0..k {
            if ord % q == 0 && g.is_identity(&g.scalar(x, ord / q)) {
                ord /= q;
            } else {
                break;
            }
        }
    }
    ord
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Cyclic(u128);
    impl GroupOps for Cyclic {
        type Elem = u128;
        fn identity(&self) -> u128 {
            0
        }
        fn op(&self, a: &u128, b: &u128) -> u128 {
            (a + b) % self.0
        }
        fn inverse(&self, a: &u128) -> u128 {
            (self.0 - a) % self.0
        }
    }

    #[test]
    fn finds_least_multiple() {
        let g = Cyclic(1000);
        assert_eq!(bsgs_annihilator(&g, &0, 1, 10).unwrap(), 1);
        assert_eq!(bsgs_annihilator(&g, &4, 600, 900).unwrap(), 750);
        assert_eq!(bsgs_annihilator(&g, &1, 1, 2000).unwrap(), 1000);
        assert!(bsgs_annihilator(&g, &1, 1001, 1999).is_err());
        assert_eq!(exact_order(&g, &4, 1000), 250);
        assert!(order_coprime(&g, &8, 1000, 2));
        assert!(!order_coprime(&g, &4, 1000, 2));
    }
}
