use crate::arith::field::Field;
use crate::arith::poly;

use super::group::GroupOps;

/// A reduced divisor class (u, v): u monic, deg v < deg u ≤ 2, u | v² − f.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mumford<E> {
    pub u: Vec<E>,
    pub v: Vec<E>,
}

/// Jacobian of y² = f(x), f monic of degree 5, odd characteristic.
#[derive(Clone, Debug)]
pub struct Genus2<F: Field> {
    pub field: F,
    pub f: Vec<F::Elem>,
}

impl<F: Field> Genus2<F> {
    pub fn new(field: F, f: Vec<F::Elem>) -> Genus2<F> {
        assert_eq!(poly::deg(&f), Some(5), "imaginary model must be a quintic");
        assert!(field.characteristic() != 2);
        Genus2 { field, f }
    }

    /// The class of [P − ∞] for an affine point P = (x, y).
    pub fn point(&self, x: F::Elem, y: F::Elem) -> Mumford<F::Elem> {
        let k = &self.field;
        debug_assert!(k.is_zero(k.sub(k.mul(y, y), poly::eval(k, &self.f, x))));
        Mumford { u: vec![k.neg(x), k.one()], v: poly::trim(k, vec![y]) }
    }

    pub fn is_valid(&self, d: &Mumford<F::Elem>) -> bool {
        let k = &self.field;
        let du = poly::deg(&d.u).unwrap_or(0);
        if d.u.last() != Some(&k.one()) || du > 2 {
            return false;
        }
        if poly::deg(&d.v).is_some_and(|dv| dv >= du) {
            return false;
        }
        let r = poly::sub(k, &poly::mul(k, &d.v, &d.v), &self.f);
        poly::rem(k, &r, &d.u).is_empty()
    }

    fn reduce(&self, mut u: Vec<F::Elem>, mut v: Vec<F::Elem>) -> Mumford<F::Elem> {
        let k = &self.field;
        v = poly::rem(k, &v, &u);
        while poly::deg(&u).unwrap_or(0) > 2 {
            let num = poly::sub(k, &self.f, &poly::mul(k, &v, &v));
            let u2 = poly::monic(k, &poly::divrem(k, &num, &u).0);
            v = poly::rem(k, &poly::neg(k, &v), &u2);
            u = u2;
        }
        Mumford { u, v }
    }
}

impl<F: Field> GroupOps for Genus2<F> {
    type Elem = Mumford<F::Elem>;

    fn identity(&self) -> Mumford<F::Elem> {
        Mumford { u: vec![self.field.one()], v: Vec::new() }
    }

    fn inverse(&self, d: &Mumford<F::Elem>) -> Mumford<F::Elem> {
        Mumford { u: d.u.clone(), v: poly::neg(&self.field, &d.v) }
    }

    /// Cantor composition followed by reduction.
    fn op(&self, a: &Mumford<F::Elem>, b: &Mumford<F::Elem>) -> Mumford<F::Elem> {
        let k = &self.field;
        if a.u.len() == 1 {
            return b.clone();
        }
        if b.u.len() == 1 {
            return a.clone();
        }
        let (d1, e1, e2) = poly::xgcd_monic(k, &a.u, &b.u);
        let vsum = poly::add(k, &a.v, &b.v);
        let (d, c1, c2) = poly::xgcd_monic(k, &d1, &vsum);
        let (s1, s2, s3) = (poly::mul(k, &c1, &e1), poly::mul(k, &c1, &e2), c2);
        let dd = poly::mul(k, &d, &d);
        let u = poly::divrem(k, &poly::mul(k, &a.u, &b.u), &dd).0;
        let t1 = poly::mul(k, &poly::mul(k, &s1, &a.u), &b.v);
        let t2 = poly::mul(k, &poly::mul(k, &s2, &b.u), &a.v);
        let t3 = poly::mul(k, &s3, &poly::add(k, &poly::mul(k, &a.v, &b.v), &self.f));
        let num = poly::add(k, &poly::add(k, &t1, &t2), &t3);
        let v = poly::divrem(k, &num, &d).0;
        self.reduce(u, v)
    }
}
