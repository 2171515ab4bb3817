use crate::arith::modular::{add_mod, inv_mod, isqrt, legendre, mul_mod, sub_mod};

use num_rational::BigRational;
use num_traits::Zero;

use super::group::GroupOps;

/// y² + a₁xy + a₃y = x³ + a₂x² + a₄x + a₆ over F_p; `None` is the point at infinity.
#[derive(Clone, Debug)]
pub struct EllipticGroup {
    pub p: u64,
    /// [a₁, a₂, a₃, a₄, a₆] reduced mod p.
    pub a: [u64; 5],
}

pub type EcPoint = Option<(u64, u64)>;

impl EllipticGroup {
    pub fn contains(&self, pt: &EcPoint) -> bool {
        let Some((x, y)) = *pt else { return true };
        let p = self.p;
        let [a1, a2, a3, a4, a6] = self.a;
        let lhs = add_mod(mul_mod(y, y, p), mul_mod(y, add_mod(mul_mod(a1, x, p), a3, p), p), p);
        let x2 = mul_mod(x, x, p);
        let rhs = [mul_mod(x2, x, p), mul_mod(a2, x2, p), mul_mod(a4, x, p), a6]
            .into_iter()
            .fold(0, |s, t| add_mod(s, t, p));
        lhs == rhs
    }

    /// [p + 1 − ⌊2√p⌋, p + 1 + ⌊2√p⌋].
    pub fn hasse_interval(&self) -> (u128, u128) {
        let p = self.p as u128;
        let w = isqrt(4 * p);
        ((p + 1).saturating_sub(w).max(1), p + 1 + w)
    }

    /// #E(F_p), by sweeping x.
    pub fn count_points(&self) -> u64 {
        let p = self.p;
        let [a1, a2, a3, a4, a6] = self.a;
        let mut n = 1;
        for x in 0..p {
            let x2 = mul_mod(x, x, p);
            let rhs = [mul_mod(x2, x, p), mul_mod(a2, x2, p), mul_mod(a4, x, p), a6]
                .into_iter()
                .fold(0, |s, t| add_mod(s, t, p));
            if p == 2 {
                n += (0..2).filter(|&y| self.contains(&Some((x, y)))).count() as u64;
            } else {
                // (2y + a₁x + a₃)² = (a₁x + a₃)² + 4·rhs
                let b = add_mod(mul_mod(a1, x, p), a3, p);
                let disc = add_mod(mul_mod(b, b, p), mul_mod(4, rhs, p), p);
                n += (1 + legendre(disc, p)) as u64;
            }
        }
        n
    }
}

impl GroupOps for EllipticGroup {
    type Elem = EcPoint;

    fn identity(&self) -> EcPoint {
        None
    }

    fn inverse(&self, pt: &EcPoint) -> EcPoint {
        let (x, y) = (*pt)?;
        let p = self.p;
        let [a1, _, a3, _, _] = self.a;
        Some((x, sub_mod(sub_mod(0, y, p), add_mod(mul_mod(a1, x, p), a3, p), p)))
    }

    fn op(&self, pa: &EcPoint, pb: &EcPoint) -> EcPoint {
        let Some((x1, y1)) = *pa else { return *pb };
        let Some((x2, y2)) = *pb else { return *pa };
        let p = self.p;
        let [a1, a2, a3, a4, _] = self.a;
        let (num, den) = if x1 == x2 {
            let den = add_mod(add_mod(mul_mod(2, y1, p), mul_mod(a1, x1, p), p), a3, p);
            if y1 != y2 || den == 0 {
                // Q = −P (vertical chord or tangent)
                return None;
            }
            let num = sub_mod(
                add_mod(add_mod(mul_mod(3, mul_mod(x1, x1, p), p), mul_mod(mul_mod(2, a2, p), x1, p), p), a4, p),
                mul_mod(a1, y1, p),
                p,
            );
            (num, den)
        } else {
            (sub_mod(y2, y1, p), sub_mod(x2, x1, p))
        };
        let lam = mul_mod(num, inv_mod(den, p).expect("nonzero denominator"), p);
        let nu = sub_mod(y1, mul_mod(lam, x1, p), p);
        let x3 = sub_mod(
            sub_mod(sub_mod(add_mod(mul_mod(lam, lam, p), mul_mod(a1, lam, p), p), a2, p), x1, p),
            x2,
            p,
        );
        let y3 = sub_mod(
            sub_mod(sub_mod(0, mul_mod(add_mod(lam, a1, p), x3, p), p), nu, p),
            a3,
            p,
        );
        Some((x3, y3))
    }
}

/// The same curve over Q, with exact coordinates.
#[derive(Clone, Debug)]
pub struct RationalCurve {
    pub a: [BigRational; 5],
}

pub type RationalEcPoint = Option<(BigRational, BigRational)>;

impl RationalCurve {
    pub fn contains(&self, pt: &RationalEcPoint) -> bool {
        let Some((x, y)) = pt else { return true };
        let [a1, a2, a3, a4, a6] = &self.a;
        y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6
    }
}

impl GroupOps for RationalCurve {
    type Elem = RationalEcPoint;

    fn identity(&self) -> RationalEcPoint {
        None
    }

    fn inverse(&self, pt: &RationalEcPoint) -> RationalEcPoint {
        let (x, y) = pt.as_ref()?;
        let [a1, _, a3, _, _] = &self.a;
        Some((x.clone(), -y - a1 * x - a3))
    }

    fn op(&self, pa: &RationalEcPoint, pb: &RationalEcPoint) -> RationalEcPoint {
        let Some((x1, y1)) = pa else { return pb.clone() };
        let Some((x2, y2)) = pb else { return pa.clone() };
        let [a1, a2, a3, a4, _] = &self.a;
        let two = BigRational::from_integer(2.into());
        let three = BigRational::from_integer(3.into());
        let lam = if x1 == x2 {
            let den = &two * y1 + a1 * x1 + a3;
            if y1 != y2 || den.is_zero() {
                return None;
            }
            (&three * x1 * x1 + &two * a2 * x1 + a4 - a1 * y1) / den
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let nu = y1 - &lam * x1;
        let x3 = &lam * &lam + a1 * &lam - a2 - x1 - x2;
        let y3 = -(&lam + a1) * &x3 - nu - a3;
        Some((x3, y3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic_groups::group::exact_order;

    fn all_points(e: &EllipticGroup) -> Vec<EcPoint> {
        let mut v = vec![None];
        for x in 0..e.p {
            for y in 0..e.p {
                if e.contains(&Some((x, y))) {
                    v.push(Some((x, y)));
                }
            }
        }
        v
    }

    #[test]
    fn small_counts() {
        let e = EllipticGroup { p: 5, a: [0, 0, 1, 4, 0] };
        assert_eq!(e.count_points(), 8);
        assert_eq!(exact_order(&e, &Some((0, 0)), 8), 8);
        let e2 = EllipticGroup { p: 5, a: [0, 0, 0, 0, 3] };
        assert_eq!(e2.count_points(), 6);
    }

    #[test]
    fn group_axioms_char_two_and_three() {
        for (p, a) in [(2u64, [1, 0, 1, 1, 1]), (3, [1, 2, 0, 1, 1]), (7, [1, 3, 2, 5, 4])] {
            let e = EllipticGroup { p, a };
            let pts = all_points(&e);
            assert_eq!(pts.len() as u64, e.count_points());
            for x in &pts {
                assert_eq!(e.op(x, &e.inverse(x)), None);
                for y in &pts {
                    let s = e.op(x, y);
                    assert!(e.contains(&s));
                    assert_eq!(s, e.op(y, x));
                    for z in &pts {
                        assert_eq!(e.op(&s, z), e.op(x, &e.op(y, z)));
                    }
                }
            }
        }
    }
}
