//! Tori, elliptic curves and genus-2 Jacobians over finite fields, and the
//! test for whether a reduced point has order prime to ℓ.

pub mod elliptic;
pub mod genus2;
pub mod group;
pub mod tori;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::field::{Field, Fp, Fq, FqElem};
use crate::arith::modular::{inv_mod, isqrt, legendre, mul_mod};
use crate::arith::{factorize, poly, QPoly};
use crate::error::{BadReason, Error, Result};

pub use elliptic::{EcPoint, EllipticGroup, RationalCurve, RationalEcPoint};
pub use genus2::{Genus2, Mumford};
pub use group::{bsgs_annihilator, exact_order, order_coprime, GroupOps};
pub use tori::{ConicGroup, CubicRing, PairGroup};

/// An abelian algebraic group over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicGroupConfig {
    /// x² − d·y² = 1.
    ConicTorus { d: BigRational },
    /// Norm-one elements x + y·t + z·t² of Q[t]/(f), f monic cubic (lowest degree first).
    CubicNormTorus { f: Vec<BigRational> },
    /// xyz = 1.
    SplitTorusPair,
    /// [a₁, a₂, a₃, a₄, a₆].
    Weierstrass { a: [BigRational; 5] },
    /// Jacobian of y² = f(x), f of degree 6 (lowest degree first).
    Genus2Jacobian { f: Vec<BigRational> },
}

/// A point on a genus-2 curve in the degree-6 model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Affine(BigRational, BigRational),
    /// The point at infinity where y/x³ tends to `slope` (a square root of the leading coefficient).
    Infinity { slope: BigRational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RationalPoint {
    /// Tori and affine curve points.
    Affine(Vec<BigRational>),
    /// Identity of an elliptic curve.
    Infinity,
    /// A degree-zero divisor Σ nᵢ[Pᵢ] on a genus-2 curve.
    Divisor(Vec<(i64, CurvePoint)>),
}

/// How good reduction is decided for a scan.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Exclusions {
    /// Denominators plus discriminant-type primes of the config.
    #[default]
    Default,
    /// Exactly these primes (plus primes where reduction is impossible).
    Explicit(Vec<u64>),
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn denominators(pt: &RationalPoint) -> Vec<BigInt> {
    match pt {
        RationalPoint::Affine(c) => c.iter().map(|x| x.denom().clone()).collect(),
        RationalPoint::Infinity => vec![],
        RationalPoint::Divisor(terms) => terms
            .iter()
            .flat_map(|(_, p)| match p {
                CurvePoint::Affine(x, y) => vec![x.denom().clone(), y.denom().clone()],
                CurvePoint::Infinity { slope } => vec![slope.denom().clone()],
            })
            .collect(),
    }
}

/// Reduce a rational mod p; None when p divides the denominator.
pub fn reduce_rat(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = x.numer().mod_floor(&pb).to_u64().unwrap();
    let d = x.denom().mod_floor(&pb).to_u64().unwrap();
    inv_mod(d, p).map(|di| mul_mod(n, di, p))
}

fn prime_divisors(x: &BigInt) -> Vec<u64> {
    if x.is_zero() {
        return vec![];
    }
    factorize(&x.abs().to_biguint().unwrap())
        .into_iter()
        .filter_map(|(q, _)| q.to_u64())
        .collect()
}

fn rat_primes(x: &BigRational) -> Vec<u64> {
    let mut v = prime_divisors(x.numer());
    v.extend(prime_divisors(x.denom()));
    v
}

impl AlgebraicGroupConfig {
    pub fn weierstrass_discriminant(a: &[BigRational; 5]) -> BigRational {
        let [a1, a2, a3, a4, a6] = a;
        let b2 = a1 * a1 + q(4) * a2;
        let b4 = q(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + q(4) * a6;
        let b8 = a1 * a1 * a6 + q(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        -(&b2 * &b2 * &b8) - q(8) * &b4 * &b4 * &b4 - q(27) * &b6 * &b6 + q(9) * &b2 * &b4 * &b6
    }

    /// The discriminant-type quantity whose primes are excluded by default.
    pub fn discriminant(&self) -> BigRational {
        match self {
            AlgebraicGroupConfig::ConicTorus { d } => d.clone(),
            AlgebraicGroupConfig::CubicNormTorus { f } => QPoly::new(f.clone()).discriminant(),
            AlgebraicGroupConfig::SplitTorusPair => BigRational::one(),
            AlgebraicGroupConfig::Weierstrass { a } => Self::weierstrass_discriminant(a),
            AlgebraicGroupConfig::Genus2Jacobian { f } => QPoly::new(f.clone()).discriminant(),
        }
    }

    /// Default bad primes: denominators of the point and primes of the discriminant.
    pub fn default_exclusions(&self, pt: &RationalPoint) -> BTreeSet<u64> {
        let mut s: BTreeSet<u64> = rat_primes(&self.discriminant()).into_iter().collect();
        for d in denominators(pt) {
            s.extend(prime_divisors(&d));
        }
        if let AlgebraicGroupConfig::Genus2Jacobian { f } = self {
            for c in f {
                s.extend(prime_divisors(c.denom()));
            }
            s.extend(prime_divisors(f.last().unwrap().numer()));
        }
        s
    }

    /// Exact check that `pt` lies on the group.
    pub fn validate_point(&self, pt: &RationalPoint) -> Result<()> {
        let bad = |m: &str| Err(Error::Invalid(format!("point not on {self}: {m}")));
        match (self, pt) {
            (AlgebraicGroupConfig::ConicTorus { d }, RationalPoint::Affine(c)) if c.len() == 2 => {
                if &c[0] * &c[0] - d * &c[1] * &c[1] == BigRational::one() {
                    Ok(())
                } else {
                    bad("x² − dy² ≠ 1")
                }
            }
            (AlgebraicGroupConfig::CubicNormTorus { f }, RationalPoint::Affine(c)) if c.len() == 3 => {
                let fpoly = QPoly::new(f.clone());
                let g = QPoly::new(c.clone());
                // N(g(t)) = Res(f, g) for monic f
                if fpoly.resultant(&g) == BigRational::one() {
                    Ok(())
                } else {
                    bad("norm ≠ 1")
                }
            }
            (AlgebraicGroupConfig::SplitTorusPair, RationalPoint::Affine(c)) if c.len() == 3 => {
                if &c[0] * &c[1] * &c[2] == BigRational::one() {
                    Ok(())
                } else {
                    bad("xyz ≠ 1")
                }
            }
            (AlgebraicGroupConfig::Weierstrass { .. }, RationalPoint::Infinity) => Ok(()),
            (AlgebraicGroupConfig::Weierstrass { a }, RationalPoint::Affine(c)) if c.len() == 2 => {
                let (x, y) = (&c[0], &c[1]);
                let [a1, a2, a3, a4, a6] = a;
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if lhs == rhs {
                    Ok(())
                } else {
                    bad("Weierstrass equation fails")
                }
            }
            (AlgebraicGroupConfig::Genus2Jacobian { f }, RationalPoint::Divisor(terms)) => {
                let fpoly = QPoly::new(f.clone());
                if terms.iter().map(|(n, _)| n).sum::<i64>() != 0 {
                    return bad("divisor degree is not zero");
                }
                for (_, p) in terms {
                    match p {
                        CurvePoint::Affine(x, y) => {
                            if y * y != fpoly.eval(x) {
                                return bad("affine point off the curve");
                            }
                        }
                        CurvePoint::Infinity { slope } => {
                            if slope * slope != fpoly.lead() {
                                return bad("slope² must equal the leading coefficient");
                            }
                        }
                    }
                }
                Ok(())
            }
            _ => bad("point shape does not match the group"),
        }
    }
}

/// A reduced group together with the reduced point.
#[derive(Clone, Debug)]
pub enum LocalPoint {
    Conic(ConicGroup, (u64, u64)),
    Cubic(CubicRing, [u64; 3]),
    Pair(PairGroup, (u64, u64)),
    Curve(EllipticGroup, EcPoint),
    Jacobian(Box<Genus2<Fq>>, Mumford<FqElem>, JacobianInterval),
}

/// Bounds on #J(F_p) from the F_p point count and the Weil bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JacobianInterval {
    pub lo: u128,
    pub hi: u128,
}

/// [(√p − 1)⁴, (√p + 1)⁴], rounded inward.
pub fn weil_interval_genus2(p: u64) -> (u128, u128) {
    let p = p as u128;
    let c = p * p + 6 * p + 1;
    let s2 = 16 * p * (p + 1) * (p + 1);
    let fl = isqrt(s2);
    (c.saturating_sub(fl).max(1), c + fl)
}

/// Interval for #J(F_p) given N₁ = #C(F_p) (both points at infinity included).
pub fn jacobian_interval(p: u64, n1: u128) -> (u128, u128) {
    let pi = p as i128;
    let s = pi + 1 - n1 as i128;
    let base = (pi + 1) * (pi + 1) - (pi + 1) * s;
    let t_lo = isqrt((4 * pi * s * s) as u128) as i128 - 4 * pi;
    let t_hi = (s * s).div_euclid(4);
    let (w_lo, w_hi) = weil_interval_genus2(p);
    let lo = ((base + t_lo).max(1) as u128).max(w_lo);
    let hi = ((base + t_hi) as u128).min(w_hi);
    (lo, hi)
}

/// #C(F_p) for y² = f(x) of degree 5 or 6, odd p, including points at infinity.
pub fn count_genus2_points(f: &[u64], p: u64) -> u128 {
    let fp = Fp::new(p);
    // Squares table makes the sweep a lookup.
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for y in 1..p {
        chi[mul_mod(y, y, p) as usize] = 1;
    }
    let mut n: i128 = 0;
    for x in 0..p {
        n += 1 + chi[poly::eval(&fp, f, x) as usize] as i128;
    }
    let at_inf = match poly::deg(f) {
        Some(6) => 1 + legendre(*f.last().unwrap(), p) as i128,
        _ => 1,
    };
    (n + at_inf) as u128
}

/// The imaginary model of y² = f(x) obtained by sending a root r of f to infinity.
struct Transform {
    jac: Genus2<Fq>,
    r: FqElem,
    c1: FqElem,
}

impl Transform {
    /// (x, y) ↦ (X', Y') with x = r + c₁/X', y = c₁³Y'/X'³.
    fn affine(&self, x: FqElem, y: FqElem) -> Option<(FqElem, FqElem)> {
        let k = &self.jac.field;
        let xi = k.inv(k.sub(x, self.r))?;
        let big_x = k.mul(self.c1, xi);
        let c1_2 = k.mul(self.c1, self.c1);
        let big_y = k.mul(k.mul(y, k.pow(xi, 3)), c1_2);
        Some((big_x, big_y))
    }

    fn infinity(&self, slope: FqElem) -> (FqElem, FqElem) {
        let k = &self.jac.field;
        (k.zero(), k.mul(slope, k.mul(self.c1, self.c1)))
    }
}

fn genus2_transform(f: &[u64], p: u64) -> Result<Transform> {
    let fp = Fp::new(p);
    let g = poly::smallest_irreducible_factor(&fp, f);
    let field = Fq::new(p, &g)?;
    let r = field.generator();
    // Taylor coefficients c_k of f at r, by repeated synthetic division.
    let mut cur: Vec<FqElem> = f.iter().map(|&c| field.from_u64(c)).collect();
    let mut taylor = Vec::with_capacity(7);
    while !cur.is_empty() {
        let mut quo = vec![field.zero(); cur.len() - 1];
        let mut acc = field.zero();
        for i in (0..cur.len()).rev() {
            acc = field.add(field.mul(acc, r), cur[i]);
            if i > 0 {
                quo[i - 1] = acc;
            }
        }
        taylor.push(acc);
        cur = quo;
    }
    let c1 = taylor[1];
    // X'^5 + Σ_{k≥2} c_k c₁^{k−2} X'^{6−k}
    let mut model = vec![field.zero(); 6];
    model[5] = field.one();
    for (k, &ck) in taylor.iter().enumerate().skip(2) {
        model[6 - k] = field.mul(ck, field.pow(c1, (k - 2) as u128));
    }
    let model = poly::trim(&field, model);
    Ok(Transform { jac: Genus2::new(field, model), r, c1 })
}

/// Reduce a rational point mod p, applying the given exclusion policy.
pub fn reduce_point_with(
    cfg: &AlgebraicGroupConfig,
    pt: &RationalPoint,
    p: u64,
    excl: &Exclusions,
) -> Result<LocalPoint> {
    let bad = |reason| Err(Error::BadReduction { p, reason });
    match excl {
        Exclusions::Explicit(list) if list.contains(&p) => return bad(BadReason::Excluded),
        _ => {}
    }
    for d in denominators(pt) {
        if (d % BigInt::from(p)).is_zero() {
            return bad(BadReason::Denominator);
        }
    }
    if *excl == Exclusions::Default && rat_primes(&cfg.discriminant()).contains(&p) {
        return bad(BadReason::Discriminant);
    }
    let red = |x: &BigRational| reduce_rat(x, p);
    match (cfg, pt) {
        (AlgebraicGroupConfig::ConicTorus { d }, RationalPoint::Affine(c)) => {
            let Some(dd) = red(d) else { return bad(BadReason::Denominator) };
            let g = ConicGroup { p, d: dd };
            let x = (red(&c[0]).unwrap(), red(&c[1]).unwrap());
            Ok(LocalPoint::Conic(g, x))
        }
        (AlgebraicGroupConfig::CubicNormTorus { f }, RationalPoint::Affine(c)) => {
            let coeffs: Option<Vec<u64>> = f.iter().take(3).map(red).collect();
            let Some(coeffs) = coeffs else { return bad(BadReason::Denominator) };
            let ring = CubicRing { p, c: [coeffs[0], coeffs[1], coeffs[2]] };
            Ok(LocalPoint::Cubic(ring, [red(&c[0]).unwrap(), red(&c[1]).unwrap(), red(&c[2]).unwrap()]))
        }
        (AlgebraicGroupConfig::SplitTorusPair, RationalPoint::Affine(c)) => {
            let (x, y) = (red(&c[0]).unwrap(), red(&c[1]).unwrap());
            if x == 0 || y == 0 {
                return bad(BadReason::Denominator);
            }
            Ok(LocalPoint::Pair(PairGroup { p }, (x, y)))
        }
        (AlgebraicGroupConfig::Weierstrass { a }, _) => {
            let aa: Option<Vec<u64>> = a.iter().map(red).collect();
            let Some(aa) = aa else { return bad(BadReason::Denominator) };
            let disc = AlgebraicGroupConfig::weierstrass_discriminant(a);
            if red(&disc) == Some(0) {
                return bad(BadReason::Discriminant);
            }
            let g = EllipticGroup { p, a: [aa[0], aa[1], aa[2], aa[3], aa[4]] };
            let x = match pt {
                RationalPoint::Infinity => None,
                RationalPoint::Affine(c) => Some((red(&c[0]).unwrap(), red(&c[1]).unwrap())),
                RationalPoint::Divisor(_) => {
                    return Err(Error::Invalid("an elliptic curve point cannot be a divisor".into()))
                }
            };
            Ok(LocalPoint::Curve(g, x))
        }
        (AlgebraicGroupConfig::Genus2Jacobian { f }, RationalPoint::Divisor(terms)) => {
            if p == 2 {
                return bad(BadReason::Discriminant);
            }
            let ff: Option<Vec<u64>> = f.iter().map(red).collect();
            let Some(ff) = ff else { return bad(BadReason::Denominator) };
            let fp = Fp::new(p);
            let ff = poly::trim(&fp, ff);
            if poly::deg(&ff) != Some(6) {
                return bad(BadReason::Discriminant);
            }
            let sq = poly::gcd(&fp, &ff, &poly::derivative(&fp, &ff));
            if poly::deg(&sq) != Some(0) {
                return bad(BadReason::Discriminant);
            }
            let t = genus2_transform(&ff, p)?;
            let k = &t.jac.field;
            let mut acc = t.jac.identity();
            for (n, cp) in terms {
                let (x, y) = match cp {
                    CurvePoint::Affine(x, y) => {
                        let (x, y) = (k.from_u64(red(x).unwrap()), k.from_u64(red(y).unwrap()));
                        t.affine(x, y).ok_or(Error::BadReduction { p, reason: BadReason::Discriminant })?
                    }
                    CurvePoint::Infinity { slope } => t.infinity(k.from_u64(red(slope).unwrap())),
                };
                let d = t.jac.point(x, y);
                let d = if *n < 0 { t.jac.inverse(&d) } else { d };
                acc = t.jac.op(&acc, &t.jac.scalar(&d, n.unsigned_abs() as u128));
            }
            let n1 = count_genus2_points(&ff, p);
            let (lo, hi) = jacobian_interval(p, n1);
            Ok(LocalPoint::Jacobian(Box::new(t.jac), acc, JacobianInterval { lo, hi }))
        }
        _ => Err(Error::Invalid(format!("point shape does not match {cfg}"))),
    }
}

pub fn reduce_point(cfg: &AlgebraicGroupConfig, pt: &RationalPoint, p: u64) -> Result<LocalPoint> {
    reduce_point_with(cfg, pt, p, &Exclusions::Default)
}

macro_rules! dispatch {
    ($self:expr, $g:ident, $x:ident => $body:expr) => {
        match $self {
            LocalPoint::Conic($g, $x) => $body,
            LocalPoint::Cubic($g, $x) => $body,
            LocalPoint::Pair($g, $x) => $body,
            LocalPoint::Curve($g, $x) => $body,
            LocalPoint::Jacobian(g, $x, _) => {
                let $g = g.as_ref();
                $body
            }
        }
    };
}

impl LocalPoint {
    pub fn p(&self) -> u64 {
        match self {
            LocalPoint::Conic(g, _) => g.p,
            LocalPoint::Cubic(g, _) => g.p,
            LocalPoint::Pair(g, _) => g.p,
            LocalPoint::Curve(g, _) => g.p,
            LocalPoint::Jacobian(g, _, _) => g.field.characteristic(),
        }
    }

    /// An annihilator of the point: the torus exponent, or a BSGS search for curves.
    pub fn ambient_exponent(&self) -> Result<u128> {
        let p = self.p() as u128;
        match self {
            LocalPoint::Conic(g, _) => Ok(g.exponent()),
            LocalPoint::Cubic(g, _) => Ok(g.unit_group_order()),
            LocalPoint::Pair(_, _) => Ok(p - 1),
            LocalPoint::Curve(g, x) => {
                let (lo, hi) = g.hasse_interval();
                bsgs_annihilator(g, x, lo, hi)
            }
            LocalPoint::Jacobian(g, x, iv) => bsgs_annihilator(g.as_ref(), x, iv.lo, iv.hi),
        }
    }

    pub fn multiple_is_identity(&self, e: u128) -> bool {
        dispatch!(self, g, x => g.is_identity(&g.scalar(x, e)))
    }

    pub fn is_identity(&self) -> bool {
        dispatch!(self, g, x => g.is_identity(x))
    }

    pub fn bsgs(&self, lo: u128, hi: u128) -> Result<u128> {
        dispatch!(self, g, x => bsgs_annihilator(g, x, lo, hi))
    }

    pub fn order(&self) -> Result<u128> {
        let e = self.ambient_exponent()?;
        Ok(dispatch!(self, g, x => exact_order(g, x, e)))
    }

    /// ℓ ∤ ord(point), decided by the ℓ-free part of an annihilator.
    pub fn order_coprime_to_ell(&self, ell: u64) -> Result<bool> {
        let e = self.ambient_exponent()?;
        Ok(self.order_coprime_with(e, ell))
    }

    pub fn order_coprime_with(&self, e: u128, ell: u64) -> bool {
        dispatch!(self, g, x => order_coprime(g, x, e, ell))
    }
}

fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

pub fn parse_rat_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_rat).collect()
}

impl FromStr for AlgebraicGroupConfig {
    type Err = Error;

    /// `conic:d=-7`, `cubicnorm:1,0,0,-2`, `split-torus-pair`, `weierstrass:0,0,1,-1,0`,
    /// `genus2:4,-8,4,0,4,-8,5` (highest degree first for polynomials).
    fn from_str(s: &str) -> Result<AlgebraicGroupConfig> {
        let s = s.trim();
        if s == "split-torus-pair" || s == "xyz" {
            return Ok(AlgebraicGroupConfig::SplitTorusPair);
        }
        let (kind, rest) =
            s.split_once(':').ok_or_else(|| Error::Parse(format!("unknown group config `{s}`")))?;
        match kind {
            "conic" => {
                let d = rest.strip_prefix("d=").unwrap_or(rest);
                Ok(AlgebraicGroupConfig::ConicTorus { d: parse_rat(d)? })
            }
            "cubicnorm" => {
                let mut c = parse_rat_list(rest)?;
                if c.len() != 4 || !c[0].is_one() {
                    return Err(Error::Parse("cubicnorm needs a monic cubic a3,a2,a1,a0".into()));
                }
                c.reverse();
                Ok(AlgebraicGroupConfig::CubicNormTorus { f: c })
            }
            "weierstrass" => {
                let c = parse_rat_list(rest)?;
                let a: [BigRational; 5] = c
                    .try_into()
                    .map_err(|_| Error::Parse("weierstrass needs a1,a2,a3,a4,a6".into()))?;
                Ok(AlgebraicGroupConfig::Weierstrass { a })
            }
            "genus2" => {
                let mut c = parse_rat_list(rest)?;
                if c.len() != 7 || c[0].is_zero() {
                    return Err(Error::Parse("genus2 needs seven coefficients of a sextic".into()));
                }
                c.reverse();
                Ok(AlgebraicGroupConfig::Genus2Jacobian { f: c })
            }
            _ => Err(Error::Parse(format!("unknown group config `{s}`"))),
        }
    }
}

fn join_desc(c: &[BigRational]) -> String {
    c.iter().rev().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for AlgebraicGroupConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicGroupConfig::ConicTorus { d } => write!(f, "conic:d={d}"),
            AlgebraicGroupConfig::CubicNormTorus { f: c } => write!(f, "cubicnorm:{}", join_desc(c)),
            AlgebraicGroupConfig::SplitTorusPair => f.write_str("split-torus-pair"),
            AlgebraicGroupConfig::Weierstrass { a } => {
                let v: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                write!(f, "weierstrass:{}", v.join(","))
            }
            AlgebraicGroupConfig::Genus2Jacobian { f: c } => write!(f, "genus2:{}", join_desc(c)),
        }
    }
}

impl FromStr for RationalPoint {
    type Err = Error;

    /// `5/3,4/3`, `inf`, or for divisors `inf:-2 - 1,1` (terms `[+|-] point`,
    /// a point being `x,y` or `inf:slope`).
    fn from_str(s: &str) -> Result<RationalPoint> {
        let s = s.trim();
        if s == "inf" || s == "O" {
            return Ok(RationalPoint::Infinity);
        }
        if s.contains("inf:") || s.contains(" - ") || s.contains(" + ") || s.starts_with('[') {
            let mut terms = Vec::new();
            let mut sign = 1i64;
            for tok in s.split_whitespace() {
                match tok {
                    "+" => sign = 1,
                    "-" => sign = -1,
                    _ => {
                        let (mult, body) = match tok.split_once('*') {
                            Some((m, b)) => (m.parse::<i64>().map_err(|_| Error::Parse(format!("bad multiplicity `{m}`")))?, b),
                            None => (1, tok),
                        };
                        let cp = if let Some(sl) = body.strip_prefix("inf:") {
                            CurvePoint::Infinity { slope: parse_rat(sl)? }
                        } else {
                            let c = parse_rat_list(body)?;
                            if c.len() != 2 {
                                return Err(Error::Parse(format!("bad curve point `{body}`")));
                            }
                            CurvePoint::Affine(c[0].clone(), c[1].clone())
                        };
                        terms.push((sign * mult, cp));
                        sign = 1;
                    }
                }
            }
            return Ok(RationalPoint::Divisor(terms));
        }
        Ok(RationalPoint::Affine(parse_rat_list(s)?))
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Infinity => f.write_str("inf"),
            RationalPoint::Affine(c) => {
                let v: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                f.write_str(&v.join(","))
            }
            RationalPoint::Divisor(terms) => {
                for (i, (n, p)) in terms.iter().enumerate() {
                    let body = match p {
                        CurvePoint::Affine(x, y) => format!("{x},{y}"),
                        CurvePoint::Infinity { slope } => format!("inf:{slope}"),
                    };
                    let (sign, m) = if *n < 0 { ("-", -n) } else { ("+", *n) };
                    if i > 0 || sign == "-" {
                        write!(f, "{}{} ", if i > 0 { " " } else { "" }, sign)?;
                    }
                    if m != 1 {
                        write!(f, "{m}*")?;
                    }
                    f.write_str(&body)?;
                }
                Ok(())
            }
        }
    }
}

/// Factored annihilator sizes stay below 2¹²⁸ for every supported scan.
pub fn big_annihilator(e: u128) -> BigUint {
    BigUint::from(e)
}
