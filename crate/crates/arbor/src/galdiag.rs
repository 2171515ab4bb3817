//! Checkable fragments of image-size criteria: rational square tests, torsion
//! polynomials, and Frobenius trace/determinant statistics. These report
//! evidence only.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic_groups::{reduce_point, AlgebraicGroupConfig, LocalPoint, RationalPoint};
use crate::arith::{QPoly, Zmod};
use crate::error::{Error, Result};
use crate::matgroups::{enumerate, GroupSpec};
use crate::redscan::primes_up_to;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareTest {
    pub value: String,
    pub is_square: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareTestReport {
    pub entries: Vec<SquareTest>,
}

fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn is_rational_square(x: &BigRational) -> bool {
    is_square_int(x.numer()) && is_square_int(x.denom())
}

pub fn rational_square_tests(values: &[BigRational]) -> SquareTestReport {
    SquareTestReport {
        entries: values.iter().map(|v| SquareTest { value: v.to_string(), is_square: is_rational_square(v) }).collect(),
    }
}

/// Values that must be non-squares for a conic torus x² − dy² = 1 to have full image.
pub fn torus_square_values(d: &BigRational, ell: u64) -> Vec<BigRational> {
    let l = BigRational::from_integer(ell.into());
    if ell == 2 {
        vec![-d.clone(), -(d * BigRational::from_integer(2.into()))]
    } else if ell % 4 == 3 {
        vec![-(l * d)]
    } else {
        vec![]
    }
}

/// −D, 2D, −2D for D the discriminant of the 2-torsion polynomial.
pub fn curve_square_values(a: &[BigRational; 5]) -> Vec<BigRational> {
    let d = two_torsion_discriminant(a);
    let two = BigRational::from_integer(2.into());
    vec![-d.clone(), &two * &d, -(two * d)]
}

fn b_invariants(a: &[BigRational; 5]) -> [BigRational; 4] {
    let [a1, a2, a3, a4, a6] = a;
    let q = |n: i64| BigRational::from_integer(n.into());
    [
        a1 * a1 + q(4) * a2,
        q(2) * a4 + a1 * a3,
        a3 * a3 + q(4) * a6,
        a1 * a1 * a6 + q(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4,
    ]
}

/// (2y + a₁x + a₃)² = 4x³ + b₂x² + 2b₄x + b₆.
pub fn two_torsion_polynomial(a: &[BigRational; 5]) -> QPoly {
    let [b2, b4, b6, _] = b_invariants(a);
    let two = BigRational::from_integer(2.into());
    QPoly::new(vec![b6, two * b4, b2, BigRational::from_integer(4.into())])
}

pub fn two_torsion_discriminant(a: &[BigRational; 5]) -> BigRational {
    two_torsion_polynomial(a).discriminant()
}

/// f_m with ψ_m = f_m (m odd) or ψ_m = ψ₂·f_m (m even).
fn reduced_division_polys(a: &[BigRational; 5], m: usize) -> Vec<QPoly> {
    let [b2, b4, b6, b8] = b_invariants(a);
    let c = |n: i64| BigRational::from_integer(n.into());
    let f2sq = two_torsion_polynomial(a);
    let f2sq2 = f2sq.mul(&f2sq);
    let mut f = vec![
        QPoly::zero(),
        QPoly::from_ints(&[1]),
        QPoly::from_ints(&[1]),
        QPoly::new(vec![b8.clone(), c(3) * &b6, c(3) * &b4, b2.clone(), c(3)]),
        QPoly::new(vec![
            &b4 * &b8 - &b6 * &b6,
            &b2 * &b8 - &b4 * &b6,
            c(10) * &b8,
            c(10) * &b6,
            c(5) * &b4,
            b2.clone(),
            c(2),
        ]),
    ];
    while f.len() <= m {
        let n = f.len();
        let k = n / 2;
        let next = if n % 2 == 1 {
            let t1 = f[k + 2].mul(&f[k].pow(3));
            let t2 = f[k - 1].mul(&f[k + 1].pow(3));
            if k % 2 == 0 {
                f2sq2.mul(&t1).sub(&t2)
            } else {
                t1.sub(&f2sq2.mul(&t2))
            }
        } else {
            let t1 = f[k + 2].mul(&f[k - 1].pow(2));
            let t2 = f[k - 2].mul(&f[k + 1].pow(2));
            f[k].mul(&t1.sub(&t2))
        };
        f.push(next);
    }
    f
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisionPolynomial {
    pub m: usize,
    /// Roots are the x-coordinates of the nonzero m-torsion points.
    #[serde(serialize_with = "ser_poly")]
    pub poly: QPoly,
    /// Monic factor whose roots are x-coordinates of points of exact order m.
    #[serde(serialize_with = "ser_poly")]
    pub primitive: QPoly,
}

fn ser_poly<S: serde::Serializer>(p: &QPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn torsion_x_poly(a: &[BigRational; 5], m: usize, f: &[QPoly]) -> QPoly {
    if m % 2 == 1 {
        f[m].clone()
    } else {
        two_torsion_polynomial(a).mul(&f[m])
    }
}

pub fn torsion_polynomial(a: &[BigRational; 5], m: usize) -> Result<DivisionPolynomial> {
    if m < 2 || m > 16 {
        return Err(Error::Invalid("torsion index must lie in 2..=16".into()));
    }
    let f = reduced_division_polys(a, m);
    let poly = torsion_x_poly(a, m, &f);
    let mut prim = poly.clone();
    for d in 2..m {
        if m % d == 0 {
            // Remove every root of order d exactly once per multiplicity.
            let pd = torsion_x_poly(a, d, &f);
            let g = gcd_q(&prim, &pd);
            if g.degree().is_some_and(|x| x > 0) {
                let (q, r) = prim.divrem(&g);
                debug_assert!(r.is_zero());
                prim = q;
            }
        }
    }
    Ok(DivisionPolynomial { m, poly, primitive: prim.monic() })
}

fn gcd_q(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.divrem(&b).1;
        a = b;
        b = r;
    }
    if a.is_zero() {
        a
    } else {
        a.monic()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConsistentWithSurjective,
    Inconsistent,
    LowSample,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ConsistentWithSurjective => "consistent-with-surjective",
            Verdict::Inconsistent => "inconsistent",
            Verdict::LowSample => "low-sample",
        })
    }
}

pub const TV_THRESHOLD: f64 = 0.05;
pub const LOW_SAMPLE_BOUND: u64 = 100;
pub const MAX_FROBENIUS_BOUND: u64 = 1_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusReport {
    pub curve: String,
    pub ell: u64,
    pub level: u32,
    pub bound: u64,
    pub primes: u64,
    pub max_trace_ratio: f64,
    pub tv_distance: f64,
    pub verdict: Verdict,
    /// (trace mod ℓⁿ, det mod ℓⁿ) → (empirical, reference) frequencies.
    pub classes: BTreeMap<String, (f64, f64)>,
}

/// Trace/determinant class frequencies for GL₂(Z/ℓⁿ), exact counts over the group order.
pub fn gl2_class_distribution(ell: u64, n: u32) -> Result<(BTreeMap<(u64, u64), u64>, u64)> {
    let elems = enumerate(&GroupSpec::GL2Full, ell, n)?;
    let r = Zmod::new(ell, n);
    let mut m = BTreeMap::new();
    for x in &elems {
        let tr = r.add(x.get(0, 0), x.get(1, 1));
        *m.entry((tr, x.det())).or_insert(0) += 1;
    }
    Ok((m, elems.len() as u64))
}

/// a_p = p + 1 − #E(F_p) via a table of squares.
pub fn trace_of_frobenius(a: &[u64; 5], p: u64) -> i64 {
    assert!(p < 1 << 32);
    if p == 2 {
        let e = crate::algebraic_groups::EllipticGroup { p, a: *a };
        return 3 - e.count_points() as i64;
    }
    // p < 2³² here, so products fit in u64.
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for y in 1..p {
        chi[(y * y % p) as usize] = 1;
    }
    let [a1, a2, a3, a4, a6] = *a;
    let mut s: i64 = 0;
    for x in 0..p {
        let rhs = ((x + a2) % p * x % p + a4) % p * x % p + a6;
        let b = (a1 * x + a3) % p;
        let disc = (b * b + 4 * rhs) % p;
        s += chi[disc as usize] as i64;
    }
    -s
}

pub fn frobenius_statistics(a: &[BigRational; 5], ell: u64, n: u32, bound: u64) -> Result<FrobeniusReport> {
    if bound > MAX_FROBENIUS_BOUND {
        return Err(Error::Invalid(format!("bound must be at most {MAX_FROBENIUS_BOUND}")));
    }
    let modulus = Zmod::new(ell, n).modulus;
    if modulus > 16 {
        return Err(Error::Invalid("reference classes are enumerated only for ℓⁿ ≤ 16".into()));
    }
    let cfg = AlgebraicGroupConfig::Weierstrass { a: a.clone() };
    let (reference, order) = gl2_class_distribution(ell, n)?;
    let primes = primes_up_to(bound);
    let traces: Vec<Option<(u64, i64)>> = primes
        .par_iter()
        .map(|&p| {
            if p == ell {
                return None;
            }
            match reduce_point(&cfg, &RationalPoint::Infinity, p) {
                Ok(LocalPoint::Curve(e, _)) => Some((p, trace_of_frobenius(&e.a, p))),
                _ => None,
            }
        })
        .collect();
    let mut counts: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    let mut total = 0u64;
    let mut max_ratio: f64 = 0.0;
    for (p, t) in traces.into_iter().flatten() {
        max_ratio = max_ratio.max(t.unsigned_abs() as f64 / (2.0 * (p as f64).sqrt()));
        let tr = t.rem_euclid(modulus as i64) as u64;
        *counts.entry((tr, p % modulus)).or_insert(0) += 1;
        total += 1;
    }
    let mut classes = BTreeMap::new();
    let mut tv = 0.0;
    let keys: std::collections::BTreeSet<(u64, u64)> = reference.keys().chain(counts.keys()).copied().collect();
    for k in keys {
        let e = *counts.get(&k).unwrap_or(&0) as f64 / total.max(1) as f64;
        let r = *reference.get(&k).unwrap_or(&0) as f64 / order as f64;
        tv += (e - r).abs();
        classes.insert(format!("tr={},det={}", k.0, k.1), (e, r));
    }
    tv /= 2.0;
    let verdict = if bound < LOW_SAMPLE_BOUND {
        Verdict::LowSample
    } else if tv < TV_THRESHOLD {
        Verdict::ConsistentWithSurjective
    } else {
        Verdict::Inconsistent
    };
    Ok(FrobeniusReport {
        curve: cfg.to_string(),
        ell,
        level: n,
        bound,
        primes: total,
        max_trace_ratio: max_ratio,
        tv_distance: tv,
        verdict,
        classes,
    })
}

/// Zero discriminants make a polynomial's square class meaningless; callers get an error.
pub fn nonzero(x: &BigRational) -> Result<&BigRational> {
    if x.is_zero() {
        Err(Error::Invalid("singular model".into()))
    } else {
        Ok(x)
    }
}
