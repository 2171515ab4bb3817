//! Symplectic group orders, unipotent/non-eigenvalue-one proportions and the
//! generating-function identity relating them, checked by brute force.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::smith::image_log;
use crate::arith::valuation::big_pow;
use crate::arith::{modular, Zmod};
use crate::densities::gl2_density;
use crate::error::{Error, Result};
use crate::matgroups::enumerate::{gsp_multiplier, pairing};
use crate::matgroups::{density_level, enumerate, ResidueMatrix};
pub use crate::matgroups::{gl_order, sp_order};
use crate::matgroups::{DensityInterval, GroupSpec};

fn r(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Orthogonal decompositions V = E ⊕ W with E ≅ V_r.
pub fn decomposition_count_s(g: usize, rr: usize, n: u32, ell: u64) -> BigRational {
    assert!(rr <= g);
    let v = r(sp_order(g, n, ell)) / (r(sp_order(rr, n, ell)) * r(sp_order(g - rr, n, ell)));
    assert!(v.is_integer(), "S(g, r, n) must be an integer");
    v
}

/// Decompositions into two Lagrangians, as the order quotient.
pub fn lagrangian_count_l(g: usize, n: u32, ell: u64) -> BigRational {
    r(sp_order(g, n, ell)) / (r(gl_order(g, n, ell)) * r(gl_order(g, n, ell)))
}

/// Ordered pairs of complementary Lagrangian lines in F_ℓ², counted directly.
pub fn lagrangian_pairs_brute_g1(ell: u64) -> u64 {
    // Every line in a symplectic plane is Lagrangian; pairs are distinct lines.
    let lines = ell + 1;
    let mut count = 0;
    for e in 0..lines {
        for w in 0..lines {
            if e != w {
                count += 1;
            }
        }
    }
    count
}

/// Nondegenerate planes in F_ℓ^{2g}, each counted once via its symplectic bases.
pub fn symplectic_planes_brute(g: usize, ell: u64) -> u64 {
    let ring = Zmod::new(ell, 1);
    let d = 2 * g;
    let total = ell.pow(d as u32);
    let decode = |mut i: u64| -> Vec<u64> {
        (0..d)
            .map(|_| {
                let x = i % ell;
                i /= ell;
                x
            })
            .collect()
    };
    let vecs: Vec<Vec<u64>> = (0..total).map(decode).collect();
    let mut pairs = 0u64;
    for e in &vecs {
        for f in &vecs {
            if pairing(e, f, g, &ring) == 1 {
                pairs += 1;
            }
        }
    }
    pairs / (ell * (ell * ell - 1))
}

/// Closed form for a_{g,1}^{(m)}.
pub fn a_coeff(g: usize, m_is_one: bool, ell: u64) -> BigRational {
    let mut den = BigUint::one();
    for j in 1..=g as u32 {
        if m_is_one {
            den *= big_pow(ell, 2 * j) - 1u32;
        } else {
            let t = big_pow(ell, j) - 1u32;
            den *= &t * &t;
        }
    }
    let num = if m_is_one { big_pow(ell, (g * g) as u32) } else { BigUint::one() };
    r(num) / r(den)
}

/// Level-1 counts in one multiplier slice of GSp_{2g}(F_ℓ).
#[derive(Clone, Debug, Default, Serialize)]
pub struct SliceCounts {
    pub total: u64,
    /// Every eigenvalue is 1 or the multiplier.
    pub unipotent_like: u64,
    /// 1 is not an eigenvalue.
    pub no_fixed: u64,
    /// Σ over the unipotent-like set of ℓ^(−ε(x)).
    #[serde(serialize_with = "crate::matgroups::ser_rat")]
    pub eps_sum: BigRational,
}

fn is_zero_matrix(m: &ResidueMatrix) -> bool {
    m.entries.iter().all(|&x| x == 0)
}

/// ((x − 1)(x − m))^d ≡ 0 mod ℓ, i.e. every eigenvalue mod ℓ lies in {1, m}.
fn eigen_in_one_m(x: &ResidueMatrix, m: u64) -> bool {
    let x1 = x.reduce(1);
    let ring = x1.ring;
    let a = x1.minus_identity();
    let mut b = x1.clone();
    for i in 0..x1.d {
        let v = b.entries[i * x1.d + i];
        b.entries[i * x1.d + i] = ring.sub(v, m % ring.ell);
    }
    let p = a.mul(&b);
    let mut acc = ResidueMatrix::identity(x1.d, ring);
    for _ in 0..x1.d {
        acc = acc.mul(&p);
    }
    is_zero_matrix(&acc)
}

/// ε(x): the least ord det(x̃ − 1) over ℓ-adic lifts, attained by lifting each
/// elementary divisor of x − 1 that vanishes mod ℓⁿ to one of valuation exactly n.
pub fn epsilon(x: &ResidueMatrix) -> u32 {
    x.d as u32 * x.ring.n - image_log(&x.minus_identity().entries, x.d, &x.ring)
}

/// Per-multiplier counts over GSp_{2g}(Z/ℓⁿ), by enumeration.
pub fn slice_counts(g: usize, n: u32, ell: u64) -> Result<BTreeMap<u64, SliceCounts>> {
    let elems = enumerate(&GroupSpec::GSp { g }, ell, n)?;
    let mut out: BTreeMap<u64, SliceCounts> = BTreeMap::new();
    for x in &elems {
        let m = gsp_multiplier(x).expect("enumerated element is a similitude");
        let e = out.entry(m).or_default();
        e.total += 1;
        if eigen_in_one_m(x, m) {
            e.unipotent_like += 1;
            e.eps_sum += BigRational::new(BigInt::one(), BigInt::from(big_pow(ell, epsilon(x))));
        }
        if x.reduce(1).is_invertible() && x.reduce(1).minus_identity().is_invertible() {
            e.no_fixed += 1;
        }
    }
    Ok(out)
}

/// The representative multiplier used for the m ≠ 1 class.
pub fn nontrivial_multiplier(ell: u64) -> Result<u64> {
    if ell == 2 {
        Err(Error::Invalid("F_2 has no multiplier other than 1".into()))
    } else {
        Ok(2)
    }
}

/// Brute-force (a, b, d) at level n for one multiplier class.
#[derive(Clone, Debug, Serialize)]
pub struct BruteCoeffs {
    pub g: usize,
    pub n: u32,
    pub m: u64,
    #[serde(serialize_with = "crate::matgroups::ser_rat")]
    pub a: BigRational,
    #[serde(serialize_with = "crate::matgroups::ser_rat")]
    pub b: BigRational,
    #[serde(serialize_with = "crate::matgroups::ser_rat")]
    pub d: BigRational,
}

pub fn brute_coeffs(g: usize, n: u32, m_is_one: bool, ell: u64) -> Result<BruteCoeffs> {
    let m = if m_is_one { 1 } else { nontrivial_multiplier(ell)? };
    if g == 0 {
        let one = BigRational::one();
        return Ok(BruteCoeffs { g, n, m, a: one.clone(), b: one.clone(), d: one });
    }
    let counts = slice_counts(g, n, ell)?;
    let c = counts.get(&m).cloned().unwrap_or_default();
    let sp = r(sp_order(g, n, ell));
    Ok(BruteCoeffs {
        g,
        n,
        m,
        a: BigRational::from_integer(BigInt::from(c.unipotent_like)) / &sp,
        b: BigRational::from_integer(BigInt::from(c.no_fixed)) / &sp,
        d: c.eps_sum / &sp,
    })
}

/// Truncated power series with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalSeries {
    #[serde(serialize_with = "ser_rats")]
    pub coeffs: Vec<BigRational>,
}

fn ser_rats<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

impl RationalSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, o: &RationalSeries) -> RationalSeries {
        let g = self.order().min(o.order());
        let coeffs = (0..=g)
            .map(|k| (0..=k).map(|i| &self.coeffs[i] * &o.coeffs[k - i]).sum())
            .collect();
        RationalSeries { coeffs }
    }

    /// 1/A for A with nonzero constant term.
    pub fn inverse(&self) -> RationalSeries {
        let a0 = &self.coeffs[0];
        assert!(!a0.is_zero(), "constant term must be invertible");
        let mut c: Vec<BigRational> = vec![BigRational::one() / a0];
        for k in 1..=self.order() {
            let s: BigRational = (1..=k).map(|i| &self.coeffs[i] * &c[k - i]).sum();
            c.push(-s / a0);
        }
        RationalSeries { coeffs: c }
    }

    /// Multiply by 1/(1 − T): partial sums.
    pub fn partial_sums(&self) -> RationalSeries {
        let mut acc = BigRational::zero();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                acc += c;
                acc.clone()
            })
            .collect();
        RationalSeries { coeffs }
    }
}

/// a_1^{(m)} counted over the multiplier-m slice of GL₂(F_ℓ), without storing it.
pub fn a1_brute(m: u64, ell: u64) -> BigRational {
    let mut count = 0u64;
    for a in 0..ell {
        for b in 0..ell {
            for c in 0..ell {
                for d in 0..ell {
                    let det = (a * d + ell * ell - b * c % ell) % ell;
                    if det != m % ell {
                        continue;
                    }
                    // (T − 1)(T − m) = T² − (1 + m)T + m.
                    if (a + d) % ell == (1 + m) % ell {
                        count += 1;
                    }
                }
            }
        }
    }
    BigRational::new(BigInt::from(count), BigInt::from(sp_order(1, 1, ell)))
}

/// The a-series used downstream: brute force at g = 1 where the closed form is
/// contradicted (m ≠ 1), closed forms elsewhere.
pub fn a_series(m_is_one: bool, ell: u64, order: usize) -> Result<RationalSeries> {
    let mut coeffs = Vec::with_capacity(order + 1);
    for g in 0..=order {
        let v = if g == 1 && !m_is_one {
            a1_brute(nontrivial_multiplier(ell)?, ell)
        } else {
            a_coeff(g, m_is_one, ell)
        };
        coeffs.push(v);
    }
    Ok(RationalSeries { coeffs })
}

/// b_0..b_G via C = 1/A and B = C/(1 − T).
pub fn b_coeffs(m_is_one: bool, ell: u64, order: usize) -> Result<RationalSeries> {
    if order < 1 {
        return Err(Error::Invalid("truncation order must be at least 1".into()));
    }
    Ok(a_series(m_is_one, ell, order)?.inverse().partial_sums())
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub ell: u64,
    pub m_is_one: bool,
    pub order: usize,
    pub c: RationalSeries,
    pub b: RationalSeries,
    #[serde(serialize_with = "crate::matgroups::ser_rat")]
    pub limit_estimate: BigRational,
    #[serde(serialize_with = "crate::matgroups::ser_rat")]
    pub last_increment: BigRational,
    pub limit_decimal: f64,
    pub increment_ratios: Vec<f64>,
}

/// Partial sums of C(1), with a ratio-test guard on the increments.
pub fn b_limit(m_is_one: bool, ell: u64, order: usize) -> Result<LimitReport> {
    let c = a_series(m_is_one, ell, order)?.inverse();
    let b = c.partial_sums();
    let mags: Vec<BigRational> = c.coeffs.iter().map(|x| x.abs()).collect();
    let mut streak = 0;
    for g in 2..=order {
        if mags[g] >= mags[g - 1] && !mags[g - 1].is_zero() {
            streak += 1;
            if streak >= 3 {
                return Err(Error::DivergenceDetected(g));
            }
        } else {
            streak = 0;
        }
    }
    let increment_ratios = (2..=order)
        .map(|g| crate::arith::to_f64(&mags[g]) / crate::arith::to_f64(&mags[g - 1]))
        .collect();
    let limit_estimate = b.coeffs[order].clone();
    Ok(LimitReport {
        ell,
        m_is_one,
        order,
        limit_decimal: crate::arith::to_f64(&limit_estimate),
        last_increment: mags[order].clone(),
        limit_estimate,
        increment_ratios,
        c,
        b,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvolutionEntry {
    pub g: usize,
    pub m: u64,
    pub source: &'static str,
    #[serde(serialize_with = "crate::matgroups::ser_rat")]
    pub sum: BigRational,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub g: usize,
    pub m: u64,
    #[serde(serialize_with = "crate::matgroups::ser_rat")]
    pub closed_form: BigRational,
    #[serde(serialize_with = "crate::matgroups::ser_rat")]
    pub brute_force: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvolutionReport {
    pub ell: u64,
    pub entries: Vec<ConvolutionEntry>,
    pub discrepancies: Vec<Discrepancy>,
    pub pass: bool,
}

fn brute_enumerable(g: usize, ell: u64) -> bool {
    g <= 1 || (g == 2 && ell <= 3)
}

/// Σ_r a_r b_{g−r} = 1 for g ≤ g_max; brute-force coefficients where the group is small.
pub fn convolution_check(g_max: usize, ell: u64) -> Result<ConvolutionReport> {
    if !modular::is_prime_u64(ell) {
        return Err(Error::Invalid(format!("ℓ = {ell} is not prime")));
    }
    let mut classes = vec![true];
    if ell > 2 {
        classes.push(false);
    }
    let mut entries = Vec::new();
    let mut discrepancies = Vec::new();
    for &m_is_one in &classes {
        let m = if m_is_one { 1 } else { nontrivial_multiplier(ell)? };
        let series_a = a_series(m_is_one, ell, g_max.max(1))?;
        let series_b = b_coeffs(m_is_one, ell, g_max.max(1))?;
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut brute_ok = true;
        for g in 0..=g_max {
            if brute_enumerable(g, ell) {
                let bc = brute_coeffs(g, 1, m_is_one, ell)?;
                let closed = a_coeff(g, m_is_one, ell);
                if closed != bc.a {
                    discrepancies.push(Discrepancy { g, m, closed_form: closed, brute_force: bc.a.clone() });
                }
                a.push(bc.a);
                b.push(bc.b);
            } else {
                brute_ok = false;
                a.push(series_a.coeffs[g].clone());
                b.push(series_b.coeffs[g].clone());
            }
        }
        for g in 0..=g_max {
            let sum: BigRational = (0..=g).map(|k| &a[k] * &b[g - k]).sum();
            let pass = sum.is_one();
            let source = if brute_ok || (0..=g).all(|k| brute_enumerable(k, ell)) { "brute-force" } else { "series" };
            entries.push(ConvolutionEntry { g, m, source, sum, pass });
        }
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(ConvolutionReport { ell, entries, discrepancies, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct GapEntry {
    pub n: u32,
    pub interval: DensityInterval,
    #[serde(serialize_with = "crate::matgroups::ser_rat")]
    pub gap: BigRational,
    pub pass: bool,
}

/// |F − F(1, n)| < ℓ^(−n) against the GL₂ closed form, for n = 1..=n_max.
pub fn finite_level_gap_check(ell: u64, n_max: u32) -> Result<Vec<GapEntry>> {
    let f = gl2_density(ell);
    (1..=n_max)
        .map(|n| {
            let interval = density_level(&GroupSpec::GL2Full, ell, n)?;
            let gap = (&f - &interval.upper).abs();
            let bound = BigRational::new(BigInt::one(), BigInt::from(big_pow(ell, n)));
            Ok(GapEntry { n, pass: gap < bound, gap, interval })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LagrangianReport {
    pub ell: u64,
    #[serde(serialize_with = "crate::matgroups::ser_rat")]
    pub formula: BigRational,
    pub brute_force: u64,
}

pub fn lagrangian_report(ell: u64) -> LagrangianReport {
    LagrangianReport { ell, formula: lagrangian_count_l(1, 1, ell), brute_force: lagrangian_pairs_brute_g1(ell) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn series_inverse_roundtrip() {
        let a = a_series(true, 3, 6).unwrap();
        let c = a.inverse();
        let one = a.mul(&c);
        assert!(one.coeffs[0].is_one());
        assert!(one.coeffs[1..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn b_examples() {
        let b = b_coeffs(true, 3, 2).unwrap();
        assert!(b.coeffs[0].is_one());
        assert_eq!(b.coeffs[1], rat(5, 8));
        assert_eq!(b.coeffs[2], rat(409, 640));
    }

    #[test]
    fn s_values() {
        assert_eq!(decomposition_count_s(2, 1, 1, 2), rat(20, 1));
        assert_eq!(decomposition_count_s(3, 0, 2, 3), rat(1, 1));
        assert_eq!(symplectic_planes_brute(2, 2), 20);
    }
}
