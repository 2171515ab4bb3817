//! The fast and slow check batteries behind `verify-all`.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::algebraic_groups::AlgebraicGroupConfig;
use crate::arith::{int, rat, Zmod};
use crate::densities::{self, gl2_cn, pair_count};
use crate::error::Result;
use crate::galdiag;
use crate::gsp_asym;
use crate::matgroups::{density_level, density_mc, enumerate, GroupSpec};
use crate::redscan::{self, compare_reference, run_scan, EXAMPLES};
use crate::somos;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    Fast,
    Slow,
}

pub const DEFAULT_SEED: u64 = 0;
pub const MC_SAMPLES: u64 = 1_000_000;

fn timed(id: u32, name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let t = Instant::now();
    let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { id, name: name.to_string(), pass, detail, seconds: t.elapsed().as_secs_f64() }
}

pub fn closed_forms() -> Result<(bool, String)> {
    let got = [
        (densities::gl2_density(2), rat(11, 21)),
        (densities::gl2_density(5), rat(2381, 2976)),
        (densities::gm_density(2), rat(1, 3)),
        (densities::cm_density(2, true, true), rat(2, 9)),
        (densities::cm_density(2, false, true), rat(8, 15)),
        (densities::cm_density(5, true, true), rat(817, 1152)),
    ];
    let bad: Vec<String> = got.iter().filter(|(a, b)| a != b).map(|(a, b)| format!("{a} ≠ {b}")).collect();
    Ok((bad.is_empty(), if bad.is_empty() { "6 constants exact".into() } else { bad.join("; ") }))
}

pub fn gl2_intervals() -> Result<(bool, String)> {
    let target = rat(11, 21);
    let mut prev: Option<crate::matgroups::DensityInterval> = None;
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=3u32 {
        let iv = density_level(&GroupSpec::GL2Full, 2, n)?;
        let width_ok = iv.width() <= BigRational::new(1.into(), BigInt::from(1u64 << n));
        let nested = prev.as_ref().is_none_or(|p| p.encloses(&iv.lower, &iv.upper));
        ok &= width_ok && nested && iv.contains(&target);
        if n == 1 {
            ok &= iv.lower == rat(1, 3) && iv.upper == rat(5, 8);
        }
        parts.push(format!("n={n} [{}, {}]", iv.lower, iv.upper));
        prev = Some(iv);
    }
    Ok((ok, parts.join(" ")))
}

fn pair_count_brute(a: u64, b: u64, c: u64, ell: u64, n: u32) -> u64 {
    let r = Zmod::new(ell, n);
    let mut k = 0;
    for x in (a % ell..r.modulus).step_by(ell as usize) {
        for y in (b % ell..r.modulus).step_by(ell as usize) {
            if r.mul(x, y) == c % r.modulus {
                k += 1;
            }
        }
    }
    k
}

pub fn counting_lemmas() -> Result<(bool, String)> {
    let mut ok = true;
    for (ell, n) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2)] {
        let r = Zmod::new(ell, n);
        let count = enumerate(&GroupSpec::GL2Full, ell, n)?
            .iter()
            .filter(|m| r.ord_capped(m.minus_identity().det()) == n - 1)
            .count();
        ok &= BigInt::from(count) == gl2_cn(ell, n);
    }
    let mut cases = 0;
    for ell in [2u64, 3, 5] {
        for n in [2u32, 3] {
            let m = Zmod::new(ell, n).modulus;
            for a in 0..ell {
                for b in 0..ell {
                    for c in 0..m {
                        cases += 1;
                        ok &= pair_count(a, b, c, ell, n)? == BigInt::from(pair_count_brute(a, b, c, ell, n));
                    }
                }
            }
        }
    }
    Ok((ok, format!("c_n at 4 levels, pair counts on {cases} inputs")))
}

pub fn gsp4_level_one() -> Result<(bool, String)> {
    let iv = density_level(&GroupSpec::GSp { g: 2 }, 2, 1)?;
    let closed = densities::gsp4_bounds(2);
    Ok((iv.lower == closed.lower, format!("enumerated lower {} vs closed {}", iv.lower, closed.lower)))
}

pub fn gsp4_mc(ell: u64, n: u32, seed: u64) -> Result<(bool, String)> {
    let table = densities::gsp4_table(ell).expect("tabulated prime");
    let est = density_mc(&GroupSpec::GSp { g: 2 }, ell, n, MC_SAMPLES, seed)?;
    let lo = crate::arith::to_f64(&table.lower);
    let hi = crate::arith::to_f64(&table.upper);
    let inside = lo <= est.mean && est.mean <= hi;
    Ok((
        inside && est.half_width < 0.002,
        format!("ℓ={ell} n={n} seed={seed}: {:.6} ± {:.6} vs [{lo:.6}, {hi:.6}]", est.mean, est.half_width),
    ))
}

pub fn appendix_a() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for ell in [2u64, 3] {
        let rep = gsp_asym::convolution_check(2, ell)?;
        ok &= rep.pass;
        notes.push(format!("ℓ={ell} convolution {}", if rep.pass { "ok" } else { "FAIL" }));
        if ell == 3 {
            let d = rep.discrepancies.iter().find(|d| d.g == 1 && d.m != 1);
            let reported = d.is_some_and(|d| d.closed_form == rat(1, 4) && d.brute_force == rat(1, 2));
            ok &= reported;
            notes.push(format!("g=1 m≠1 discrepancy reported: {reported}"));
        }
        let gap = gsp_asym::finite_level_gap_check(ell, if ell == 2 { 3 } else { 2 })?;
        ok &= gap.iter().all(|g| g.pass);
    }
    let bc = gsp_asym::brute_coeffs(1, 1, true, 3)?;
    ok &= bc.b == rat(5, 8) && bc.a == rat(3, 8);
    notes.push(format!("a₁={} b₁={} at ℓ=3", bc.a, bc.b));
    Ok((ok, notes.join("; ")))
}

pub fn appendix_b(bounds: &[u64]) -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for name in EXAMPLES {
        let mut cfg = redscan::example(name)?;
        cfg.bounds = if name == "abvarex" {
            bounds.iter().copied().filter(|&b| b <= redscan::JACOBIAN_DEFAULT_BOUND).collect()
        } else {
            bounds.to_vec()
        };
        let rep = run_scan(&cfg)?;
        let cmp = compare_reference(&rep, name)?;
        ok &= cmp.pass() && cmp.shared_bounds.len() == cfg.bounds.len();
        let last = rep.rows.last().unwrap();
        notes.push(format!("{name} {}/{}", last.good, last.total));
    }
    Ok((ok, notes.join(", ")))
}

pub fn somos_checks() -> Result<(bool, String)> {
    let terms = somos::somos_terms(11)?;
    let mut ok = terms[11] == BigInt::from(8209);
    ok &= somos::invariant_failures(100)?.is_empty();
    ok &= somos::scaling_failures(100)?.is_empty();
    ok &= somos::somos_ec_identity_check(8)?.iter().all(|e| e.pass);
    let eq = somos::somos_oddorder_equivalence(10_000)?;
    ok &= eq.counterexamples.is_empty() && eq.undetermined.is_empty() && eq.dividing == 654;
    Ok((ok, format!("a₁₁={}, {} of {} good primes divide a term", terms[11], eq.dividing, eq.total)))
}

fn curve(s: &str) -> Result<[BigRational; 5]> {
    match s.parse::<AlgebraicGroupConfig>()? {
        AlgebraicGroupConfig::Weierstrass { a } => Ok(a),
        other => Err(crate::Error::Invalid(format!("{other} is not a Weierstrass curve"))),
    }
}

pub fn diagnostics() -> Result<(bool, String)> {
    let cmn = curve("weierstrass:0,0,0,0,3")?;
    let prim = galdiag::torsion_polynomial(&cmn, 4)?.primitive;
    let expected = crate::arith::QPoly::from_ints(&[-72, 0, 0, 60, 0, 0, 1]);
    let non = curve("weierstrass:0,0,1,-1,0")?;
    let disc = galdiag::two_torsion_discriminant(&non);
    let tv1 = galdiag::frobenius_statistics(&non, 2, 2, 100_000)?.tv_distance;
    let tv2 = galdiag::frobenius_statistics(&curve("weierstrass:0,0,0,3,0")?, 2, 1, 100_000)?.tv_distance;
    let ok = prim == expected && disc == int(592) && tv1 < 0.02 && tv2 > 0.1;
    Ok((ok, format!("4-torsion {prim}; disc {disc}; TV {tv1:.4} / {tv2:.4}")))
}

/// Runs every check; the slow tier adds the 10⁵ scan rows.
pub fn run_battery(tier: Tier, seed: u64) -> Vec<Check> {
    let mut out = vec![
        timed(1, "closed-form constants", closed_forms),
        timed(2, "GL2 interval containment", gl2_intervals),
        timed(3, "counting lemmas", counting_lemmas),
        timed(4, "GSp4 level-1 lower bound", gsp4_level_one),
        timed(4, "GSp4 Monte Carlo ℓ=2 n=4", || gsp4_mc(2, 4, seed)),
        timed(4, "GSp4 Monte Carlo ℓ=3 n=2", || gsp4_mc(3, 2, seed)),
        timed(5, "symplectic series checks", appendix_a),
        timed(6, "reference scans to 10⁴", || appendix_b(&[1_000, 10_000])),
        timed(7, "Somos-4", somos_checks),
        timed(8, "torsion and Frobenius diagnostics", diagnostics),
    ];
    if tier == Tier::Slow {
        out.push(timed(6, "reference scans to 10⁵", || appendix_b(&[1_000, 10_000, 100_000])));
    }
    out
}
