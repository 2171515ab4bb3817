//! Prime scans: count primes of good reduction where a point has order prime
//! to ℓ, and compare the counts with stored reference tables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebraic_groups::{
    parse_rat_list, reduce_point_with, AlgebraicGroupConfig, Exclusions, RationalPoint,
};
use crate::arith::{modular, rat, to_decimal, to_f64};
use crate::error::{Error, Result};

pub const MAX_BOUND: u64 = 10_000_000;
pub const JACOBIAN_DEFAULT_BOUND: u64 = 10_000;

const REFERENCE_CSV: &str = include_str!("../data/reference_tables.csv");
pub const REFERENCE_SHA256: &str = "4617f0c097c392aa1b4ed359c419f848dd58897bf7d3a6d59a272779e6f22acc";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub name: Option<String>,
    pub config: AlgebraicGroupConfig,
    pub alpha: RationalPoint,
    pub ell: u64,
    pub bounds: Vec<u64>,
    pub exclusions: Exclusions,
    pub predicted: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub x: u64,
    pub good: u64,
    pub total: u64,
    /// Display only, 5 places.
    pub ratio: String,
    pub predicted: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub example: Option<String>,
    pub config: String,
    pub alpha: String,
    pub ell: u64,
    pub exclusions: Option<Vec<u64>>,
    pub rows: Vec<ScanRow>,
    pub version: String,
}

impl ScanReport {
    pub fn row(&self, x: u64) -> Option<&ScanRow> {
        self.rows.iter().find(|r| r.x == x)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,good,total,ratio,predicted\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.x,
                r.good,
                r.total,
                r.ratio,
                r.predicted.as_deref().unwrap_or("")
            ));
        }
        s
    }
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} at {} (ℓ = {})", self.config, self.alpha, self.ell)?;
        writeln!(f, "{:>10} {:>8} {:>8} {:>8} {:>8}", "x", "good", "total", "ratio", "pred")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>10} {:>8} {:>8} {:>8} {:>8}",
                r.x,
                r.good,
                r.total,
                r.ratio,
                r.predicted.as_deref().unwrap_or("-")
            )?;
        }
        Ok(())
    }
}

pub use crate::arith::sieve::sieve_primes as primes_up_to;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeStatus {
    Skipped,
    Good,
    Bad,
}

/// Status of one prime for a scan.
pub fn classify(cfg: &ScanConfig, p: u64) -> Result<PrimeStatus> {
    match reduce_point_with(&cfg.config, &cfg.alpha, p, &cfg.exclusions) {
        Err(Error::BadReduction { .. }) => Ok(PrimeStatus::Skipped),
        Err(e) => Err(Error::AtPrime { p, source: Box::new(e) }),
        Ok(local) => {
            let coprime = local
                .order_coprime_to_ell(cfg.ell)
                .map_err(|e| Error::AtPrime { p, source: Box::new(e) })?;
            Ok(if coprime { PrimeStatus::Good } else { PrimeStatus::Bad })
        }
    }
}

const RANGE: usize = 512;

pub fn run_scan(cfg: &ScanConfig) -> Result<ScanReport> {
    if !modular::is_prime_u64(cfg.ell) {
        return Err(Error::Invalid(format!("ℓ = {} is not prime", cfg.ell)));
    }
    if cfg.bounds.is_empty() || cfg.bounds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("bounds must be non-empty and strictly increasing".into()));
    }
    let max = *cfg.bounds.last().unwrap();
    if max > MAX_BOUND {
        return Err(Error::Invalid(format!("bound {max} exceeds {MAX_BOUND}")));
    }
    cfg.config.validate_point(&cfg.alpha)?;
    let primes = primes_up_to(max);
    // Contiguous ranges, merged in order.
    let statuses: Vec<Vec<(u64, PrimeStatus)>> = primes
        .par_chunks(RANGE)
        .map(|chunk| chunk.iter().map(|&p| classify(cfg, p).map(|s| (p, s))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(cfg.bounds.len());
    let (mut good, mut total) = (0u64, 0u64);
    let mut bi = 0;
    let emit = |x: u64, good: u64, total: u64, rows: &mut Vec<ScanRow>| {
        let ratio = if total == 0 { "0.00000".to_string() } else { format!("{:.5}", good as f64 / total as f64) };
        rows.push(ScanRow { x, good, total, ratio, predicted: cfg.predicted.as_ref().map(|q| to_decimal(q, 5)) });
    };
    for (p, s) in statuses.into_iter().flatten() {
        while bi < cfg.bounds.len() && p > cfg.bounds[bi] {
            emit(cfg.bounds[bi], good, total, &mut rows);
            bi += 1;
        }
        match s {
            PrimeStatus::Skipped => {}
            PrimeStatus::Good => {
                good += 1;
                total += 1;
            }
            PrimeStatus::Bad => total += 1,
        }
    }
    while bi < cfg.bounds.len() {
        emit(cfg.bounds[bi], good, total, &mut rows);
        bi += 1;
    }
    Ok(ScanReport {
        example: cfg.name.clone(),
        config: cfg.config.to_string(),
        alpha: cfg.alpha.to_string(),
        ell: cfg.ell,
        exclusions: match &cfg.exclusions {
            Exclusions::Default => None,
            Exclusions::Explicit(v) => Some(v.clone()),
        },
        rows,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

pub const EXAMPLES: [&str; 8] =
    ["untwistedtorus", "badtwist", "bigtorus", "noncmex", "cmnonsplit", "cmsplit", "cmramified", "abvarex"];

/// Shipped configuration of a reference example. Exclusion lists are the ones
/// that reproduce the stored totals.
pub fn example(name: &str) -> Result<ScanConfig> {
    let (group, point, ell, excl, predicted): (&str, &str, u64, Option<&[u64]>, Option<(i64, i64)>) = match name {
        "untwistedtorus" => ("conic:d=1", "5/3,4/3", 2, None, Some((1, 3))),
        "badtwist" => ("conic:d=-7", "3/4,1/4", 7, Some(&[2]), Some((17, 24))),
        "bigtorus" => ("cubicnorm:1,0,0,-2", "-1,1,0", 2, Some(&[]), Some((67, 168))),
        "noncmex" => ("weierstrass:0,0,1,-1,0", "0,0", 2, None, Some((11, 21))),
        "cmnonsplit" => ("weierstrass:0,0,0,0,3", "1,2", 2, None, Some((8, 15))),
        "cmsplit" => ("weierstrass:0,0,0,-207515,44740234", "253,2904", 2, Some(&[2, 7, 11]), Some((2, 9))),
        "cmramified" => ("weierstrass:0,0,0,3,0", "1,-2", 2, None, Some((17, 32))),
        "abvarex" => ("genus2:4,-8,4,0,4,-8,5", "inf:-2 - 1,1", 2, Some(&[2, 3, 13, 31]), None),
        _ => return Err(Error::UnknownReference(name.to_string())),
    };
    let bounds = if name == "abvarex" { vec![1_000, JACOBIAN_DEFAULT_BOUND] } else { vec![1_000, 10_000, 100_000] };
    Ok(ScanConfig {
        name: Some(name.to_string()),
        config: group.parse()?,
        alpha: point.parse()?,
        ell,
        bounds,
        exclusions: excl.map_or(Exclusions::Default, |v| Exclusions::Explicit(v.to_vec())),
        predicted: predicted.map(|(n, d)| rat(n, d)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub x: u64,
    pub good: u64,
    pub total: u64,
}

pub fn reference_checksum() -> String {
    let digest = Sha256::digest(REFERENCE_CSV.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// The stored tables, keyed by example; panics if the embedded data was altered.
pub fn reference_tables() -> &'static BTreeMap<String, Vec<ReferenceRow>> {
    static TABLES: OnceLock<BTreeMap<String, Vec<ReferenceRow>>> = OnceLock::new();
    TABLES.get_or_init(|| {
        assert_eq!(reference_checksum(), REFERENCE_SHA256, "embedded reference tables were modified");
        let mut m: BTreeMap<String, Vec<ReferenceRow>> = BTreeMap::new();
        for line in REFERENCE_CSV.lines().skip(1).filter(|l| !l.is_empty()) {
            let f: Vec<&str> = line.split(',').collect();
            let num = |i: usize| f[i].parse::<u64>().expect("reference csv");
            m.entry(f[0].to_string()).or_default().push(ReferenceRow { x: num(1), good: num(2), total: num(3) });
        }
        m
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub x: u64,
    pub field: &'static str,
    pub got: u64,
    pub expected: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub reference: String,
    pub shared_bounds: Vec<u64>,
    pub mismatches: Vec<Mismatch>,
}

impl Comparison {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn compare_reference(report: &ScanReport, reference_id: &str) -> Result<Comparison> {
    let table = reference_tables()
        .get(reference_id)
        .ok_or_else(|| Error::UnknownReference(reference_id.to_string()))?;
    let mut shared = Vec::new();
    let mut mismatches = Vec::new();
    for row in &report.rows {
        let Some(r) = table.iter().find(|r| r.x == row.x) else { continue };
        shared.push(row.x);
        if row.good != r.good {
            mismatches.push(Mismatch { x: row.x, field: "good", got: row.good, expected: r.good });
        }
        if row.total != r.total {
            mismatches.push(Mismatch { x: row.x, field: "total", got: row.total, expected: r.total });
        }
    }
    Ok(Comparison { reference: reference_id.to_string(), shared_bounds: shared, mismatches })
}

/// |ratio at the largest bound − predicted|.
pub fn density_gap(report: &ScanReport, predicted: &BigRational) -> Result<f64> {
    let last = report.rows.last().ok_or_else(|| Error::Invalid("empty report".into()))?;
    if last.total == 0 {
        return Err(Error::Invalid("no primes counted".into()));
    }
    Ok((last.good as f64 / last.total as f64 - to_f64(predicted)).abs())
}

fn parse_bound(s: &str) -> Result<u64> {
    let s = s.trim();
    let err = || Error::Parse(format!("bad bound `{s}`"));
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| err())?;
        let e: u32 = e.parse().map_err(|_| err())?;
        return m.checked_mul(10u64.checked_pow(e).ok_or_else(err)?).ok_or_else(err);
    }
    s.replace('_', "").parse().map_err(|_| err())
}

pub fn parse_bounds(s: &str) -> Result<Vec<u64>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_bound).collect()
}

/// Parses a `key = value` file. Keys: group, point, ell, bounds, exclude, predicted, name.
/// `exclude = default` keeps the default policy; an empty value means no exclusions.
pub fn parse_config_file(text: &str) -> Result<ScanConfig> {
    let mut kv = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", i + 1)))?;
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    let need = |k: &str| kv.get(k).ok_or_else(|| Error::Parse(format!("missing key `{k}`")));
    let ell: u64 = need("ell")?.parse().map_err(|_| Error::Parse("bad ell".into()))?;
    let exclusions = match kv.get("exclude").map(String::as_str) {
        None | Some("default") => Exclusions::Default,
        Some(v) => Exclusions::Explicit(
            v.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad prime `{t}`"))))
                .collect::<Result<_>>()?,
        ),
    };
    let predicted = match kv.get("predicted") {
        None => None,
        Some(v) => {
            let q = parse_rat_list(v)?;
            if q.len() != 1 {
                return Err(Error::Parse("predicted must be one rational".into()));
            }
            Some(q[0].clone())
        }
    };
    Ok(ScanConfig {
        name: kv.get("name").cloned(),
        config: need("group")?.parse()?,
        alpha: need("point")?.parse()?,
        ell,
        bounds: match kv.get("bounds") {
            Some(b) => parse_bounds(b)?,
            None => vec![1_000, 10_000],
        },
        exclusions,
        predicted,
    })
}
