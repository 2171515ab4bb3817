//! Command-line front end. `dispatch` returns the process exit code:
//! 0 on success, 1 on a computation error, 2 on a usage error.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::algebraic_groups::{parse_rat_list, AlgebraicGroupConfig};
use crate::arith::to_decimal;
use crate::densities::{self, ClosedForm, Family};
use crate::error::{Error, Result};
use crate::galdiag;
use crate::gsp_asym;
use crate::matgroups::{density_level, density_mc, GroupSpec};
use crate::redscan::{self, compare_reference, parse_bounds, run_scan};
use crate::somos;
use crate::verify::{self, Tier};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "arbor", version, about = "Fixed-point densities, prime scans and diagnostics")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Seed for every Monte Carlo path.
    #[arg(long, default_value_t = verify::DEFAULT_SEED, global = true)]
    pub seed: u64,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form density for a family: gm, gl2, cm:split|inert:cartan|normalizer, split-torus-pair, gsp4-bounds.
    Density {
        family: String,
        #[arg(long)]
        ell: u64,
    },
    /// GSp4 bounds: the general closed form and the tabulated sharper interval.
    Bounds {
        #[arg(long)]
        ell: u64,
    },
    /// Exact level-n interval for a group spec (gl2, cartan:split, gsp:2, generated:@file, ...).
    Level {
        spec: String,
        #[arg(long)]
        ell: u64,
        #[arg(long, short)]
        n: u32,
    },
    /// Monte Carlo estimate for a named group spec.
    Mc {
        spec: String,
        #[arg(long)]
        ell: u64,
        #[arg(long, short)]
        n: u32,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Symplectic series: limit estimate, convolution and finite-level checks.
    GspLimit {
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 12)]
        order: usize,
        /// Use a non-trivial multiplier class.
        #[arg(long)]
        nontrivial: bool,
    },
    /// Count good primes for a reference example or a config file.
    Scan {
        #[arg(long, conflicts_with = "config")]
        example: Option<String>,
        #[arg(long)]
        config: Option<std::path::PathBuf>,
        /// Largest bound, or a comma-separated list (e.g. 1e3,1e4).
        #[arg(long)]
        bound: Option<String>,
        /// Compare against the stored table of the example.
        #[arg(long)]
        compare: bool,
    },
    /// Somos-4 terms, divisibility, and the odd-order equivalence.
    Somos {
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long)]
        divides: Option<u64>,
        #[arg(long)]
        equivalence_bound: Option<u64>,
    },
    /// Torsion polynomials, square tests and Frobenius statistics.
    Diag {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 2)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
        #[arg(long)]
        torsion: Option<usize>,
    },
    /// Run the acceptance battery and print a pass/fail matrix.
    VerifyAll {
        #[arg(long, conflicts_with = "slow")]
        fast: bool,
        #[arg(long)]
        slow: bool,
    },
}

pub struct Output {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
    /// Exit with 1 even though the command ran (e.g. a failed verification).
    pub failed: bool,
}

impl Output {
    fn new(json: Value, text: String) -> Output {
        Output { json, text, csv: None, failed: false }
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Json => serde_json::to_string_pretty(&self.json).unwrap() + "\n",
            Format::Text => self.text.clone(),
            Format::Csv => self.csv.clone().unwrap_or_else(|| csv_from_json(&self.json)),
        }
    }
}

fn csv_from_json(v: &Value) -> String {
    let mut s = String::from("key,value\n");
    if let Value::Object(m) = v {
        for (k, x) in m {
            let cell = match x {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            s.push_str(&format!("{k},\"{}\"\n", cell.replace('"', "\"\"")));
        }
    }
    s
}

fn exact(x: &BigRational) -> Value {
    json!({ "exact": x.to_string(), "decimal": to_decimal(x, 10) })
}

fn usage(e: Error) -> Error {
    match e {
        Error::Parse(_) | Error::UnknownReference(_) => e,
        other => Error::Parse(other.to_string()),
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(e, Error::Parse(_) | Error::UnknownReference(_))
}

fn density(family: &str, ell: u64) -> Result<Output> {
    let fam: Family = family.parse().map_err(usage)?;
    if !crate::arith::modular::is_prime_u64(ell) {
        return Err(Error::Parse(format!("--ell {ell} is not prime")));
    }
    Ok(match densities::closed_form(fam, ell)? {
        ClosedForm::Value(v) => Output::new(
            json!({ "family": fam.to_string(), "ell": ell, "value": exact(&v) }),
            format!("{v}\n{}\n", to_decimal(&v, 10)),
        ),
        ClosedForm::Bounds(b) => Output::new(
            json!({ "family": fam.to_string(), "ell": ell, "lower": exact(&b.lower), "upper": exact(&b.upper) }),
            format!("[{}, {}]\n[{}, {}]\n", b.lower, b.upper, to_decimal(&b.lower, 10), to_decimal(&b.upper, 10)),
        ),
    })
}

fn bounds(ell: u64) -> Result<Output> {
    let general = densities::gsp4_bounds(ell);
    let table = densities::gsp4_table(ell);
    let mut text = format!("closed form (level 1): [{}, {}]\n", general.lower, general.upper);
    if let Some(t) = &table {
        text.push_str(&format!("table (level {}): [{}, {}]\n", t.level, t.lower, t.upper));
    }
    let tj = table.as_ref().map(|t| json!({ "level": t.level, "lower": exact(&t.lower), "upper": exact(&t.upper) }));
    Ok(Output::new(
        json!({ "ell": ell, "closed_form": { "lower": exact(&general.lower), "upper": exact(&general.upper) }, "table": tj }),
        text,
    ))
}

fn level(spec: &str, ell: u64, n: u32) -> Result<Output> {
    let spec: GroupSpec = spec.parse().map_err(usage)?;
    let iv = density_level(&spec, ell, n)?;
    Ok(Output::new(
        json!({ "spec": spec.to_string(), "ell": ell, "level": n, "lower": exact(&iv.lower), "upper": exact(&iv.upper) }),
        format!("[{}, {}]\n[{}, {}]\n", iv.lower, iv.upper, to_decimal(&iv.lower, 10), to_decimal(&iv.upper, 10)),
    ))
}

fn mc(spec: &str, ell: u64, n: u32, samples: u64, seed: u64) -> Result<Output> {
    let spec: GroupSpec = spec.parse().map_err(usage)?;
    let est = density_mc(&spec, ell, n, samples, seed)?;
    let mut json = serde_json::to_value(&est).unwrap();
    json["spec"] = json!(spec.to_string());
    json["seed"] = json!(seed);
    Ok(Output::new(json, format!("{:.6} ± {:.6} (99%, {} samples, seed {seed})\n", est.mean, est.half_width, samples)))
}

fn gsp_limit(ell: u64, order: usize, nontrivial: bool) -> Result<Output> {
    let lim = gsp_asym::b_limit(!nontrivial, ell, order)?;
    let conv = gsp_asym::convolution_check(2, ell)?;
    let mut text = format!("limit ≈ {:.10} (order {order})\n", lim.limit_decimal);
    text.push_str(&format!("convolution to g = 2: {}\n", if conv.pass { "pass" } else { "FAIL" }));
    for d in &conv.discrepancies {
        text.push_str(&format!("  g={} m={}: closed form {} vs brute force {}\n", d.g, d.m, d.closed_form, d.brute_force));
    }
    Ok(Output::new(json!({ "limit": lim, "convolution": conv }), text))
}

fn default_bounds(max: u64) -> Vec<u64> {
    let mut v: Vec<u64> = std::iter::successors(Some(1_000u64), |x| x.checked_mul(10)).take_while(|&x| x < max).collect();
    v.push(max);
    v
}

fn scan(example: Option<String>, config: Option<std::path::PathBuf>, bound: Option<String>, compare: bool) -> Result<Output> {
    let mut cfg = match (&example, &config) {
        (Some(name), None) => redscan::example(name)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            redscan::parse_config_file(&text).map_err(usage)?
        }
        _ => return Err(Error::Parse("give exactly one of --example or --config".into())),
    };
    if let Some(b) = bound {
        let list = parse_bounds(&b).map_err(usage)?;
        cfg.bounds = if list.len() == 1 { default_bounds(list[0]) } else { list };
    }
    let rep = run_scan(&cfg)?;
    let mut json = serde_json::to_value(&rep).unwrap();
    let mut text = rep.to_string();
    let mut failed = false;
    if compare {
        let name = cfg.name.clone().ok_or_else(|| Error::Parse("--compare needs a named example".into()))?;
        let cmp = compare_reference(&rep, &name)?;
        text.push_str(&format!(
            "reference {}: {} on {} shared bounds\n",
            name,
            if cmp.pass() { "match" } else { "MISMATCH" },
            cmp.shared_bounds.len()
        ));
        for m in &cmp.mismatches {
            text.push_str(&format!("  x={} {}: got {} expected {}\n", m.x, m.field, m.got, m.expected));
        }
        failed = !cmp.pass();
        json = json!({ "report": json, "comparison": cmp });
    }
    Ok(Output { json, text, csv: Some(rep.to_csv()), failed })
}

fn somos_cmd(terms: Option<usize>, divides: Option<u64>, eq: Option<u64>) -> Result<Output> {
    match (terms, divides, eq) {
        (Some(n), None, None) => {
            let t = somos::somos_terms(n)?;
            let strs: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            let csv = std::iter::once("n,a_n".to_string())
                .chain(strs.iter().enumerate().map(|(i, s)| format!("{i},{s}")))
                .collect::<Vec<_>>()
                .join("\n")
                + "\n";
            let mut o = Output::new(json!({ "terms": strs }), strs.join("\n") + "\n");
            o.csv = Some(csv);
            Ok(o)
        }
        (None, Some(p), None) => {
            let d = somos::somos_divides(p, somos::default_cap(p))?;
            let text = match d {
                somos::SomosDivisibility::Divides(i) => format!("{p} divides a_{i}\n"),
                somos::SomosDivisibility::Never => format!("{p} divides no term\n"),
                somos::SomosDivisibility::Undetermined => format!("{p}: undetermined within the cap\n"),
            };
            Ok(Output::new(json!({ "p": p, "result": d }), text))
        }
        (None, None, Some(x)) => {
            let r = somos::somos_oddorder_equivalence(x)?;
            let text = format!(
                "{} of {} good primes ≤ {x} divide a term; {} counterexamples\n",
                r.dividing,
                r.total,
                r.counterexamples.len()
            );
            let failed = !r.counterexamples.is_empty();
            let mut o = Output::new(serde_json::to_value(&r).unwrap(), text);
            o.failed = failed;
            Ok(o)
        }
        _ => Err(Error::Parse("give exactly one of --terms, --divides, --equivalence-bound".into())),
    }
}

fn diag(curve: &str, ell: u64, level: u32, bound: u64, torsion: Option<usize>) -> Result<Output> {
    let a = match curve.parse::<AlgebraicGroupConfig>().map_err(usage)? {
        AlgebraicGroupConfig::Weierstrass { a } => a,
        other => return Err(Error::Parse(format!("{other} is not a Weierstrass curve"))),
    };
    let sq = galdiag::rational_square_tests(&galdiag::curve_square_values(&a));
    let disc = galdiag::two_torsion_discriminant(&a);
    let mut text = format!("2-torsion polynomial {} (discriminant {disc})\n", galdiag::two_torsion_polynomial(&a));
    for e in &sq.entries {
        text.push_str(&format!("  {} is {}a square\n", e.value, if e.is_square { "" } else { "not " }));
    }
    let tors = match torsion {
        Some(m) => {
            let t = galdiag::torsion_polynomial(&a, m)?;
            text.push_str(&format!("{m}-torsion primitive part: {}\n", t.primitive));
            Some(t)
        }
        None => None,
    };
    let fr = galdiag::frobenius_statistics(&a, ell, level, bound)?;
    text.push_str(&format!("Frobenius classes mod {ell}^{level} over {} primes: TV {:.4} ({})\n", fr.primes, fr.tv_distance, fr.verdict));
    Ok(Output::new(
        json!({ "two_torsion_discriminant": disc.to_string(), "squares": sq, "torsion": tors, "frobenius": fr }),
        text,
    ))
}

fn verify_all(slow: bool, seed: u64) -> Result<Output> {
    let checks = verify::run_battery(if slow { Tier::Slow } else { Tier::Fast }, seed);
    let mut text = format!("reference tables sha256 {}\n", redscan::reference_checksum());
    let mut csv = String::from("criterion,name,pass,seconds,detail\n");
    for c in &checks {
        text.push_str(&format!(
            "[{}] {} {} ({:.1}s): {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.seconds,
            c.detail
        ));
        csv.push_str(&format!("{},{},{},{:.2},\"{}\"\n", c.id, c.name, c.pass, c.seconds, c.detail.replace('"', "\"\"")));
    }
    let failed = checks.iter().any(|c| !c.pass);
    Ok(Output {
        json: json!({ "reference_sha256": redscan::reference_checksum(), "checks": checks }),
        text,
        csv: Some(csv),
        failed,
    })
}

pub fn execute(cli: Cli) -> Result<Output> {
    let seed = cli.global.seed;
    match cli.command {
        Command::Density { family, ell } => density(&family, ell),
        Command::Bounds { ell } => bounds(ell),
        Command::Level { spec, ell, n } => level(&spec, ell, n),
        Command::Mc { spec, ell, n, samples } => mc(&spec, ell, n, samples, seed),
        Command::GspLimit { ell, order, nontrivial } => gsp_limit(ell, order, nontrivial),
        Command::Scan { example, config, bound, compare } => scan(example, config, bound, compare),
        Command::Somos { terms, divides, equivalence_bound } => somos_cmd(terms, divides, equivalence_bound),
        Command::Diag { curve, ell, level, bound, torsion } => diag(&curve, ell, level, bound, torsion),
        Command::VerifyAll { fast: _, slow } => verify_all(slow, seed),
    }
}

/// Parse `args` (including the program name), run, and write to `out`/`err`.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let format = cli.global.format;
    let result = match cli.global.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build() {
            Ok(pool) => pool.install(|| execute(cli)),
            Err(e) => Err(Error::Invalid(e.to_string())),
        },
        None => execute(cli),
    };
    match result {
        Ok(o) => {
            let _ = write!(out, "{}", o.render(format));
            i32::from(o.failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if is_usage(&e) {
                let _ = writeln!(err, "run with --help for the flag schema");
                2
            } else {
                1
            }
        }
    }
}

/// Parses a comma-separated list of rationals for square tests.
pub fn parse_values(s: &str) -> Result<Vec<BigRational>> {
    parse_rat_list(s)
}
