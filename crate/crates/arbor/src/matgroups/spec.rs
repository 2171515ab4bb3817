use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::valuation::big_pow;
use crate::arith::{modular, Zmod};
use crate::error::{Error, Result};

use super::matrix::{AffineElement, ResidueMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CartanKind {
    Split,
    /// Units of Z_ℓ[ω]/(ω² + cω + d).
    Nonsplit { c: i64, d: i64 },
}

/// A closed subgroup of GL_d(Z_ℓ), described declaratively.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    GL2Full,
    Cartan(CartanKind),
    CartanNormalizer(CartanKind),
    GSp { g: usize },
    /// Scalar units acting on a rank-2 module.
    SplitTorusPair,
    /// S₃ (standard rank-2 representation) times scalar units.
    BigTorusS3,
    ScalarUnits,
    /// Closure of integer generators reduced mod ℓⁿ, n ≥ level.
    Generated { level: u32, dim: usize, generators: Vec<GeneratorSpec> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub matrix: Vec<Vec<i64>>,
    #[serde(default)]
    pub translation: Option<Vec<i64>>,
}

/// File format for `generated:@file`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratedFile {
    pub ell: Option<u64>,
    pub level: u32,
    pub generators: Vec<GeneratorSpec>,
}

impl GroupSpec {
    pub fn dim(&self) -> usize {
        match self {
            GroupSpec::GL2Full
            | GroupSpec::Cartan(_)
            | GroupSpec::CartanNormalizer(_)
            | GroupSpec::SplitTorusPair
            | GroupSpec::BigTorusS3 => 2,
            GroupSpec::GSp { g } => 2 * g,
            GroupSpec::ScalarUnits => 1,
            GroupSpec::Generated { dim, .. } => *dim,
        }
    }

    pub fn is_named(&self) -> bool {
        !matches!(self, GroupSpec::Generated { .. })
    }

    /// Check parameters against ℓ.
    pub fn validate(&self, ell: u64) -> Result<()> {
        if !modular::is_prime_u64(ell) {
            return Err(Error::Invalid(format!("ℓ = {ell} is not prime")));
        }
        match self {
            GroupSpec::Cartan(CartanKind::Nonsplit { c, d })
            | GroupSpec::CartanNormalizer(CartanKind::Nonsplit { c, d }) => {
                let cc = modular::reduce_i64(*c, ell);
                let dd = modular::reduce_i64(*d, ell);
                let has_root =
                    (0..ell).any(|x| (x * x % ell + cc * x % ell + dd) % ell == 0);
                if has_root {
                    return Err(Error::Invalid(format!(
                        "x^2 + {c}x + {d} is reducible mod {ell}"
                    )));
                }
                Ok(())
            }
            GroupSpec::GSp { g } if *g == 0 => Err(Error::Invalid("GSp needs g ≥ 1".into())),
            GroupSpec::Generated { generators, dim, .. } => {
                for g in generators {
                    if g.matrix.len() != *dim || g.matrix.iter().any(|r| r.len() != *dim) {
                        return Err(Error::Invalid("generator has wrong shape".into()));
                    }
                    if g.translation.as_ref().is_some_and(|t| t.len() != *dim) {
                        return Err(Error::Invalid("translation has wrong length".into()));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The order of the level-n group, when a closed form is known.
    pub fn predicted_order(&self, ell: u64, n: u32) -> Option<BigUint> {
        let units = BigUint::from(ell - 1) * big_pow(ell, n - 1);
        Some(match self {
            GroupSpec::GL2Full => gl_order(2, n, ell),
            GroupSpec::Cartan(CartanKind::Split) => &units * &units,
            GroupSpec::Cartan(CartanKind::Nonsplit { .. }) => {
                BigUint::from(ell * ell - 1) * big_pow(ell, 2 * (n - 1))
            }
            GroupSpec::CartanNormalizer(k) => {
                GroupSpec::Cartan(k.clone()).predicted_order(ell, n)? * 2u32
            }
            GroupSpec::GSp { g } => units * sp_order(*g, n, ell),
            GroupSpec::SplitTorusPair | GroupSpec::ScalarUnits => units,
            GroupSpec::BigTorusS3 => units * 6u32,
            GroupSpec::Generated { .. } => return None,
        })
    }

    pub fn generated_from_file(path: &str) -> Result<(GroupSpec, Option<u64>)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
        let f: GeneratedFile =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        let dim = f.generators.first().map(|g| g.matrix.len()).unwrap_or(1);
        let spec = GroupSpec::Generated { level: f.level, dim, generators: f.generators };
        Ok((spec, f.ell))
    }

    /// Affine generators at level n (translations default to zero).
    pub fn affine_generators(&self, ell: u64, n: u32) -> Result<Vec<AffineElement>> {
        let GroupSpec::Generated { level, dim, generators } = self else {
            return Err(Error::UnsupportedSpec("affine generators need a generated spec".into()));
        };
        if n < *level {
            return Err(Error::Invalid(format!("level {n} below the generator level {level}")));
        }
        let ring = Zmod::new(ell, n);
        Ok(generators
            .iter()
            .map(|g| {
                let flat: Vec<i64> = g.matrix.iter().flatten().copied().collect();
                let m = ResidueMatrix::from_i64(*dim, ring, &flat);
                let t = g
                    .translation
                    .clone()
                    .unwrap_or_else(|| vec![0; *dim])
                    .iter()
                    .map(|&x| ring.elem(x).value)
                    .collect();
                AffineElement::new(t, m)
            })
            .collect())
    }
}

/// |GL_g(Z/ℓⁿ)|.
pub fn gl_order(g: usize, n: u32, ell: u64) -> BigUint {
    let mut r = big_pow(ell, (n - 1) * (g * g) as u32);
    for j in 1..=g as u32 {
        r *= big_pow(ell, j - 1) * (big_pow(ell, j) - 1u32);
    }
    r
}

/// |Sp_{2g}(Z/ℓⁿ)|; 1 for g = 0.
pub fn sp_order(g: usize, n: u32, ell: u64) -> BigUint {
    if g == 0 {
        return BigUint::one();
    }
    let mut r = big_pow(ell, (n - 1) * (2 * g * g + g) as u32);
    for j in 1..=g as u32 {
        r *= big_pow(ell, 2 * j - 1) * (big_pow(ell, 2 * j) - 1u32);
    }
    r
}

impl fmt::Display for CartanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanKind::Split => f.write_str("split"),
            CartanKind::Nonsplit { c, d } => write!(f, "nonsplit:c={c},d={d}"),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::GL2Full => f.write_str("gl2"),
            GroupSpec::Cartan(k) => write!(f, "cartan:{k}"),
            GroupSpec::CartanNormalizer(k) => write!(f, "cartan-normalizer:{k}"),
            GroupSpec::GSp { g } => write!(f, "gsp:{g}"),
            GroupSpec::SplitTorusPair => f.write_str("split-torus-pair"),
            GroupSpec::BigTorusS3 => f.write_str("bigtorus-s3"),
            GroupSpec::ScalarUnits => f.write_str("scalar"),
            GroupSpec::Generated { level, generators, .. } => {
                write!(f, "generated(level={level}, {} generators)", generators.len())
            }
        }
    }
}

fn parse_cartan(rest: &str) -> Result<CartanKind> {
    if rest == "split" {
        return Ok(CartanKind::Split);
    }
    let Some(params) = rest.strip_prefix("nonsplit") else {
        return Err(Error::Parse(format!("unknown Cartan kind `{rest}`")));
    };
    let params = params.trim_start_matches(':');
    // Default: ω² + ω + 1, irreducible mod 2.
    let (mut c, mut d) = (1i64, 1i64);
    for kv in params.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got `{kv}`")))?;
        let v: i64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad integer `{v}`")))?;
        match k.trim() {
            "c" => c = v,
            "d" => d = v,
            other => return Err(Error::Parse(format!("unknown Cartan parameter `{other}`"))),
        }
    }
    Ok(CartanKind::Nonsplit { c, d })
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `gl2`, `cartan:split`, `cartan-normalizer:nonsplit:c=1,d=1`,
    /// `gsp:2`, `split-torus-pair`, `bigtorus-s3`, `scalar`.
    fn from_str(s: &str) -> Result<GroupSpec> {
        let s = s.trim();
        match s {
            "gl2" => return Ok(GroupSpec::GL2Full),
            "split-torus-pair" => return Ok(GroupSpec::SplitTorusPair),
            "bigtorus-s3" => return Ok(GroupSpec::BigTorusS3),
            "scalar" | "gm" => return Ok(GroupSpec::ScalarUnits),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("cartan-normalizer:") {
            return Ok(GroupSpec::CartanNormalizer(parse_cartan(rest)?));
        }
        if let Some(rest) = s.strip_prefix("cartan:") {
            return Ok(GroupSpec::Cartan(parse_cartan(rest)?));
        }
        if let Some(rest) = s.strip_prefix("gsp:") {
            let g = rest.parse().map_err(|_| Error::Parse(format!("bad genus `{rest}`")))?;
            return Ok(GroupSpec::GSp { g });
        }
        if let Some(path) = s.strip_prefix("generated:@") {
            return Ok(GroupSpec::generated_from_file(path)?.0);
        }
        Err(Error::Parse(format!("unknown group spec `{s}`")))
    }
}
