//! Closed-form densities as exact rationals, the counts behind them, and
//! cross-checks against finite-level intervals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{modular, rat, Zmod};
use crate::error::{Error, Result};
use crate::matgroups::{density_level, CartanKind, DensityInterval, GroupSpec};

fn check_prime(ell: u64) -> Result<()> {
    if modular::is_prime_u64(ell) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("ℓ = {ell} is not prime")))
    }
}

fn q(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

fn b(x: u64) -> BigInt {
    BigInt::from(x)
}

/// h(x) = (x² − x − 1)/(x² − 1).
pub fn h(x: &BigInt) -> BigRational {
    q(x * x - x - 1, x * x - 1)
}

/// Density for Z_ℓ ⋊ Z_ℓ^×.
pub fn gm_density(ell: u64) -> BigRational {
    h(&b(ell))
}

/// Density for the full GL₂(Z_ℓ) image.
pub fn gl2_density(ell: u64) -> BigRational {
    let l = b(ell);
    let p = |k: u32| num_traits::pow(l.clone(), k as usize);
    q(p(5) - p(4) - p(3) + &l + 1, p(5) - p(3) - p(2) + 1)
}

/// #{M ∈ GL₂(Z/ℓⁿ) : ord det(M − I) = n − 1}.
pub fn gl2_cn(ell: u64, n: u32) -> BigInt {
    assert!(n >= 1);
    let l = b(ell);
    let p = |k: u32| num_traits::pow(l.clone(), k as usize);
    if n == 1 {
        return p(4) - 2 * p(3) - p(2) + 3 * &l;
    }
    (&l - 1) * (&l - 1) * (&l + 1) * p(3 * n - 2) - (p(2) - 1) * p(2 * n - 1)
}

/// Pairs (α, β) mod ℓⁿ with αβ ≡ c, α ≡ a and β ≡ b mod ℓ; needs n ≥ 2.
pub fn pair_count(a: u64, bb: u64, c: u64, ell: u64, n: u32) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::Invalid("pair count needs n ≥ 2".into()));
    }
    let r = Zmod::new(ell, n);
    let (a, bb, c) = (a % ell, bb % ell, c % r.modulus);
    let l1 = num_traits::pow(b(ell), (n - 1) as usize);
    if (a * bb) % ell != c % ell {
        return Ok(BigInt::from(0));
    }
    if a != 0 || bb != 0 {
        return Ok(l1);
    }
    let n_i = BigInt::from(n);
    Ok(if c != 0 {
        let v = r.ord_capped(c);
        b(ell - 1) * BigInt::from(v as i64 - 1) * l1
    } else {
        (&n_i * b(ell) - &n_i - b(ell) + 2) * l1
    })
}

/// Cartan-type density for a CM curve.
pub fn cm_density(ell: u64, split: bool, normalizer: bool) -> BigRational {
    let l = b(ell);
    let cartan = if split { h(&l) * h(&l) } else { h(&(&l * &l)) };
    if normalizer {
        (cartan + h(&l)) / BigRational::from_integer(b(2))
    } else {
        cartan
    }
}

/// Density for scalar units acting on a rank-2 module.
pub fn split_torus_pair_density(ell: u64) -> BigRational {
    let l = b(ell);
    let l3 = &l * &l * &l;
    q(&l3 - &l * &l - &l - 1, l3 - 1)
}

/// General-ℓ bounds for GSp₄ from level-1 counts.
pub fn gsp4_bounds(ell: u64) -> DensityInterval {
    let l = b(ell);
    let p = |k: u32| num_traits::pow(l.clone(), k as usize);
    let lower = q(
        p(7) - 2 * p(6) - p(5) + 4 * p(4) - 2 * p(3) + 2 * p(2) - 5,
        (p(4) - 1) * (p(2) - 1) * (&l - 1),
    );
    let upper = q(p(7) - p(6) - p(5) + 3 * p(4) - 2 * p(3) + p(2) - 4, p(7) - p(5) - p(3) + &l);
    DensityInterval { lower, upper, level: 1 }
}

/// Sharper GSp₄ bounds (level 4 for ℓ = 2, level 2 for ℓ = 3), as reference data.
pub fn gsp4_table(ell: u64) -> Option<DensityInterval> {
    match ell {
        2 => Some(DensityInterval { lower: rat(26701, 46080), upper: rat(1201, 2048), level: 4 }),
        3 => Some(DensityInterval { lower: rat(70769, 103680), upper: rat(27203, 38880), level: 2 }),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    Gm,
    Gl2,
    Cm { split: bool, normalizer: bool },
    SplitTorusPair,
    Gsp4Bounds,
}

impl FromStr for Family {
    type Err = Error;

    /// `gm`, `gl2`, `cm:split:normalizer`, `cm:inert:cartan`, `split-torus-pair`, `gsp4-bounds`.
    fn from_str(s: &str) -> Result<Family> {
        Ok(match s {
            "gm" => Family::Gm,
            "gl2" => Family::Gl2,
            "split-torus-pair" => Family::SplitTorusPair,
            "gsp4-bounds" | "gsp4" => Family::Gsp4Bounds,
            _ => {
                let parts: Vec<&str> = s.split(':').collect();
                match parts.as_slice() {
                    ["cm", a, c] => {
                        let split = match *a {
                            "split" => true,
                            "inert" => false,
                            _ => return Err(Error::Parse(format!("expected split|inert, got `{a}`"))),
                        };
                        let normalizer = match *c {
                            "normalizer" => true,
                            "cartan" => false,
                            _ => {
                                return Err(Error::Parse(format!("expected cartan|normalizer, got `{c}`")))
                            }
                        };
                        Family::Cm { split, normalizer }
                    }
                    _ => return Err(Error::Parse(format!("unknown density family `{s}`"))),
                }
            }
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gm => f.write_str("gm"),
            Family::Gl2 => f.write_str("gl2"),
            Family::Cm { split, normalizer } => write!(
                f,
                "cm:{}:{}",
                if *split { "split" } else { "inert" },
                if *normalizer { "normalizer" } else { "cartan" }
            ),
            Family::SplitTorusPair => f.write_str("split-torus-pair"),
            Family::Gsp4Bounds => f.write_str("gsp4-bounds"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    Value(BigRational),
    Bounds(DensityInterval),
}

pub fn closed_form(family: Family, ell: u64) -> Result<ClosedForm> {
    check_prime(ell)?;
    Ok(match family {
        Family::Gm => ClosedForm::Value(gm_density(ell)),
        Family::Gl2 => ClosedForm::Value(gl2_density(ell)),
        Family::Cm { split, normalizer } => ClosedForm::Value(cm_density(ell, split, normalizer)),
        Family::SplitTorusPair => ClosedForm::Value(split_torus_pair_density(ell)),
        Family::Gsp4Bounds => ClosedForm::Bounds(gsp4_bounds(ell)),
    })
}

/// An x² + cx + d irreducible mod ℓ.
pub fn nonsplit_params(ell: u64) -> (i64, i64) {
    for c in 0..ell as i64 {
        for d in 1..ell as i64 {
            let disc = modular::reduce_i64(c * c - 4 * d, ell);
            let irreducible = if ell == 2 {
                c == 1 && d == 1
            } else {
                modular::legendre(disc, ell) == -1
            };
            if irreducible {
                return (c, d);
            }
        }
    }
    unreachable!("every prime has an irreducible quadratic")
}

/// The group whose fixed-point density a family describes.
pub fn family_spec(family: Family, ell: u64) -> GroupSpec {
    match family {
        Family::Gm => GroupSpec::ScalarUnits,
        Family::Gl2 => GroupSpec::GL2Full,
        Family::Cm { split, normalizer } => {
            let k = if split {
                CartanKind::Split
            } else {
                let (c, d) = nonsplit_params(ell);
                CartanKind::Nonsplit { c, d }
            };
            if normalizer {
                GroupSpec::CartanNormalizer(k)
            } else {
                GroupSpec::Cartan(k)
            }
        }
        Family::SplitTorusPair => GroupSpec::SplitTorusPair,
        Family::Gsp4Bounds => GroupSpec::GSp { g: 2 },
    }
}

/// Largest level whose group has at most `budget` elements (capped at `max_level`).
pub fn max_enumerable_level(spec: &GroupSpec, ell: u64, budget: u64, max_level: u32) -> u32 {
    let mut n = 1;
    while n < max_level {
        let next = spec.predicted_order(ell, n + 1).and_then(|o| o.to_u64());
        if next.is_none_or(|o| o > budget) || (ell as u128).pow(n + 1) >= 1 << 62 {
            break;
        }
        n += 1;
    }
    n
}

#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub family: Family,
    pub ell: u64,
    pub closed: ClosedForm,
    pub interval: DensityInterval,
    pub consistent: bool,
}

/// Compare a closed form with the enumerated interval at the largest cheap level.
/// Bounds are consistent when the lower bounds agree and the level-1 upper bound
/// does not exceed the closed-form upper bound.
pub fn cross_validate(family: Family, ell: u64, budget: u64) -> Result<CrossCheck> {
    let closed = closed_form(family, ell)?;
    let spec = family_spec(family, ell);
    let n = match family {
        Family::Gsp4Bounds => 1,
        _ => max_enumerable_level(&spec, ell, budget, 12),
    };
    let interval = density_level(&spec, ell, n)?;
    let consistent = match &closed {
        ClosedForm::Value(v) => interval.contains(v),
        ClosedForm::Bounds(b) => b.lower == interval.lower && interval.upper <= b.upper,
    };
    Ok(CrossCheck { family, ell, closed, interval, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        assert_eq!(gm_density(3), rat(5, 8));
        assert_eq!(gl2_density(3), rat(139, 208));
        assert_eq!(split_torus_pair_density(5), rat(47, 62));
        assert_eq!(gsp4_bounds(2).lower, rat(19, 45));
        assert_eq!(gsp4_bounds(2).upper, rat(32, 45));
        assert_eq!(nonsplit_params(3), (0, 1));
    }

    #[test]
    fn family_roundtrip() {
        for s in ["gm", "gl2", "cm:split:normalizer", "cm:inert:cartan", "split-torus-pair", "gsp4-bounds"] {
            assert_eq!(s.parse::<Family>().unwrap().to_string(), s);
        }
    }
}
