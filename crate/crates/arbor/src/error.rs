use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BadReason {
    Denominator,
    Discriminant,
    Excluded,
}

impl fmt::Display for BadReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BadReason::Denominator => "denominator",
            BadReason::Discriminant => "discriminant",
            BadReason::Excluded => "configured exclusion",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("group of predicted order {predicted} exceeds the enumeration guard {guard}")]
    CardinalityGuardExceeded { predicted: String, guard: u64 },
    #[error("unsupported group spec: {0}")]
    UnsupportedSpec(String),
    #[error("bad reduction at p = {p} ({reason})")]
    BadReduction { p: u64, reason: BadReason },
    #[error("no annihilator found in [{lo}, {hi}]")]
    NotFound { lo: u128, hi: u128 },
    #[error("series increments stopped decaying at g = {0}")]
    DivergenceDetected(usize),
    #[error("inexact Somos division at index {0}")]
    NonIntegralTerm(usize),
    #[error("unknown reference table `{0}`")]
    UnknownReference(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("at p = {p}: {source}")]
    AtPrime { p: u64, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;
