//! Exact arithmetic: rationals, Z/ℓⁿ, finite fields, polynomials, primes.

pub mod factor;
pub mod field;
pub mod modular;
pub mod poly;
pub mod qpoly;
pub mod residue;
pub mod sieve;
pub mod smith;
pub mod valuation;

use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use factor::{factorize, factorize_u128};
pub use field::{Field, Fp, Fq, FqElem};
pub use qpoly::QPoly;
pub use residue::{ResidueInt, Zmod};
pub use sieve::sieve_primes;
pub use smith::smith_valuations;
pub use valuation::{ell_free_part, ord_ell, Valuation};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Decimal rendering with a fixed number of places (rounded half up).
pub fn to_decimal(x: &BigRational, places: usize) -> String {
    use num_traits::{Signed, Zero};
    let neg = x.is_negative();
    let a = x.abs();
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled: BigInt = (a.numer() * &scale * 2 + a.denom()) / (a.denom() * 2);
    let ip = &scaled / &scale;
    let fp = &scaled % &scale;
    let mut s = String::new();
    if neg && !scaled.is_zero() {
        s.push('-');
    }
    s.push_str(&ip.to_string());
    if places > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", fp.to_string(), width = places));
    }
    s
}

pub fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
