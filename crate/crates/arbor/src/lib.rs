//! Densities of primes at which a rational point on a torus, elliptic curve
//! or genus-2 Jacobian has reduction of order prime to ℓ.

pub mod algebraic_groups;
pub mod arith;
pub mod cli;
pub mod densities;
pub mod error;
pub mod galdiag;
pub mod gsp_asym;
pub mod matgroups;
pub mod redscan;
pub mod somos;
pub mod verify;

pub use error::{Error, Result};
