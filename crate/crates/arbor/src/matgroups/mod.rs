//! Finite-level images of ℓ-adic matrix groups and their fixed-point densities.

pub mod density;
pub mod enumerate;
pub mod matrix;
pub mod sample;
pub mod spec;

use num_rational::BigRational;
use serde::Serialize;

pub use density::{
    affine_fixed_fraction, density_level, density_mc, image_cardinality, interval_from_elements,
    semidirect_generators, McEstimate,
};
pub use enumerate::{enumerate, gsp_multiplier, CARDINALITY_GUARD};
pub use matrix::{AffineElement, ResidueMatrix};
pub use sample::{haar_sample, sample_with};
pub use spec::{gl_order, sp_order, CartanKind, GeneratorSpec, GroupSpec};

/// Exact bounds lower ≤ F ≤ upper obtained at level n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityInterval {
    #[serde(serialize_with = "ser_rat")]
    pub lower: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub upper: BigRational,
    pub level: u32,
}

impl DensityInterval {
    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    /// Whether [lo, hi] ⊆ self.
    pub fn encloses(&self, lo: &BigRational, hi: &BigRational) -> bool {
        &self.lower <= lo && hi <= &self.upper
    }
}

pub(crate) fn ser_rat<S: serde::Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
