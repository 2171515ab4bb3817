use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::smith::image_log;
use crate::arith::valuation::big_pow;
use crate::arith::Zmod;
use crate::error::{Error, Result};

use super::enumerate::{close_affine, enumerate, CARDINALITY_GUARD};
use super::matrix::{AffineElement, ResidueMatrix};
use super::sample::sample_with;
use super::spec::GroupSpec;
use super::DensityInterval;

/// #(X·(Z/ℓⁿ)^d) for X = M − I already reduced mod ℓⁿ.
pub fn image_cardinality(x: &ResidueMatrix) -> BigUint {
    big_pow(x.ring.ell, image_log(&x.entries, x.d, &x.ring))
}

/// Histogram of Σ min(vᵢ, n) over the elementary divisors of M − I.
fn codim_histogram(elems: &[ResidueMatrix], d: usize, r: &Zmod) -> Vec<u64> {
    let len = d * r.n as usize + 1;
    elems
        .par_iter()
        .fold(
            || vec![0u64; len],
            |mut h, m| {
                let full = d as u32 * r.n;
                let s = full - image_log(&m.minus_identity().entries, d, r);
                h[s as usize] += 1;
                h
            },
        )
        .reduce(
            || vec![0u64; len],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// Exact level-n interval from an explicit list of group elements.
pub fn interval_from_elements(elems: &[ResidueMatrix], d: usize, ell: u64, n: u32) -> DensityInterval {
    let r = Zmod::new(ell, n);
    let hist = codim_histogram(elems, d, &r);
    let total = BigInt::from(elems.len());
    let top = d * n as usize;
    let mut upper = BigRational::zero();
    let mut lower = BigRational::zero();
    for (s, &c) in hist.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let w = BigRational::new(BigInt::from(c), BigInt::from(big_pow(ell, s as u32)) * &total);
        if s < n as usize {
            lower += &w;
        }
        upper += w;
        debug_assert!(s <= top);
    }
    DensityInterval { lower, upper, level: n }
}

/// Two-sided bounds on the fixed-point density from the level-n image.
pub fn density_level(spec: &GroupSpec, ell: u64, n: u32) -> Result<DensityInterval> {
    let elems = enumerate(spec, ell, n)?;
    Ok(interval_from_elements(&elems, spec.dim(), ell, n))
}

fn span(cols: &[Vec<u64>], r: &Zmod) -> HashSet<Vec<u64>> {
    let d = cols.first().map_or(0, |c| c.len());
    let zero = vec![0; d];
    let mut seen = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(v) = queue.pop_front() {
        for c in cols {
            let w: Vec<u64> = v.iter().zip(c).map(|(&a, &b)| r.add(a, b)).collect();
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Fraction of elements (a, M) of the generated affine group with a ∈ im(M − I).
pub fn affine_fixed_fraction(generators: &[AffineElement]) -> Result<BigRational> {
    let group = close_affine(generators)?;
    let mut images: HashMap<Vec<u64>, HashSet<Vec<u64>>> = HashMap::new();
    let mut hits = 0u64;
    for el in &group {
        let lin = &el.linear;
        let img = images.entry(lin.entries.clone()).or_insert_with(|| {
            let x = lin.minus_identity();
            let cols: Vec<Vec<u64>> =
                (0..x.d).map(|j| (0..x.d).map(|i| x.get(i, j)).collect()).collect();
            span(&cols, &x.ring)
        });
        if img.contains(&el.translation) {
            hits += 1;
        }
    }
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(group.len())))
}

/// Generators of (Z/ℓⁿ)^d ⋊ T_n: every element of T_n plus the unit translations.
pub fn semidirect_generators(spec: &GroupSpec, ell: u64, n: u32) -> Result<Vec<AffineElement>> {
    let d = spec.dim();
    let r = Zmod::new(ell, n);
    let predicted = spec
        .predicted_order(ell, n)
        .map(|o| o * big_pow(ell, d as u32 * n))
        .and_then(|o| o.to_u64());
    if predicted.is_none_or(|p| p > CARDINALITY_GUARD) {
        return Err(Error::CardinalityGuardExceeded {
            predicted: predicted.map_or("unknown".into(), |p| p.to_string()),
            guard: CARDINALITY_GUARD,
        });
    }
    let mut gens: Vec<AffineElement> =
        enumerate(spec, ell, n)?.into_iter().map(|m| AffineElement::new(vec![0; d], m)).collect();
    for i in 0..d {
        let mut t = vec![0; d];
        t[i] = 1;
        gens.push(AffineElement::new(t, ResidueMatrix::identity(d, r)));
    }
    Ok(gens)
}

/// Monte Carlo estimate of the mean of ℓ^(−min(ord det(M−I), n)).
#[derive(Clone, Debug, Serialize)]
pub struct McEstimate {
    pub ell: u64,
    pub level: u32,
    pub samples: u64,
    /// counts[k] = draws with min(ord det(M−I), n) = k.
    pub counts: Vec<u64>,
    pub mean: f64,
    /// 99% normal-approximation half-width.
    pub half_width: f64,
}

impl McEstimate {
    pub fn exact_mean(&self) -> BigRational {
        let mut s = BigRational::zero();
        for (k, &c) in self.counts.iter().enumerate() {
            s += BigRational::new(BigInt::from(c), BigInt::from(big_pow(self.ell, k as u32)));
        }
        s / BigRational::from_integer(BigInt::from(self.samples))
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.mean).abs() <= self.half_width
    }
}

const MC_CHUNK: u64 = 1 << 14;
const Z_99: f64 = 2.5758293035489;

/// Deterministic for a given seed regardless of the thread count: each chunk of
/// draws has its own ChaCha stream.
pub fn density_mc(spec: &GroupSpec, ell: u64, n: u32, samples: u64, seed: u64) -> Result<McEstimate> {
    if !spec.is_named() {
        return Err(Error::UnsupportedSpec("Monte Carlo needs a named group".into()));
    }
    spec.validate(ell)?;
    if samples == 0 {
        return Err(Error::Invalid("need at least one sample".into()));
    }
    let r = Zmod::new(ell, n);
    let chunks = samples.div_ceil(MC_CHUNK);
    let len = n as usize + 1;
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Vec<u64>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let k = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut h = vec![0u64; len];
            for _ in 0..k {
                let m = sample_with(spec, ell, n, &mut rng)?;
                let det = m.minus_identity().det();
                h[r.ord_capped(det) as usize] += 1;
            }
            Ok(h)
        })
        .try_reduce(
            || vec![0u64; len],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )?;
    let nf = samples as f64;
    let (mut m1, mut m2) = (0.0, 0.0);
    for (k, &c) in counts.iter().enumerate() {
        let x = (ell as f64).powi(-(k as i32));
        m1 += c as f64 * x;
        m2 += c as f64 * x * x;
    }
    let mean = m1 / nf;
    let var = (m2 / nf - mean * mean).max(0.0) * nf / (nf - 1.0).max(1.0);
    let half_width = Z_99 * (var / nf).sqrt();
    Ok(McEstimate { ell, level: n, samples, counts, mean, half_width })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn image_examples() {
        let r = Zmod::new(2, 2);
        assert_eq!(image_cardinality(&ResidueMatrix::from_i64(2, r, &[0, 0, 0, 0])), BigUint::from(1u32));
        let r3 = Zmod::new(2, 3);
        assert_eq!(image_cardinality(&ResidueMatrix::from_i64(2, r3, &[1, 0, 0, 1])), BigUint::from(64u32));
        assert_eq!(image_cardinality(&ResidueMatrix::from_i64(2, r3, &[2, 0, 0, 2])), BigUint::from(16u32));
    }

    #[test]
    fn gl2_level_one() {
        let iv = density_level(&GroupSpec::GL2Full, 2, 1).unwrap();
        assert_eq!(iv.lower, rat(1, 3));
        assert_eq!(iv.upper, rat(5, 8));
        let sc = density_level(&GroupSpec::ScalarUnits, 2, 1).unwrap();
        assert_eq!(sc.lower, rat(0, 1));
        assert_eq!(sc.upper, rat(1, 2));
    }

    #[test]
    fn mc_is_worker_independent() {
        let spec = GroupSpec::GL2Full;
        let a = density_mc(&spec, 2, 3, 40_000, 7).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| density_mc(&spec, 2, 3, 40_000, 7).unwrap());
        assert_eq!(a.counts, b.counts);
    }
}
