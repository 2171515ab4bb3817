use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::Zmod;
use crate::error::{Error, Result};

use super::enumerate::{cartan_coset_element, cartan_element, cartan_is_unit, pairing, s3_matrices};
use super::matrix::ResidueMatrix;
use super::spec::GroupSpec;

fn unit<R: Rng>(r: &Zmod, rng: &mut R) -> u64 {
    loop {
        let u = rng.gen_range(0..r.modulus);
        if r.is_unit(u) {
            return u;
        }
    }
}

fn vector<R: Rng>(d: usize, r: &Zmod, rng: &mut R) -> Vec<u64> {
    (0..d).map(|_| rng.gen_range(0..r.modulus)).collect()
}

/// Uniform element of Sp_{2g}(Z/ℓⁿ) built one symplectic pair at a time.
fn sample_sp<R: Rng>(g: usize, r: &Zmod, rng: &mut R) -> ResidueMatrix {
    let d = 2 * g;
    let mut span: Vec<Vec<u64>> = (0..d)
        .map(|i| {
            let mut e = vec![0; d];
            e[i] = 1;
            e
        })
        .collect();
    let mut entries = vec![0; d * d];
    for i in 0..g {
        let combo = |rng: &mut R, span: &[Vec<u64>]| {
            let mut v = vec![0; d];
            for s in span {
                let c = rng.gen_range(0..r.modulus);
                for k in 0..d {
                    v[k] = r.add(v[k], r.mul(c, s[k]));
                }
            }
            v
        };
        let e = loop {
            let e = combo(rng, &span);
            if e.iter().any(|&x| r.is_unit(x)) {
                break e;
            }
        };
        let s = span
            .iter()
            .find(|s| r.is_unit(pairing(&e, s, g, r)))
            .expect("primitive vector pairs to a unit");
        let inv = r.inv(pairing(&e, s, g, r)).unwrap();
        let w: Vec<u64> = s.iter().map(|&x| r.mul(x, inv)).collect();
        let v = combo(rng, &span);
        let c = r.sub(1, pairing(&e, &v, g, r));
        let f: Vec<u64> = (0..d).map(|k| r.add(v[k], r.mul(c, w[k]))).collect();
        for k in 0..d {
            entries[k * d + i] = e[k];
            entries[k * d + (d - 1 - i)] = f[k];
        }
        span = span
            .iter()
            .map(|s| {
                let sf = pairing(s, &f, g, r);
                let se = pairing(s, &e, g, r);
                (0..d).map(|k| r.add(r.sub(s[k], r.mul(sf, e[k])), r.mul(se, f[k]))).collect()
            })
            .collect();
    }
    ResidueMatrix { d, ring: *r, entries }
}

/// One exactly uniform element of the level-n group, drawn from `rng`.
pub fn sample_with<R: Rng>(spec: &GroupSpec, ell: u64, n: u32, rng: &mut R) -> Result<ResidueMatrix> {
    let r = Zmod::new(ell, n);
    let m = r.modulus;
    Ok(match spec {
        GroupSpec::GL2Full => loop {
            let x = ResidueMatrix { d: 2, ring: r, entries: vector(4, &r, rng) };
            if x.is_invertible() {
                break x;
            }
        },
        GroupSpec::Cartan(k) => loop {
            let (a, b) = (rng.gen_range(0..m), rng.gen_range(0..m));
            if cartan_is_unit(k, a, b, &r) {
                break cartan_element(k, a, b, &r);
            }
        },
        GroupSpec::CartanNormalizer(k) => {
            let coset = rng.gen_bool(0.5);
            loop {
                let (a, b) = (rng.gen_range(0..m), rng.gen_range(0..m));
                if cartan_is_unit(k, a, b, &r) {
                    let x = if coset { cartan_coset_element(k, a, b, &r) } else { cartan_element(k, a, b, &r) };
                    break x;
                }
            }
        }
        GroupSpec::GSp { g } => {
            let sp = sample_sp(*g, &r, rng);
            let mult = unit(&r, rng);
            let d = 2 * g;
            let mut diag = ResidueMatrix::identity(d, r);
            for i in *g..d {
                diag.entries[i * d + i] = mult;
            }
            sp.mul(&diag)
        }
        GroupSpec::SplitTorusPair => ResidueMatrix::scalar(2, r, unit(&r, rng)),
        GroupSpec::ScalarUnits => ResidueMatrix::scalar(1, r, unit(&r, rng)),
        GroupSpec::BigTorusS3 => {
            let s = s3_matrices()[rng.gen_range(0..6)];
            ResidueMatrix::from_i64(2, r, &s).mul(&ResidueMatrix::scalar(2, r, unit(&r, rng)))
        }
        GroupSpec::Generated { .. } => {
            return Err(Error::UnsupportedSpec("Haar sampling needs a named group".into()))
        }
    })
}

/// One Haar-random element for a 64-bit seed.
pub fn haar_sample(spec: &GroupSpec, ell: u64, n: u32, seed: u64) -> Result<ResidueMatrix> {
    spec.validate(ell)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(spec, ell, n, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroups::enumerate::gsp_multiplier;

    #[test]
    fn gsp_samples_are_similitudes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (ell, n) in [(2, 3), (3, 2), (5, 1)] {
            for _ in 0..200 {
                let m = sample_with(&GroupSpec::GSp { g: 2 }, ell, n, &mut rng).unwrap();
                assert!(gsp_multiplier(&m).is_some(), "{m}");
            }
        }
    }

    #[test]
    fn generated_is_unsupported() {
        let spec = GroupSpec::Generated { level: 1, dim: 1, generators: vec![] };
        assert!(matches!(haar_sample(&spec, 2, 1, 0), Err(Error::UnsupportedSpec(_))));
    }
}
