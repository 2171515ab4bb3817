use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::Zmod;

/// A d×d matrix over Z/ℓⁿ, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueMatrix {
    pub d: usize,
    pub ring: Zmod,
    pub entries: Vec<u64>,
}

impl ResidueMatrix {
    pub fn new(d: usize, ring: Zmod, entries: Vec<u64>) -> ResidueMatrix {
        assert_eq!(entries.len(), d * d);
        let entries = entries.into_iter().map(|x| x % ring.modulus).collect();
        ResidueMatrix { d, ring, entries }
    }

    pub fn from_i64(d: usize, ring: Zmod, entries: &[i64]) -> ResidueMatrix {
        assert_eq!(entries.len(), d * d);
        let e = entries.iter().map(|&x| ring.elem(x).value).collect();
        ResidueMatrix { d, ring, entries: e }
    }

    pub fn identity(d: usize, ring: Zmod) -> ResidueMatrix {
        let mut e = vec![0; d * d];
        for i in 0..d {
            e[i * d + i] = 1 % ring.modulus;
        }
        ResidueMatrix { d, ring, entries: e }
    }

    pub fn scalar(d: usize, ring: Zmod, u: u64) -> ResidueMatrix {
        let mut m = ResidueMatrix::identity(d, ring);
        for i in 0..d {
            m.entries[i * d + i] = u % ring.modulus;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.d + j]
    }

    pub fn mul(&self, o: &ResidueMatrix) -> ResidueMatrix {
        let d = self.d;
        let r = &self.ring;
        let mut e = vec![0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    e[i * d + j] = r.add(e[i * d + j], r.mul(a, o.entries[k * d + j]));
                }
            }
        }
        ResidueMatrix { d, ring: self.ring, entries: e }
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let d = self.d;
        let r = &self.ring;
        (0..d)
            .map(|i| (0..d).fold(0, |acc, j| r.add(acc, r.mul(self.entries[i * d + j], v[j]))))
            .collect()
    }

    /// M − I.
    pub fn minus_identity(&self) -> ResidueMatrix {
        let mut m = self.clone();
        for i in 0..self.d {
            let x = m.entries[i * self.d + i];
            m.entries[i * self.d + i] = self.ring.sub(x, 1);
        }
        m
    }

    pub fn transpose(&self) -> ResidueMatrix {
        let d = self.d;
        let mut e = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                e[j * d + i] = self.entries[i * d + j];
            }
        }
        ResidueMatrix { d, ring: self.ring, entries: e }
    }

    pub fn det(&self) -> u64 {
        det_mod(&self.entries, self.d, &self.ring)
    }

    pub fn is_invertible(&self) -> bool {
        self.ring.is_unit(self.det())
    }

    /// Reduce to a lower level m ≤ n.
    pub fn reduce(&self, m: u32) -> ResidueMatrix {
        let ring = Zmod::new(self.ring.ell, m);
        ResidueMatrix::new(self.d, ring, self.entries.clone())
    }
}

/// Determinant by Laplace expansion along the first row; d ≤ 6 in practice.
pub fn det_mod(a: &[u64], d: usize, r: &Zmod) -> u64 {
    match d {
        0 => 1 % r.modulus,
        1 => a[0],
        2 => r.sub(r.mul(a[0], a[3]), r.mul(a[1], a[2])),
        _ => {
            let mut total = 0;
            let mut minor = vec![0; (d - 1) * (d - 1)];
            for c in 0..d {
                if a[c] == 0 {
                    continue;
                }
                for i in 1..d {
                    let mut k = 0;
                    for j in 0..d {
                        if j != c {
                            minor[(i - 1) * (d - 1) + k] = a[i * d + j];
                            k += 1;
                        }
                    }
                }
                let t = r.mul(a[c], det_mod(&minor, d - 1, r));
                total = if c % 2 == 0 { r.add(total, t) } else { r.sub(total, t) };
            }
            total
        }
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.d {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.d {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        write!(f, "] mod {}", self.ring.modulus)
    }
}

/// An affine map γ ↦ a + Mγ on (Z/ℓⁿ)^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineElement {
    pub translation: Vec<u64>,
    pub linear: ResidueMatrix,
}

impl AffineElement {
    pub fn new(translation: Vec<u64>, linear: ResidueMatrix) -> AffineElement {
        assert_eq!(translation.len(), linear.d);
        let m = linear.ring.modulus;
        AffineElement { translation: translation.into_iter().map(|x| x % m).collect(), linear }
    }

    pub fn identity(d: usize, ring: Zmod) -> AffineElement {
        AffineElement { translation: vec![0; d], linear: ResidueMatrix::identity(d, ring) }
    }

    /// (a, M)·(b, N) = (a + Mb, MN).
    pub fn compose(&self, o: &AffineElement) -> AffineElement {
        let r = &self.linear.ring;
        let mb = self.linear.apply(&o.translation);
        let t = self.translation.iter().zip(mb).map(|(&x, y)| r.add(x, y)).collect();
        AffineElement { translation: t, linear: self.linear.mul(&o.linear) }
    }

    pub fn act(&self, g: &[u64]) -> Vec<u64> {
        let r = &self.linear.ring;
        self.linear.apply(g).into_iter().zip(&self.translation).map(|(x, &a)| r.add(x, a)).collect()
    }

    pub fn key(&self) -> Vec<u64> {
        let mut k = self.translation.clone();
        k.extend_from_slice(&self.linear.entries);
        k
    }
}
