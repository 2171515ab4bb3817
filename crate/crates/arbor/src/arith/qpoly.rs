//! Polynomials with rational coefficients, lowest degree first.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<BigRational>);

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> QPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn zero() -> QPoly {
        QPoly(Vec::new())
    }

    pub fn x() -> QPoly {
        QPoly::from_ints(&[0, 1])
    }

    pub fn constant(c: BigRational) -> QPoly {
        QPoly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut r = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        QPoly::new(r)
    }

    pub fn pow(&self, e: u32) -> QPoly {
        (0..e).fold(QPoly::from_ints(&[1]), |acc, _| acc.mul(self))
    }

    pub fn divrem(&self, b: &QPoly) -> (QPoly, QPoly) {
        let db = b.degree().expect("division by the zero polynomial");
        let mut r = self.0.clone();
        if r.len() <= db {
            return (QPoly::zero(), self.clone());
        }
        let lb = b.lead();
        let mut quo = vec![BigRational::zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            let c = &r[i] / &lb;
            if c.is_zero() {
                continue;
            }
            for j in 0..=db {
                r[i - db + j] -= &c * &b.0[j];
            }
            quo[i - db] = c;
        }
        r.truncate(db);
        (QPoly::new(quo), QPoly::new(r))
    }

    pub fn monic(&self) -> QPoly {
        let l = self.lead();
        self.scale(&(BigRational::one() / l))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Substitute `g` for the variable.
    pub fn compose(&self, g: &QPoly) -> QPoly {
        self.0.iter().rev().fold(QPoly::zero(), |acc, c| acc.mul(g).add(&QPoly::constant(c.clone())))
    }

    pub fn resultant(&self, b: &QPoly) -> BigRational {
        let (Some(da), Some(db)) = (self.degree(), b.degree()) else {
            return BigRational::zero();
        };
        if db == 0 {
            return num_traits::pow(b.lead(), da);
        }
        if da < db {
            let s = if (da * db) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
            return s * b.resultant(self);
        }
        let r = self.divrem(b).1;
        let Some(dr) = r.degree() else { return BigRational::zero() };
        let s = if (da * db) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
        s * num_traits::pow(b.lead(), da - dr) * b.resultant(&r)
    }

    pub fn discriminant(&self) -> BigRational {
        let n = self.degree().expect("discriminant of the zero polynomial");
        let s = if (n * (n.saturating_sub(1)) / 2) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
        s * self.resultant(&self.derivative()) / self.lead()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}
