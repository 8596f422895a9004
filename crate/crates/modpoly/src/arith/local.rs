//! Totally ramified local rings Z_p[x]/(f) for Eisenstein f, with exact
//! p-adic valuations.
//!
//! Elements are represented by their coordinate vector over the power basis
//! 1, theta, ..., theta^(e-1) with rational coordinates. For f Eisenstein of
//! degree e the valuation is normalized so that val(theta) = 1 and
//! val(p) = e, and equals min_i (e * v_p(c_i) + i) over nonzero coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{is_prime, vp_rational, Valuation};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRing {
    p: u64,
    /// Monic Eisenstein polynomial, ascending coefficients, length e+1.
    f: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalElement {
    /// Coordinates over 1, theta, ..., theta^(e-1).
    coords: Vec<BigRational>,
}

impl LocalRing {
    pub fn new(p: u64, f: Vec<BigInt>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let e = f.len().saturating_sub(1);
        if e == 0 {
            return Err(Error::NotEisenstein(p, "degree must be at least 1".into()));
        }
        if !f[e].is_one() {
            return Err(Error::NotEisenstein(p, "polynomial must be monic".into()));
        }
        let pb = BigInt::from(p);
        if (&f[0] % &pb).is_zero() && !(&f[0] / &pb % &pb).is_zero() {
            // v_p(f[0]) must be exactly 1
        } else {
            return Err(Error::NotEisenstein(
                p,
                "constant term must have p-valuation exactly 1".into(),
            ));
        }
        for (i, c) in f.iter().enumerate().take(e).skip(1) {
            if !(c % &pb).is_zero() {
                return Err(Error::NotEisenstein(
                    p,
                    format!("coefficient of x^{i} must be divisible by {p}"),
                ));
            }
        }
        Ok(LocalRing { p, f })
    }

    /// The unramified case e = 1, with uniformizer p itself.
    pub fn trivial(p: u64) -> Result<Self> {
        LocalRing::new(p, vec![BigInt::from(-(p as i64)), BigInt::one()])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.f
    }

    pub fn zero(&self) -> LocalElement {
        LocalElement {
            coords: vec![BigRational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> LocalElement {
        self.of_int(1)
    }

    pub fn of_int(&self, n: i64) -> LocalElement {
        self.of_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn of_rational(&self, r: BigRational) -> LocalElement {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[0] = r;
        LocalElement { coords }
    }

    /// The uniformizer theta (the class of x).
    pub fn theta(&self) -> LocalElement {
        let e = self.degree();
        if e == 1 {
            // theta is the root of the linear modulus
            return self.of_rational(BigRational::from_integer(-self.f[0].clone()));
        }
        let mut coords = vec![BigRational::zero(); e];
        coords[1] = BigRational::one();
        LocalElement { coords }
    }

    pub fn from_coords(&self, coords: Vec<BigRational>) -> Result<LocalElement> {
        if coords.len() != self.degree() {
            return Err(Error::RingMismatch {
                got: coords.len(),
                expected: self.degree(),
            });
        }
        Ok(LocalElement { coords })
    }

    pub fn add(&self, a: &LocalElement, b: &LocalElement) -> LocalElement {
        LocalElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &LocalElement, b: &LocalElement) -> LocalElement {
        LocalElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &LocalElement) -> LocalElement {
        LocalElement {
            coords: a.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, a: &LocalElement, c: &BigRational) -> LocalElement {
        LocalElement {
            coords: a.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn scale_int(&self, a: &LocalElement, c: i64) -> LocalElement {
        self.scale(a, &BigRational::from_integer(BigInt::from(c)))
    }

    pub fn mul(&self, a: &LocalElement, b: &LocalElement) -> LocalElement {
        let e = self.degree();
        let mut prod = vec![BigRational::zero(); 2 * e - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        // reduce mod the monic modulus f
        for d in (e..prod.len()).rev() {
            if prod[d].is_zero() {
                continue;
            }
            let top = std::mem::replace(&mut prod[d], BigRational::zero());
            for (k, fk) in self.f.iter().enumerate().take(e) {
                let t = &top * BigRational::from_integer(fk.clone());
                prod[d - e + k] -= t;
            }
        }
        prod.truncate(e);
        LocalElement { coords: prod }
    }

    pub fn pow(&self, a: &LocalElement, n: u32) -> LocalElement {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Normalized valuation: val(theta) = 1, val(p) = e.
    pub fn val(&self, a: &LocalElement) -> Valuation {
        let e = self.degree() as i64;
        let mut best = Valuation::Infinity;
        for (i, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = Valuation::Finite(e * vp_rational(c, self.p).finite() + i as i64);
            if v < best {
                best = v;
            }
        }
        best
    }

    pub fn is_zero(&self, a: &LocalElement) -> bool {
        a.coords.iter().all(|c| c.is_zero())
    }

    /// Horner evaluation of a polynomial with coefficients in the ring.
    pub fn eval_poly(&self, coeffs: &[LocalElement], x: &LocalElement) -> LocalElement {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }
}

impl LocalElement {
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }
}

impl std::fmt::Display for LocalElement {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(out, "{c}")?;
            } else if c.is_one() {
                write!(out, "t^{i}")?;
            } else if c.abs().is_one() && c.is_negative() {
                write!(out, "-t^{i}")?;
            } else {
                write!(out, "({c})*t^{i}")?;
            }
        }
        if first {
            write!(out, "0")?;
        }
        Ok(())
    }
}
