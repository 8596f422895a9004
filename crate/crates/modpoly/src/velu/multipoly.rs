//! Sparse polynomials in (x0, x1, x2, x3, y0) with coefficients in a
//! [`LocalRing`]. Arithmetic lives on methods taking the ring, matching the
//! coefficient API; zero coefficients are never stored.

use std::collections::BTreeMap;

use crate::arith::{LocalElement, LocalRing, Valuation};

/// Exponents of (x0, x1, x2, x3, y0).
pub type Mono = [u8; 5];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    terms: BTreeMap<Mono, LocalElement>,
}

/// Variable indices for readable construction.
pub const X0: usize = 0;
pub const X1: usize = 1;
pub const X2: usize = 2;
pub const X3: usize = 3;
pub const Y0: usize = 4;

impl MultiPoly {
    pub fn zero() -> MultiPoly {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &LocalRing, c: LocalElement) -> MultiPoly {
        let mut out = MultiPoly::zero();
        out.add_term(ring, [0; 5], c);
        out
    }

    /// The monomial c * v for a single variable index.
    pub fn linear(ring: &LocalRing, v: usize, c: LocalElement) -> MultiPoly {
        let mut mono = [0u8; 5];
        mono[v] = 1;
        let mut out = MultiPoly::zero();
        out.add_term(ring, mono, c);
        out
    }

    pub fn monomial(ring: &LocalRing, mono: Mono, c: LocalElement) -> MultiPoly {
        let mut out = MultiPoly::zero();
        out.add_term(ring, mono, c);
        out
    }

    fn add_term(&mut self, ring: &LocalRing, mono: Mono, c: LocalElement) {
        if ring.is_zero(&c) {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = ring.add(slot.get(), &c);
                if ring.is_zero(&sum) {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, ring: &LocalRing, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(ring, *mono, c.clone());
        }
        out
    }

    pub fn sub(&self, ring: &LocalRing, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(ring, *mono, ring.neg(c));
        }
        out
    }

    pub fn mul(&self, ring: &LocalRing, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut mono = [0u8; 5];
                for k in 0..5 {
                    mono[k] = ma[k].checked_add(mb[k]).expect("degree stays small");
                }
                out.add_term(ring, mono, ring.mul(ca, cb));
            }
        }
        out
    }

    pub fn scale(&self, ring: &LocalRing, c: &LocalElement) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (mono, v) in &self.terms {
            out.add_term(ring, *mono, ring.mul(v, c));
        }
        out
    }

    pub fn scale_rational(&self, ring: &LocalRing, c: &num_rational::BigRational) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (mono, v) in &self.terms {
            out.add_term(ring, *mono, ring.scale(v, c));
        }
        out
    }

    pub fn pow(&self, ring: &LocalRing, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(ring, ring.one());
        for _ in 0..n {
            acc = acc.mul(ring, self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &LocalElement)> {
        self.terms.iter()
    }

    /// Minimum coefficient valuation, Infinity for the zero polynomial.
    pub fn min_val(&self, ring: &LocalRing) -> Valuation {
        let mut best = Valuation::Infinity;
        for c in self.terms.values() {
            let v = ring.val(c);
            if v < best {
                best = v;
            }
        }
        best
    }

    /// Substitutes ring values for (x0, x1, x2, x3, y0).
    pub fn eval(&self, ring: &LocalRing, point: &[LocalElement; 5]) -> LocalElement {
        let mut acc = ring.zero();
        for (mono, c) in &self.terms {
            let mut term = c.clone();
            for (k, &exp) in mono.iter().enumerate() {
                if exp > 0 {
                    term = ring.mul(&term, &ring.pow(&point[k], exp as u32));
                }
            }
            acc = ring.add(&acc, &term);
        }
        acc
    }
}

pub fn mono_string(mono: &Mono) -> String {
    let names = ["x0", "x1", "x2", "x3", "y0"];
    let mut parts = Vec::new();
    for (k, &exp) in mono.iter().enumerate() {
        match exp {
            0 => {}
            1 => parts.push(names[k].to_string()),
            _ => parts.push(format!("{}^{}", names[k], exp)),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}
