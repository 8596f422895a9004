//! Truncated integer Laurent series with explicit precision windows.
//!
//! A series stores exact coefficients for exponents in `[lead, prec)`.
//! Exponents below `lead` are exactly zero; exponents at or above `prec`
//! are unknown. Every operation computes the widest window justified by its
//! inputs, so precision bookkeeping never has to be done by callers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::par;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    lead: i64,
    prec: i64,
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    /// Build from the coefficient block for exponents `lead..prec`.
    pub fn new(lead: i64, coeffs: Vec<BigInt>, prec: i64) -> Self {
        assert_eq!(
            coeffs.len() as i64,
            prec - lead,
            "coefficient block must cover [lead, prec)"
        );
        let mut s = IntSeries { lead, prec, coeffs };
        s.normalize();
        s
    }

    /// The zero series, known to be zero below `prec`.
    pub fn zero_to(prec: i64) -> Self {
        IntSeries {
            lead: prec,
            prec,
            coeffs: Vec::new(),
        }
    }

    /// Constant series on the window `[0, prec)`.
    pub fn constant(c: impl Into<BigInt>, prec: i64) -> Self {
        assert!(prec > 0);
        let mut coeffs = vec![BigInt::zero(); prec as usize];
        coeffs[0] = c.into();
        IntSeries::new(0, coeffs, prec)
    }

    pub fn lead(&self) -> i64 {
        self.lead
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Exponent of the first nonzero known coefficient.
    pub fn ord(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|k| self.lead + k as i64)
    }

    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficient of q^e; panics if e is above the known window.
    pub fn coeff(&self, e: i64) -> BigInt {
        assert!(
            e < self.prec,
            "coefficient q^{e} beyond precision {}",
            self.prec
        );
        if e < self.lead {
            BigInt::zero()
        } else {
            self.coeffs[(e - self.lead) as usize].clone()
        }
    }

    fn normalize(&mut self) {
        let nz = self.coeffs.iter().position(|c| !c.is_zero());
        match nz {
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.lead += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.lead = self.prec;
            }
        }
    }

    /// Restrict the window to exponents below `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let keep = (prec - self.lead).max(0) as usize;
        let mut s = IntSeries {
            lead: self.lead.min(prec),
            prec,
            coeffs: self.coeffs[..keep].to_vec(),
        };
        s.normalize();
        s
    }

    /// Extend the known window with explicit zeros. Only valid when the
    /// caller knows the series is an exact polynomial (used by the Newton
    /// inversion loop, where the iterate is exact by construction).
    pub(crate) fn pad_to(&self, prec: i64) -> Self {
        if prec <= self.prec {
            return self.truncate(prec);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize((prec - self.lead) as usize, BigInt::zero());
        IntSeries {
            lead: self.lead,
            prec,
            coeffs,
        }
    }

    /// Multiply by q^d.
    pub fn shift_exponents(&self, d: i64) -> Self {
        IntSeries {
            lead: self.lead + d,
            prec: self.prec + d,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        IntSeries {
            lead: self.lead,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return IntSeries::zero_to(self.prec);
        }
        IntSeries {
            lead: self.lead,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled_impl(other, None, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled_impl(other, None, true)
    }

    /// self - c * other, on the common window.
    pub fn sub_scaled(&self, other: &Self, c: &BigInt) -> Self {
        self.add_scaled_impl(other, Some(c), true)
    }

    fn add_scaled_impl(&self, other: &Self, c: Option<&BigInt>, negate: bool) -> Self {
        let lead = self.lead.min(other.lead);
        let prec = self.prec.min(other.prec);
        let len = (prec - lead).max(0) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let e = lead + k as i64;
            if e >= self.lead {
                let idx = (e - self.lead) as usize;
                if idx < self.coeffs.len() {
                    *slot += &self.coeffs[idx];
                }
            }
            if e >= other.lead {
                let idx = (e - other.lead) as usize;
                if idx < other.coeffs.len() {
                    let term = match c {
                        Some(c) => &other.coeffs[idx] * c,
                        None => other.coeffs[idx].clone(),
                    };
                    if negate {
                        *slot -= term;
                    } else {
                        *slot += term;
                    }
                }
            }
        }
        IntSeries::new(lead, coeffs, prec)
    }

    /// Truncated product. The result window is the widest one determined by
    /// the factors: lead a+b, precision min(prec_a + lead_b, prec_b + lead_a).
    pub fn mul(&self, other: &Self) -> Self {
        let lead = self.lead + other.lead;
        let prec = (self.prec + other.lead).min(other.prec + self.lead);
        let len = (prec - lead).max(0) as usize;
        if self.coeffs.is_empty() || other.coeffs.is_empty() || len == 0 {
            return IntSeries {
                lead: prec.min(lead),
                prec,
                coeffs: Vec::new(),
            };
        }
        let (a, b) = (&self.coeffs, &other.coeffs);
        let coeffs = par::range_map(0, len, 192, |k| {
            let mut acc = BigInt::zero();
            let lo = k.saturating_sub(b.len() - 1);
            let hi = (k + 1).min(a.len());
            for i in lo..hi {
                acc += &a[i] * &b[k - i];
            }
            acc
        });
        IntSeries::new(lead, coeffs, prec)
    }

    /// Extract the coefficients with exponent divisible by `ell` and divide
    /// exponents by `ell` (the ell-dissection composed with q^(1/ell)
    /// substitution).
    pub fn dissect(&self, ell: i64) -> Self {
        assert!(ell >= 1);
        let m_lo = Integer::div_ceil(&self.lead, &ell);
        let m_hi = Integer::div_ceil(&self.prec, &ell);
        let len = (m_hi - m_lo).max(0) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let e = (m_lo + k as i64) * ell;
            if e >= self.lead && e < self.prec {
                *slot = self.coeffs[(e - self.lead) as usize].clone();
            }
        }
        IntSeries::new(m_lo, coeffs, m_hi)
    }

    /// Substitute q -> q^ell (exponents multiply by ell). Exponents that are
    /// not multiples of ell are exactly zero in the image, so the window
    /// extends to ell*prec.
    pub fn inflate(&self, ell: i64) -> Self {
        assert!(ell >= 1);
        let lead = self.lead * ell;
        let prec = self.prec * ell;
        let mut coeffs = vec![BigInt::zero(); (prec - lead) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * ell as usize] = c.clone();
        }
        IntSeries::new(lead, coeffs, prec)
    }

    /// Inverse of a unit power series (lead 0, constant coefficient ±1) by
    /// Newton doubling, to the window `[0, target)`.
    pub fn invert_unit(&self, target: i64) -> crate::Result<Self> {
        if self.lead != 0 || self.coeffs.is_empty() {
            return Err(crate::Error::EmptyWindow {
                lead: self.lead,
                prec: self.prec,
            });
        }
        let c0 = &self.coeffs[0];
        let one = BigInt::from(1);
        if c0 != &one && c0 != &(-&one) {
            return Err(crate::Error::PrecisionExhausted {
                window: self.prec,
                what: "series inversion needs a ±1 constant term".into(),
            });
        }
        assert!(target >= 1 && target <= self.prec);
        let two = IntSeries::constant(2, target);
        let mut x = IntSeries::constant(c0.clone(), 1);
        let mut n: i64 = 1;
        while n < target {
            let n2 = (2 * n).min(target);
            // x is exact as a polynomial, so padding its window is sound.
            let xp = x.pad_to(n2);
            let ax = self.truncate(n2).mul(&xp);
            let corr = two.truncate(n2).sub(&ax);
            x = xp.mul(&corr).truncate(n2).pad_to(n2);
            n = n2;
        }
        Ok(x)
    }
}
