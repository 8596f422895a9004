//! Dense univariate polynomials over Z/pZ for small primes p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::mul_mod;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    /// Coefficients in ascending degree, each reduced into [0, p).
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        assert!(p >= 2);
        for x in &mut c {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_bigints(p: u64, coeffs: &[BigInt]) -> Self {
        let pb = BigInt::from(p);
        let c = coeffs
            .iter()
            .map(|x| x.mod_floor(&pb).to_u64().expect("residue fits u64"))
            .collect();
        FpPoly::new(p, c)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    /// Order of vanishing at X = 0; degree+1 (i.e. len) is returned as usize
    /// only for nonzero polynomials, None for the zero polynomial.
    pub fn ord_at_zero(&self) -> Option<usize> {
        self.c.iter().position(|&x| x != 0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.p;
        let mut acc = 0u64;
        for &ci in self.c.iter().rev() {
            acc = (mul_mod(acc, x, self.p) + ci) % self.p;
        }
        acc
    }

    /// Substitute X -> X + a (Taylor shift), via iterated synthetic division
    /// by (X - (-a)).
    pub fn shift_x(&self, a: u64) -> Self {
        let p = self.p;
        let a = a % p;
        if a == 0 || self.c.is_empty() {
            return self.clone();
        }
        // f(Y) = (Y - a) q(Y) + f(a) gives f(X + a) = X q(X + a) + f(a),
        // so repeated synthetic division at a peels off the coefficients.
        let root = a;
        let mut work = self.c.clone();
        let mut out = vec![0u64; self.c.len()];
        for slot in out.iter_mut() {
            // divide work by (X - root); remainder is the next coefficient
            let mut carry = 0u64;
            for ci in work.iter_mut().rev() {
                let v = (mul_mod(carry, root, p) + *ci) % p;
                *ci = carry;
                carry = v;
            }
            *slot = carry;
            // quotient occupies the low slots; the top slot is now zero
            work.pop();
            if work.is_empty() {
                break;
            }
        }
        FpPoly::new(p, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_then_eval() {
        // f = X^3 + 2X + 5 over F_7; f(X+3) at 0 must equal f(3)
        let f = FpPoly::new(7, vec![5, 2, 0, 1]);
        let g = f.shift_x(3);
        assert_eq!(g.eval(0), f.eval(3));
        assert_eq!(g.eval(2), f.eval(5));
    }

    #[test]
    fn shift_inverse() {
        let f = FpPoly::new(13, vec![1, 4, 6, 0, 2, 11]);
        let g = f.shift_x(9).shift_x(13 - 9);
        assert_eq!(f, g);
    }

    #[test]
    fn ord_detection() {
        // X^2 (X - 1) over F_5 vanishes to order 2 at 0
        let f = FpPoly::new(5, vec![0, 0, 4, 1]);
        assert_eq!(f.ord_at_zero(), Some(2));
        assert_eq!(FpPoly::new(5, vec![0, 0]).ord_at_zero(), None);
    }
}
