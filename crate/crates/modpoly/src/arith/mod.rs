//! Exact base arithmetic: p-adic valuations, primality, truncated integer
//! Laurent series, polynomials over F_p, and ramified local rings.

mod fp;
mod local;
mod series;

pub use fp::FpPoly;
pub use local::{LocalElement, LocalRing};
pub use series::IntSeries;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Add;

use crate::{Error, Result};

/// A p-adic valuation: a finite integer or +infinity (the valuation of 0).
///
/// Ordering and addition follow the usual conventions (infinity dominates).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    /// The finite value, panicking on infinity. Call sites guard with
    /// `is_finite` or know the argument is nonzero.
    pub fn finite(self) -> i64 {
        match self {
            Valuation::Finite(v) => v,
            Valuation::Infinity => panic!("valuation is infinite"),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Valuation::*;
        match (self, other) {
            (Infinity, Infinity) => std::cmp::Ordering::Equal,
            (Infinity, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinity) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        use Valuation::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Exact p-adic valuation of an integer; v_p(0) = infinity.
pub fn vp(n: &BigInt, p: u64) -> Result<Valuation> {
    require_prime(p)?;
    Ok(vp_unchecked(n, p))
}

pub(crate) fn vp_unchecked(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinity;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0i64;
    // Divide out p in exponentially growing chunks; a plain one-at-a-time
    // loop is quadratic in v for the huge valuations met in compression.
    let mut powers = vec![p.clone()];
    loop {
        let last = powers.last().unwrap();
        let sq = last * last;
        if (&n % &sq).is_zero() {
            powers.push(sq);
        } else {
            break;
        }
    }
    for (k, q) in powers.iter().enumerate().rev() {
        let (quot, rem) = n.div_rem(q);
        if rem.is_zero() {
            n = quot;
            v += 1i64 << k;
        }
    }
    debug_assert!(!(&n % &p).is_zero());
    Valuation::Finite(v)
}

/// p-adic valuation of a rational: v_p(num) - v_p(den).
pub fn vp_rational(x: &BigRational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    let vn = vp_unchecked(x.numer(), p).finite();
    let vd = vp_unchecked(x.denom(), p).finite();
    Valuation::Finite(vn - vd)
}

/// Exact valuation computed through a residue cap: reduce n mod p^cap first
/// and only fall back to a bigger cap when the residue vanishes. Much cheaper
/// than dividing a multi-thousand-digit coefficient by p several thousand
/// times when the expected valuation is small relative to the size of n.
pub fn vp_capped(n: &BigInt, p: u64, initial_cap: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinity;
    }
    let mut cap = initial_cap.max(4);
    loop {
        let modulus = BigInt::from(p).pow(cap as u32);
        let r = n % &modulus;
        if !r.is_zero() {
            return vp_unchecked(&r, p);
        }
        // n != 0, so some cap eventually exposes a nonzero residue.
        cap *= 2;
    }
}

/// Trial-division factorisation, smallest prime first.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Möbius function.
pub fn moebius(n: u64) -> i64 {
    let fs = factor(n);
    if fs.iter().any(|&(_, e)| e > 1) {
        0
    } else if fs.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sum of divisors.
pub fn sigma1(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .map(|(p, e)| (0..=e).map(|k| p.pow(k)).sum::<u64>())
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime((1 << 31) - 1));
        assert!(!is_prime(1_000_000_007u64 * 3));
    }

    #[test]
    fn vp_examples() {
        assert_eq!(vp(&BigInt::from(1500), 5).unwrap(), Valuation::Finite(3));
        assert_eq!(vp(&BigInt::from(-1500), 5).unwrap(), Valuation::Finite(3));
        assert_eq!(vp(&BigInt::zero(), 7).unwrap(), Valuation::Infinity);
        assert_eq!(vp(&BigInt::one(), 2).unwrap(), Valuation::Finite(0));
        assert!(matches!(vp(&BigInt::one(), 6), Err(Error::NotPrime(6))));
    }

    #[test]
    fn vp_capped_matches_exact() {
        let n = BigInt::from(2).pow(901) * BigInt::from(3).pow(7) - BigInt::zero();
        assert_eq!(vp_capped(&n, 2, 8), Valuation::Finite(901));
        assert_eq!(vp_capped(&n, 3, 8), Valuation::Finite(7));
        assert_eq!(vp_capped(&n, 5, 8), Valuation::Finite(0));
    }

    #[test]
    fn vp_rational_signs() {
        let x = BigRational::new(BigInt::from(8), BigInt::from(27));
        assert_eq!(vp_rational(&x, 2), Valuation::Finite(3));
        assert_eq!(vp_rational(&x, 3), Valuation::Finite(-3));
        assert_eq!(vp_rational(&x, 5), Valuation::Finite(0));
    }

    #[test]
    fn factor_sigma_moebius() {
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(sigma1(6), 12);
        assert_eq!(sigma1(49), 57);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(1), 1);
    }

    #[test]
    fn valuation_ordering() {
        use Valuation::*;
        assert!(Finite(3) < Finite(4));
        assert!(Finite(1000) < Infinity);
        assert_eq!(Finite(2) + Finite(5), Finite(7));
        assert_eq!(Finite(2) + Infinity, Infinity);
    }
}
