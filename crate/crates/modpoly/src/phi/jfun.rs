//! q-expansions of the classical modular functions feeding the modular
//! polynomial computation: E4, the discriminant, and j = E4^3 / Delta.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::IntSeries;

/// Sum of cubes of divisors.
pub fn sigma3(n: u64) -> u64 {
    let mut out = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out += d * d * d;
            let e = n / d;
            if e != d {
                out += e * e * e;
            }
        }
        d += 1;
    }
    out
}

/// E4 = 1 + 240 sum sigma3(n) q^n, on the window [0, prec).
pub fn e4(prec: i64) -> IntSeries {
    assert!(prec >= 1);
    let mut c = vec![BigInt::zero(); prec as usize];
    c[0] = BigInt::one();
    for n in 1..prec as u64 {
        c[n as usize] = BigInt::from(240u64 * sigma3(n));
    }
    IntSeries::new(0, c, prec)
}

/// The Euler product prod (1 - q^n) on [0, prec), by the pentagonal number
/// expansion: sum_{k in Z} (-1)^k q^(k(3k-1)/2).
fn euler_product(prec: i64) -> IntSeries {
    let mut c = vec![BigInt::zero(); prec as usize];
    let mut k: i64 = 0;
    loop {
        let mut placed = false;
        for kk in [k, -k] {
            let e = kk * (3 * kk - 1) / 2;
            if e < prec {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                c[e as usize] += BigInt::from(sign);
                placed = true;
            }
            if kk == 0 {
                break;
            }
        }
        if !placed && k > 0 {
            break;
        }
        k += 1;
    }
    IntSeries::new(0, c, prec)
}

/// Delta / q = prod (1 - q^n)^24 on [0, prec).
pub fn delta_over_q(prec: i64) -> IntSeries {
    let e = euler_product(prec);
    let e2 = e.mul(&e);
    let e4 = e2.mul(&e2);
    let e8 = e4.mul(&e4);
    e8.mul(&e8).mul(&e8)
}

/// Delta = q prod (1 - q^n)^24 on the window [1, prec).
pub fn delta(prec: i64) -> IntSeries {
    delta_over_q(prec - 1).shift_exponents(1)
}

/// j = E4^3 / Delta, with lead -1, exact on the window [-1, prec).
pub fn j_series(prec: i64) -> crate::Result<IntSeries> {
    let p = prec + 1;
    let e4s = e4(p);
    let e4cubed = e4s.mul(&e4s).mul(&e4s);
    let inv = delta_over_q(p).invert_unit(p)?;
    Ok(e4cubed.mul(&inv).shift_exponents(-1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma3_small() {
        assert_eq!(sigma3(1), 1);
        assert_eq!(sigma3(2), 9);
        assert_eq!(sigma3(6), 1 + 8 + 27 + 216);
        assert_eq!(sigma3(7), 344);
    }

    #[test]
    fn delta_has_ramanujan_tau() {
        let d = delta(8);
        let tau = [1i64, -24, 252, -1472, 4830, -6048, -16744];
        for (k, t) in tau.iter().enumerate() {
            assert_eq!(d.coeff(1 + k as i64), BigInt::from(*t), "tau({})", k + 1);
        }
    }

    #[test]
    fn j_expansion_landmarks() {
        let j = j_series(4).unwrap();
        assert_eq!(j.lead(), -1);
        assert_eq!(j.coeff(-1), BigInt::one());
        assert_eq!(j.coeff(0), BigInt::from(744));
        assert_eq!(j.coeff(1), BigInt::from(196884));
        assert_eq!(j.coeff(2), BigInt::from(21493760));
        assert_eq!(j.coeff(3), BigInt::from(864299970u64));
    }

    #[test]
    fn j_times_delta_is_e4_cubed() {
        let prec = 24;
        let j = j_series(prec).unwrap();
        let d = delta(prec + 2);
        let lhs = j.mul(&d);
        let e4s = e4(prec as i64);
        let rhs = e4s.mul(&e4s).mul(&e4s);
        for e in 0..prec {
            assert_eq!(lhs.coeff(e), rhs.coeff(e), "exponent {e}");
        }
    }
}
