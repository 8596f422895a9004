//! Vanishing orders C_J(N, p) = ord_X Phi_N(X + J, J) over F_p and over the
//! rationals, supersingular prime scans, and the average-order bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, pow_mod, FpPoly};
use crate::phi::BivarPoly;
use crate::{Error, Result};

/// ord_X of Phi_N(X + J, J) over F_p.
pub fn c_val_modp(phi: &BivarPoly, j: i64, p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pb = BigInt::from(p);
    let jr = BigInt::from(j)
        .mod_floor(&pb)
        .to_u64()
        .expect("residue fits");
    // substitute Y = J first, reducing row by row
    let deg = phi.psi() as usize;
    let mut jpow = vec![1u64; deg + 1];
    for k in 1..=deg {
        jpow[k] = crate::arith::mul_mod(jpow[k - 1], jr, p);
    }
    let mut u = vec![0u64; deg + 1];
    for (&(i, jy), c) in phi.iter() {
        let cr = c.mod_floor(&pb).to_u64().expect("residue fits");
        let term = crate::arith::mul_mod(cr, jpow[jy as usize], p);
        u[i as usize] = (u[i as usize] + term) % p;
    }
    let poly = FpPoly::new(p, u);
    let shifted = poly.shift_x(jr);
    Ok(shifted
        .ord_at_zero()
        .expect("Phi is monic, so its reduction is nonzero") as u32)
}

/// ord_X of Phi_N(X + J, J) in characteristic zero: the multiplicity of
/// X = J as a root of Phi_N(X, J).
pub fn c_val_char0(phi: &BivarPoly, j: i64) -> u32 {
    let jb = BigInt::from(j);
    root_multiplicity(phi.substitute_y(&jb), &jb)
}

/// Multiplicity of X = r as a root of the polynomial with coefficients u
/// (u[i] is the degree-i coefficient).
fn root_multiplicity(mut u: Vec<BigInt>, r: &BigInt) -> u32 {
    let mut mult = 0u32;
    loop {
        // synthetic division by (X - r); remainder is the value at r
        let mut carry = BigInt::zero();
        for c in u.iter_mut().rev() {
            let v = &carry * r + &*c;
            *c = std::mem::replace(&mut carry, v);
        }
        if !carry.is_zero() {
            return mult;
        }
        mult += 1;
        // quotient sits in the low slots, top slot is the zeroed-out leading term
        u.pop();
        if u.is_empty() {
            return mult;
        }
    }
}

/// Kronecker symbol chi_D(q) = (D|q) for prime q and a negative discriminant
/// D = 0, 1 mod 4.
pub fn kronecker_chi(d: i64, q: u64) -> Result<i32> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::BadDiscriminant(d));
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == 2 {
        return Ok(match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        });
    }
    let a = d.rem_euclid(q as i64) as u64;
    if a == 0 {
        return Ok(0);
    }
    let ls = pow_mod(a, (q - 1) / 2, q);
    Ok(if ls == 1 { 1 } else { -1 })
}

/// Multiplicative upper bound prod_{q | N} (1 + chi_D(q))^(v_q(N)) for the
/// vanishing order at an ordinary CM point with discriminant D.
pub fn ordinary_bound(n: u64, d: i64) -> Result<u64> {
    if n == 0 {
        return Err(Error::BadLevel);
    }
    let mut out: u64 = 1;
    for (q, e) in crate::arith::factor(n) {
        let chi = kronecker_chi(d, q)?;
        let base = (1 + chi) as u64; // chi = -1 kills the product
        out *= base.pow(e);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanEntry {
    pub p: u64,
    pub c: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub level: u64,
    pub j: i64,
    pub disc: i64,
    pub char0: u32,
    pub pmax: u64,
    /// Primes with C_J(N, p) strictly above the characteristic-zero value.
    pub entries: Vec<ScanEntry>,
    /// Entries at or beyond |D| N. Nonempty means a counterexample to the
    /// finiteness bound and deserves a close look.
    pub beyond_bound: Vec<ScanEntry>,
    pub warnings: Vec<String>,
}

/// Scan primes p <= pmax, p not dividing N, for C_J(N, p) > C_J(N, 0).
/// J must be the singular modulus attached to the discriminant D, which
/// controls where such primes can live: all of them sit below |D| N.
pub fn ss_prime_scan(phi: &BivarPoly, j: i64, d: i64, pmax: u64) -> Result<ScanReport> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::BadDiscriminant(d));
    }
    let n = phi.level();
    let bound = d.unsigned_abs() * n;
    if pmax < bound {
        return Err(Error::ScanBoundTooSmall { pmax, bound });
    }
    let char0 = c_val_char0(phi, j);
    let primes: Vec<u64> = (2..=pmax).filter(|&p| is_prime(p) && n % p != 0).collect();
    let cvals = crate::par::slice_map(&primes, 16, |&p| c_val_modp(phi, j, p).expect("p is prime"));
    let mut entries = Vec::new();
    let mut beyond = Vec::new();
    for (&p, &c) in primes.iter().zip(&cvals) {
        if c > char0 {
            let entry = ScanEntry { p, c };
            if p >= bound {
                beyond.push(entry.clone());
            }
            entries.push(entry);
        }
    }
    let mut warnings = Vec::new();
    if char0 > 0 {
        warnings.push(format!(
            "C_J(N, 0) = {char0} > 0: excess vanishing is measured relative to it"
        ));
    }
    Ok(ScanReport {
        level: n,
        j,
        disc: d,
        char0,
        pmax,
        entries,
        beyond_bound: beyond,
        warnings,
    })
}

/// lambda_N = sum over maximal prime powers p^n || N of
/// (p^n - 1) / (p^(n-1) (p^2 - 1)) * ln p.
pub fn lambda_n(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::BadLevel);
    }
    let mut out = 0.0;
    for (p, e) in crate::arith::factor(n) {
        let pn = p.pow(e) as f64;
        let pf = p as f64;
        out += (pn - 1.0) / (pn / pf * (pf * pf - 1.0)) * pf.ln();
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AvgBoundReport {
    pub level: u64,
    pub lambda: f64,
    /// sum of C_0(N, p) ln p over primes p < 3N not dividing N
    pub lhs: f64,
    /// 2 psi(N) (ln N - lambda_N + 8.2)
    pub rhs: f64,
    pub holds: bool,
    pub char0: u32,
    pub terms: Vec<ScanEntry>,
}

/// Check the average-order inequality for the vanishing of Phi_N(X + 0, 0)
/// across supersingular characteristics. Only meaningful for odd N.
pub fn avg_bound_check(phi: &BivarPoly) -> Result<AvgBoundReport> {
    let n = phi.level();
    if n % 2 == 0 {
        return Err(Error::EvenLevel(n));
    }
    let char0 = c_val_char0(phi, 0);
    let primes: Vec<u64> = (2..3 * n).filter(|&p| is_prime(p) && n % p != 0).collect();
    let cvals = crate::par::slice_map(&primes, 16, |&p| c_val_modp(phi, 0, p).expect("p is prime"));
    let mut lhs = 0.0;
    let mut terms = Vec::new();
    for (&p, &c) in primes.iter().zip(&cvals) {
        if c > 0 {
            lhs += c as f64 * (p as f64).ln();
            terms.push(ScanEntry { p, c });
        }
    }
    let lambda = lambda_n(n)?;
    let psi = phi.psi() as f64;
    let rhs = 2.0 * psi * ((n as f64).ln() - lambda + 8.2);
    Ok(AvgBoundReport {
        level: n,
        lambda,
        lhs,
        rhs,
        holds: lhs <= rhs,
        char0,
        terms,
    })
}
