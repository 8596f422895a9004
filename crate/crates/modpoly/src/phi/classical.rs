//! Modular polynomial computation from q-expansions.
//!
//! For prime level ell, Phi_ell(X, j) = prod over the ell+1 roots
//! j(q^ell), j(zeta^a q^(1/ell)). Power sums of the roots are read off from
//! dissections of powers of j, elementary symmetric functions come out of
//! Newton's identities over Z, and each one is then rewritten as an integer
//! polynomial in j by eliminating leading Laurent terms against powers of j.
//!
//! The ell small roots j(zeta^a q^(1/ell)) are handled separately from the
//! large root j(q^ell): their power sums ell * D_ell[j^k] have pole order at
//! most 1, so the Newton recursion stays in low-pole series and the large
//! root is multiplied back in afterwards. This keeps the base precision of
//! j near 2 ell^2 instead of ell^3.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{jfun, psi, BivarPoly};
use crate::arith::IntSeries;
use crate::{Error, Result};

/// Largest level accepted by compute_phi. Coefficient sizes grow fast enough
/// that bigger levels belong in precomputed data files, not live computation.
pub const COMPUTE_LEVEL_CEILING: u64 = 13;

/// Compute the classical modular polynomial of prime level ell from scratch.
pub fn compute_phi(ell: u64) -> Result<BivarPoly> {
    if !crate::arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell > COMPUTE_LEVEL_CEILING {
        return Err(Error::LevelCeiling(ell));
    }
    let mut extra: i64 = 0;
    let mut last = None;
    for _ in 0..5 {
        match compute_phi_with_window(ell, extra) {
            Ok(p) => return Ok(p),
            Err(e @ Error::PrecisionExhausted { .. }) => {
                let base = 3 + 2 * ell as i64 + 4 + extra;
                extra += Integer::div_ceil(&base, &4);
                last = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("retry loop runs at least once"))
}

fn compute_phi_with_window(ell: u64, extra: i64) -> Result<BivarPoly> {
    let l = ell as i64;
    let deg = psi(ell)? as usize; // ell + 1 for prime ell
    let tail = 3; // final polynomial identities are checked on [., tail)
    let assembly = tail + l; // precision needed of epsilon_k before the large root joins
    let small = tail + 2 * l + 4 + extra; // precision of the small-root power sums
    let base = l * small + 2; // precision of j itself

    let j = jfun::j_series(base)?;

    // Power sums of the ell small roots: p_k = ell * D_ell[j^k].
    let mut psums: Vec<IntSeries> = Vec::with_capacity(deg);
    {
        let ellz = BigInt::from(ell);
        let mut jpow = j.clone();
        for k in 0..deg - 1 {
            if k > 0 {
                jpow = jpow.mul(&j);
            }
            psums.push(jpow.dissect(l).scale(&ellz).truncate(small));
        }
    }

    // Newton's identities over Z: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i.
    let mut eps: Vec<IntSeries> = Vec::with_capacity(deg);
    {
        let e0 = IntSeries::constant(1, small);
        for k in 1..deg {
            let mut acc = IntSeries::zero_to(small);
            for i in 1..=k {
                let prev = if k - i == 0 { &e0 } else { &eps[k - i - 1] };
                let term = prev.mul(&psums[i - 1]);
                acc = if i % 2 == 1 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            eps.push(divide_series_exact(&acc, k as i64)?);
        }
    }

    // Fold the large root j(q^ell) back in:
    // e_k(all roots) = eps_k + j(q^ell) * eps_{k-1}.
    let jql = j
        .truncate(Integer::div_ceil(&(assembly + l), &l) + 2)
        .inflate(l);
    let mut esyms: Vec<IntSeries> = Vec::with_capacity(deg);
    {
        let e0 = IntSeries::constant(1, small);
        for k in 1..=deg {
            let prev = if k == 1 { &e0 } else { &eps[k - 2] };
            let folded = jql.mul(prev);
            let own = if k <= deg - 1 {
                eps[k - 1].clone()
            } else {
                IntSeries::zero_to(folded.prec())
            };
            esyms.push(own.add(&folded));
        }
    }

    // Rewrite each e_k as an integer polynomial in j and collect the
    // bivariate coefficients: Phi = sum_k (-1)^k e_k X^(psi - k).
    let jelim = elimination_powers(&j, deg, tail);
    let mut entries: Vec<((u32, u32), BigInt)> = vec![((deg as u32, 0), BigInt::one())];
    for (k, e) in esyms.iter().enumerate() {
        let k = k + 1;
        let coeffs = eliminate(e, &jelim)?;
        let xdeg = (deg - k) as u32;
        for (d, c) in coeffs {
            let signed = if k % 2 == 1 { -c } else { c };
            entries.push(((xdeg, d as u32), signed));
        }
    }
    // Only the X-side triangle was produced; mirror it for the constructor.
    let mirrored: Vec<_> = entries
        .iter()
        .filter(|((i, j), _)| i != j)
        .map(|&((i, j), ref c)| ((j, i), c.clone()))
        .collect();
    entries.extend(mirrored);
    BivarPoly::new(ell, entries)
}

/// Powers j^0 .. j^deg windowed just deep enough for elimination remainders
/// to stay checkable on [., tail).
fn elimination_powers(j: &IntSeries, deg: usize, tail: i64) -> Vec<IntSeries> {
    let top = tail + deg as i64 + 1;
    let mut out = Vec::with_capacity(deg + 1);
    out.push(IntSeries::constant(1, top));
    let jt = j.truncate(top);
    for d in 1..=deg {
        let next = out[d - 1].mul(&jt);
        out.push(next);
    }
    out
}

/// Express a Laurent series with pole order <= deg as an integer polynomial
/// in j, by repeatedly subtracting c * j^d at the leading term. The
/// remainder must vanish identically on its (nonempty) known window.
fn eliminate(e: &IntSeries, jelim: &[IntSeries]) -> Result<Vec<(usize, BigInt)>> {
    let mut out = Vec::new();
    let mut work = e.clone();
    loop {
        if work.prec() < 2 {
            return Err(Error::PrecisionExhausted {
                window: work.prec(),
                what: "series exhausted before the remainder check".into(),
            });
        }
        match work.ord() {
            Some(m) if m <= 0 => {
                let d = (-m) as usize;
                if d >= jelim.len() {
                    return Err(Error::PrecisionExhausted {
                        window: work.prec(),
                        what: format!("pole order {d} exceeds the degree bound"),
                    });
                }
                let c = work.coeff(m);
                work = work.sub_scaled(&jelim[d], &c);
                out.push((d, c));
            }
            Some(_) => {
                return Err(Error::PrecisionExhausted {
                    window: work.prec(),
                    what: "nonzero remainder after eliminating all poles".into(),
                });
            }
            None => break,
        }
    }
    Ok(out)
}

/// Divide every known coefficient by k, requiring exactness (Newton's
/// identities hold over Z).
fn divide_series_exact(s: &IntSeries, k: i64) -> Result<IntSeries> {
    if k == 1 {
        return Ok(s.clone());
    }
    let kb = BigInt::from(k);
    let lead = s.lead();
    let prec = s.prec();
    let mut coeffs = Vec::with_capacity((prec - lead) as usize);
    for e in lead..prec {
        let c = s.coeff(e);
        let (q, r) = c.div_rem(&kb);
        if !r.is_zero() {
            return Err(Error::PrecisionExhausted {
                window: prec,
                what: format!("Newton identity division by {k} was not exact"),
            });
        }
        coeffs.push(q);
    }
    Ok(IntSeries::new(lead, coeffs, prec))
}

/// Check the Kronecker congruence
/// Phi_ell(X, Y) = (X^ell - Y)(X - Y^ell) mod ell for prime ell.
pub fn kronecker_congruence_holds(phi: &BivarPoly) -> bool {
    let ell = phi.level();
    if !crate::arith::is_prime(ell) {
        return false;
    }
    let lb = BigInt::from(ell);
    let el = ell as u32;
    // (X^ell - Y)(X - Y^ell) = X^(ell+1) - X^ell Y^ell - X Y + Y^(ell+1)
    let target = |i: u32, j: u32| -> BigInt {
        let mut t = BigInt::zero();
        if (i, j) == (el + 1, 0) || (i, j) == (0, el + 1) {
            t += 1;
        }
        if (i, j) == (el, el) || (i, j) == (1, 1) {
            t -= 1;
        }
        t
    };
    for i in 0..=el + 1 {
        for j in 0..=el + 1 {
            let diff = phi.coeff(i, j) - target(i, j);
            if !diff.mod_floor(&lb).is_zero() {
                return false;
            }
        }
    }
    true
}
