//! Congruence lower bounds on the coefficients a_{i,j} of Phi_N near
//! CM points: rules of the shape v_p(a_{i,j}) >= n_p (C - i - j), reports
//! with per-entry slack, and the machinery shared between the j = 0 family
//! and the general singular moduli.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::vp_capped;
use crate::cval::{c_val_char0, c_val_modp};
use crate::phi::BivarPoly;
use crate::Result;

pub mod interp;
pub mod singular;

pub use singular::{lookup_discriminant, singular_registry, SingularRecord};

/// One valuation rule: v_p >= ceil(n_num/n_den * (c - i - j)) on i + j < c.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundRule {
    pub prime: u64,
    pub n_num: i64,
    pub n_den: i64,
    /// Vanishing range: the rule constrains entries with i + j < c.
    pub c: i64,
    pub label: String,
}

impl BoundRule {
    pub fn new(prime: u64, n_num: i64, n_den: i64, c: i64, label: impl Into<String>) -> Self {
        BoundRule {
            prime,
            n_num,
            n_den,
            c,
            label: label.into(),
        }
    }

    /// Required valuation at (i, j), or None when the rule is vacuous there.
    pub fn bound(&self, i: u32, j: u32) -> Option<i64> {
        let s = self.c - i as i64 - j as i64;
        if s <= 0 {
            return None;
        }
        Some(num_integer::Integer::div_ceil(
            &(self.n_num * s),
            &self.n_den,
        ))
    }

    /// Residue cap to start exact valuation extraction from.
    fn initial_cap(&self) -> u64 {
        let top = num_integer::Integer::div_ceil(&(self.n_num * self.c), &self.n_den);
        (top.max(1) as u64) + 8
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlackEntry {
    pub i: u32,
    pub j: u32,
    pub val: i64,
    pub bound: i64,
    pub slack: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValuationReport {
    pub level: u64,
    pub rule: BoundRule,
    /// Entries examined (the i >= j triangle; the other half is symmetric).
    pub checked: usize,
    pub min_slack: Option<i64>,
    pub slacks: Vec<SlackEntry>,
    pub violations: Vec<SlackEntry>,
    pub note: Option<String>,
}

/// Evaluate one rule against coefficients supplied as (i, j, value) with
/// i >= j and value nonzero. Zero coefficients have infinite valuation and
/// never need checking.
fn check_rule<'a>(
    level: u64,
    entries: impl Iterator<Item = (u32, u32, &'a BigInt)>,
    rule: BoundRule,
) -> ValuationReport {
    let cap = rule.initial_cap();
    let mut slacks = Vec::new();
    for (i, j, c) in entries {
        let Some(bound) = rule.bound(i, j) else {
            continue;
        };
        debug_assert!(!c.is_zero());
        let val = vp_capped(c, rule.prime, cap).finite();
        slacks.push(SlackEntry {
            i,
            j,
            val,
            bound,
            slack: val - bound,
        });
    }
    let min_slack = slacks.iter().map(|s| s.slack).min();
    let violations = slacks.iter().filter(|s| s.slack < 0).cloned().collect();
    ValuationReport {
        level,
        rule,
        checked: slacks.len(),
        min_slack,
        slacks,
        violations,
        note: None,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MainReport {
    pub level: u64,
    pub reports: Vec<ValuationReport>,
    /// Set when the large-prime family is skipped because Phi_N(X, 0)
    /// already vanishes at X = 0 in characteristic zero.
    pub part4_note: Option<String>,
}

impl MainReport {
    pub fn total_violations(&self) -> usize {
        self.reports.iter().map(|r| r.violations.len()).sum()
    }
}

/// Verify the j = 0 congruence family for Phi_N:
/// v_2 >= 15 (psi - i - j) when N is odd;
/// v_3 >= ceil(9/2 (psi - i - j)) for N = 1 mod 3, >= 3 (psi - i - j)
/// for N = 2 mod 3;
/// v_5 >= 3 (psi - i - j) when 5 does not divide N;
/// and v_p >= 3 (C_0(N, p) - i - j) for p >= 11, p = 2 mod 3, p not
/// dividing N.
pub fn verify_thm_main(phi: &BivarPoly) -> Result<MainReport> {
    let n = phi.level();
    let psi = phi.psi() as i64;
    let mut rules = Vec::new();
    if n % 2 != 0 {
        rules.push(BoundRule::new(2, 15, 1, psi, "v2 >= 15 (psi - i - j)"));
    }
    match n % 3 {
        1 => rules.push(BoundRule::new(
            3,
            9,
            2,
            psi,
            "v3 >= ceil(9/2 (psi - i - j))",
        )),
        2 => rules.push(BoundRule::new(3, 3, 1, psi, "v3 >= 3 (psi - i - j)")),
        _ => {}
    }
    if n % 5 != 0 {
        rules.push(BoundRule::new(5, 3, 1, psi, "v5 >= 3 (psi - i - j)"));
    }

    let mut part4_note = None;
    let char0 = c_val_char0(phi, 0);
    if char0 > 0 {
        part4_note = Some(format!(
            "large-prime family skipped: Phi_{n}(X, 0) vanishes to order {char0} at X = 0 \
             in characteristic zero"
        ));
    } else {
        for p in (11..3 * n).filter(|&p| crate::arith::is_prime(p) && p % 3 == 2 && n % p != 0) {
            let c = c_val_modp(phi, 0, p)?;
            if c > 0 {
                rules.push(BoundRule::new(
                    p,
                    3,
                    1,
                    c as i64,
                    format!("v{p} >= 3 (C_0({n}, {p}) - i - j)"),
                ));
            }
        }
    }

    let reports = rules
        .into_iter()
        .map(|rule| check_rule(n, phi.lower().map(|(&(i, j), c)| (i, j, c)), rule))
        .collect();
    Ok(MainReport {
        level: n,
        reports,
        part4_note,
    })
}

/// Coefficients of f(Y + a) from f(Y), in place, exactly over Z.
pub(crate) fn taylor_shift(c: &mut [BigInt], a: &BigInt) {
    let len = c.len();
    if len < 2 || a.is_zero() {
        return;
    }
    for k in 0..len - 1 {
        for i in (k..len - 1).rev() {
            let t = &c[i + 1] * a;
            c[i] += t;
        }
    }
}

/// Dense coefficient matrix of Phi(X + a, Y + a), indexed [i][j].
pub fn shift_poly(phi: &BivarPoly, a: i64) -> Vec<Vec<BigInt>> {
    let deg = phi.psi() as usize;
    let ab = BigInt::from(a);
    let mut m = vec![vec![BigInt::zero(); deg + 1]; deg + 1];
    for (&(i, j), c) in phi.iter() {
        m[i as usize][j as usize] = c.clone();
    }
    for row in m.iter_mut() {
        taylor_shift(row, &ab);
    }
    // shift in X = transpose, shift rows, transpose back; done in place by
    // shifting columns through a scratch vector
    let mut col = vec![BigInt::zero(); deg + 1];
    for j in 0..=deg {
        for i in 0..=deg {
            col[i] = std::mem::take(&mut m[i][j]);
        }
        taylor_shift(&mut col, &ab);
        for i in 0..=deg {
            m[i][j] = std::mem::take(&mut col[i]);
        }
    }
    m
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SingularReport {
    pub level: u64,
    pub disc: i64,
    pub j: i64,
    pub char0: u32,
    pub primes_tested: Vec<u64>,
    pub reports: Vec<ValuationReport>,
}

impl SingularReport {
    pub fn total_violations(&self) -> usize {
        self.reports.iter().map(|r| r.violations.len()).sum()
    }
}

/// Verify the CM congruence family at the singular modulus attached to a
/// class-number-one discriminant D: for every prime p < |D| N, coprime to N
/// and non-split in the order (chi_D(p) != 1),
/// v_p(coefficients of Phi_N(X + J, Y + J)) >= n_p (C_J(N, p) - i - j).
pub fn verify_singular(phi: &BivarPoly, d: i64) -> Result<SingularReport> {
    let rec = lookup_discriminant(d)?;
    let n = phi.level();
    let shifted = shift_poly(phi, rec.j);
    let char0 = c_val_char0(phi, rec.j);
    let bound = d.unsigned_abs() * n;
    let mut primes_tested = Vec::new();
    let mut reports = Vec::new();
    for p in (2..bound).filter(|&p| crate::arith::is_prime(p) && n % p != 0) {
        if crate::cval::kronecker_chi(d, p)? == 1 {
            continue;
        }
        primes_tested.push(p);
        let c = c_val_modp(phi, rec.j, p)?;
        if c == 0 {
            continue;
        }
        let (num, den) = rec.slope(p, n);
        let rule = BoundRule::new(
            p,
            num,
            den,
            c as i64,
            format!("v{p} >= ceil({num}/{den} (C_J - i - j)) at J = {}", rec.j),
        );
        let entries = shifted.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .take(i + 1)
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| (i as u32, j as u32, c))
        });
        reports.push(check_rule(n, entries, rule));
    }
    Ok(SingularReport {
        level: n,
        disc: d,
        j: rec.j,
        char0,
        primes_tested,
        reports,
    })
}
