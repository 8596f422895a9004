//! Coefficient bounds from interpolation: if a degree-d polynomial f over a
//! local ring is sampled at d+1 points y_k that all have valuation n and
//! pairwise differences of valuation exactly n, then
//! v(a_j) >= min_k v(f(y_k)) - n j for every coefficient a_j.

use serde::{Deserialize, Serialize};

use crate::arith::{LocalElement, LocalRing, Valuation};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InterpEntry {
    pub index: usize,
    pub actual: Valuation,
    pub bound: Valuation,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InterpReport {
    pub degree: usize,
    pub n: i64,
    pub min_eval: Valuation,
    pub entries: Vec<InterpEntry>,
    pub holds: bool,
}

/// Check the interpolation bound for f given by its coefficients
/// (ascending) and the sample points. Hypothesis violations are errors, not
/// failed bounds: the caller asked about a configuration the lemma does not
/// cover.
pub fn interpolation_bound_check(
    ring: &LocalRing,
    coeffs: &[LocalElement],
    points: &[LocalElement],
    n: i64,
) -> Result<InterpReport> {
    if coeffs.is_empty() {
        return Err(Error::Hypothesis(
            "polynomial needs at least one coefficient".into(),
        ));
    }
    let degree = coeffs.len() - 1;
    if points.len() != degree + 1 {
        return Err(Error::Hypothesis(format!(
            "degree {degree} needs exactly {} sample points, got {}",
            degree + 1,
            points.len()
        )));
    }
    for (k, y) in points.iter().enumerate() {
        let v = ring.val(y);
        if v != Valuation::Finite(n) {
            return Err(Error::Hypothesis(format!(
                "sample point {k} has valuation {v}, need exactly {n}"
            )));
        }
    }
    for k in 0..points.len() {
        for l in k + 1..points.len() {
            let diff = ring.sub(&points[k], &points[l]);
            let v = ring.val(&diff);
            if v != Valuation::Finite(n) {
                return Err(Error::Hypothesis(format!(
                    "difference of sample points {k} and {l} has valuation {v}, need exactly {n}"
                )));
            }
        }
    }

    let min_eval = points
        .iter()
        .map(|y| ring.val(&ring.eval_poly(coeffs, y)))
        .min()
        .expect("at least one sample point");

    let mut entries = Vec::with_capacity(coeffs.len());
    let mut holds = true;
    for (index, a) in coeffs.iter().enumerate() {
        let bound = match min_eval {
            Valuation::Infinity => Valuation::Infinity,
            Valuation::Finite(m) => Valuation::Finite(m - n * index as i64),
        };
        let actual = ring.val(a);
        if actual < bound {
            holds = false;
        }
        entries.push(InterpEntry {
            index,
            actual,
            bound,
        });
    }
    Ok(InterpReport {
        degree,
        n,
        min_eval,
        entries,
        holds,
    })
}
