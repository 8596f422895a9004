//! Classical modular polynomials: representation, computation from
//! q-expansions, and the published text format.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Result};

mod classical;
mod files;
pub mod jfun;

pub use classical::{compute_phi, kronecker_congruence_holds, COMPUTE_LEVEL_CEILING};
pub use files::{parse_modpoly, serialize_modpoly};

/// Degree psi(N) = N * prod_{p | N} (1 + 1/p) of the level-N modular
/// polynomial in each variable.
pub fn psi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::BadLevel);
    }
    let mut out: u64 = 1;
    let mut rem = n;
    let mut p = 2u64;
    while p * p <= rem {
        if rem % p == 0 {
            let mut pe = 1u64;
            while rem % p == 0 {
                rem /= p;
                pe *= p;
            }
            out *= pe / p * (p + 1);
        }
        p += 1;
    }
    if rem > 1 {
        out *= rem + 1;
    }
    Ok(out)
}

/// Symmetric bivariate integer polynomial of bidegree (psi(N), psi(N)),
/// stored sparsely with both (i,j) and (j,i) present and no zero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivarPoly {
    n: u64,
    psi: u32,
    entries: BTreeMap<(u32, u32), BigInt>,
}

impl BivarPoly {
    /// Validates degree bounds, symmetry (for N > 1), and monicity in X.
    /// Zero coefficients are dropped; the mirror of each entry is filled in.
    pub fn new(n: u64, entries: impl IntoIterator<Item = ((u32, u32), BigInt)>) -> Result<Self> {
        let psi = psi(n)? as u32;
        let mut map: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for ((i, j), c) in entries {
            if c.is_zero() {
                continue;
            }
            if i > psi || j > psi {
                return Err(Error::DegreeBound { i, j, psi });
            }
            if let Some(old) = map.insert((i, j), c.clone()) {
                if old != c {
                    return Err(Error::SymmetryConflict { i, j });
                }
            }
        }
        if n > 1 {
            for (&(i, j), c) in &map {
                match map.get(&(j, i)) {
                    Some(d) if d == c => {}
                    Some(_) => return Err(Error::SymmetryConflict { i, j }),
                    None => return Err(Error::SymmetryConflict { i, j }),
                }
            }
        }
        match map.get(&(psi, 0)) {
            Some(c) if c.is_one() => {}
            Some(c) => {
                return Err(Error::NotMonic {
                    expected: psi,
                    got: c.to_string(),
                })
            }
            None => {
                return Err(Error::NotMonic {
                    expected: psi,
                    got: "0".into(),
                })
            }
        }
        Ok(BivarPoly {
            n,
            psi,
            entries: map,
        })
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn psi(&self) -> u32 {
        self.psi
    }

    pub fn get(&self, i: u32, j: u32) -> Option<&BigInt> {
        self.entries.get(&(i, j))
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.get(i, j).cloned().unwrap_or_default()
    }

    /// All stored entries, both triangles.
    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.entries.iter()
    }

    /// Entries with i >= j, in lexicographic order.
    pub fn lower(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.entries.iter().filter(|((i, j), _)| i >= j)
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    /// Univariate coefficients u_i of Phi(X, y0) for a fixed integer y0.
    pub fn substitute_y(&self, y0: &BigInt) -> Vec<BigInt> {
        let mut rows: Vec<Vec<(u32, &BigInt)>> = vec![Vec::new(); self.psi as usize + 1];
        for (&(i, j), c) in &self.entries {
            rows[i as usize].push((j, c));
        }
        rows.into_iter()
            .map(|mut row| {
                // Horner over descending j
                row.sort_by(|a, b| b.0.cmp(&a.0));
                let mut acc = BigInt::zero();
                let mut deg = row.first().map_or(0, |t| t.0);
                for (j, c) in row {
                    for _ in j..deg {
                        acc *= y0;
                    }
                    deg = j;
                    acc += c;
                }
                for _ in 0..deg {
                    acc *= y0;
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_multiplicative() {
        assert_eq!(psi(1).unwrap(), 1);
        assert_eq!(psi(2).unwrap(), 3);
        assert_eq!(psi(5).unwrap(), 6);
        assert_eq!(psi(12).unwrap(), 24);
        assert_eq!(psi(101).unwrap(), 102);
        assert_eq!(psi(4).unwrap(), 6);
        assert_eq!(psi(9).unwrap(), 12);
        assert!(psi(0).is_err());
    }

    fn tiny() -> BivarPoly {
        // X^3 + Y^3 - X^2 Y^2 + 5 X Y (level 2 shape, not the real one)
        BivarPoly::new(
            2,
            vec![
                ((3, 0), BigInt::from(1)),
                ((0, 3), BigInt::from(1)),
                ((2, 2), BigInt::from(-1)),
                ((1, 1), BigInt::from(5)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn constructor_validates() {
        assert!(matches!(
            BivarPoly::new(2, vec![((4, 0), BigInt::one())]),
            Err(Error::DegreeBound { .. })
        ));
        assert!(matches!(
            BivarPoly::new(2, vec![((3, 0), BigInt::one()), ((0, 3), BigInt::from(2))]),
            Err(Error::SymmetryConflict { .. })
        ));
        assert!(matches!(
            BivarPoly::new(
                2,
                vec![((3, 0), BigInt::from(7)), ((0, 3), BigInt::from(7))]
            ),
            Err(Error::NotMonic { .. })
        ));
        let p = tiny();
        assert_eq!(p.coeff(2, 2), BigInt::from(-1));
        assert_eq!(p.coeff(1, 2), BigInt::zero());
        assert_eq!(p.num_entries(), 4);
    }

    #[test]
    fn substitution_is_horner() {
        let p = tiny();
        // Phi(X, 2) = X^3 - 4 X^2 + 10 X + 8
        let u = p.substitute_y(&BigInt::from(2));
        assert_eq!(
            u,
            vec![
                BigInt::from(8),
                BigInt::from(10),
                BigInt::from(-4),
                BigInt::from(1)
            ]
        );
    }
}
