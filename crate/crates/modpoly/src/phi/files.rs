//! The plain-text exchange format for modular polynomials: one coefficient
//! per line as `[i,j] c`, comment lines starting with anything other than
//! `[`, entries given for i >= j with symmetry implied, and the monic
//! leading term optional.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::{psi, BivarPoly};
use crate::{Error, Result};

/// Parse the `[i,j] c` format. The level is not part of the format and must
/// be supplied by the caller.
pub fn parse_modpoly(text: &str, level: u64) -> Result<BivarPoly> {
    let deg = psi(level)? as u32;
    let mut seen: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
    let mut any = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if !line.starts_with('[') {
            continue; // comment or blank
        }
        any = true;
        let (i, j, c) = parse_entry(line, lineno)?;
        if seen.contains_key(&(i, j)) {
            return Err(Error::DuplicateEntry { i, j, line: lineno });
        }
        // a mirrored entry is redundant but legal when the values agree
        if i != j {
            if let Some(prev) = seen.get(&(j, i)) {
                if *prev != c {
                    return Err(Error::SymmetryConflict { i, j });
                }
            }
        }
        seen.insert((i, j), c);
    }
    if !any {
        return Err(Error::Parse {
            line: 0,
            msg: "no coefficient entries found".into(),
        });
    }
    match seen.get(&(deg, 0)) {
        Some(c) if c.is_one() => {}
        Some(c) => {
            return Err(Error::NotMonic {
                expected: deg,
                got: c.to_string(),
            })
        }
        None => {
            seen.insert((deg, 0), BigInt::one());
        }
    }
    let mut entries = Vec::with_capacity(2 * seen.len());
    for ((i, j), c) in seen {
        if i != j {
            entries.push(((j, i), c.clone()));
        }
        entries.push(((i, j), c));
    }
    BivarPoly::new(level, entries)
}

fn parse_entry(line: &str, lineno: usize) -> Result<(u32, u32, BigInt)> {
    let close = line.find(']').ok_or_else(|| Error::Parse {
        line: lineno,
        msg: "missing closing bracket".into(),
    })?;
    let inner = &line[1..close];
    let mut parts = inner.split(',');
    let i = parse_index(parts.next(), lineno)?;
    let j = parse_index(parts.next(), lineno)?;
    if parts.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            msg: "expected exactly two indices".into(),
        });
    }
    let rest = line[close + 1..].trim();
    if rest.is_empty() {
        return Err(Error::Parse {
            line: lineno,
            msg: "missing coefficient".into(),
        });
    }
    if rest.split_whitespace().nth(1).is_some() {
        return Err(Error::Parse {
            line: lineno,
            msg: "unexpected trailing tokens after coefficient".into(),
        });
    }
    let c: BigInt = rest.parse().map_err(|_| Error::Parse {
        line: lineno,
        msg: format!("bad coefficient {rest:?}"),
    })?;
    Ok((i, j, c))
}

fn parse_index(tok: Option<&str>, lineno: usize) -> Result<u32> {
    let tok = tok
        .ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "missing index".into(),
        })?
        .trim();
    tok.parse().map_err(|_| Error::Parse {
        line: lineno,
        msg: format!("bad index {tok:?}"),
    })
}

/// Serialize in the `[i,j] c` format: the i >= j triangle in lexicographic
/// order, with the monic leading entry left implicit.
pub fn serialize_modpoly(p: &BivarPoly) -> String {
    let deg = p.psi();
    let mut out = String::new();
    for (&(i, j), c) in p.lower() {
        if (i, j) == (deg, 0) {
            continue;
        }
        out.push_str(&format!("[{i},{j}] {c}\n"));
    }
    out
}
