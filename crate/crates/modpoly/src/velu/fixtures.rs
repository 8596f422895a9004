//! Named curve models over the rings where the small-prime valuations are
//! realized, plus a plain-text loader for externally supplied models.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::LocalRing;
use crate::{Error, Result};

use super::{curve_derived, CurveModel};

pub fn fixture_names() -> [&'static str; 4] {
    ["j0-p2", "j0-p3-eps1", "j0-p3-eps1theta", "j0-p5"]
}

/// Built-in models with supersingular reduction j = 0.
///
/// - `j0-p2`: y^2 + y = x^3 over the unramified 2-adic ring.
/// - `j0-p3-eps1`, `j0-p3-eps1theta`: y^2 = x^3 + eps*theta*x^2 - omega*x
///   over Z_3[theta]/(theta^2 - 3 theta + 3), where omega = 1 - theta is a
///   cube root of unity; eps = 1 resp. 1 + theta.
/// - `j0-p5`: y^2 + y = x^3 + 5x over the unramified 5-adic ring.
pub fn fixture(name: &str) -> Result<CurveModel> {
    match name {
        "j0-p2" => {
            let r = LocalRing::trivial(2)?;
            let a = [r.zero(), r.zero(), r.one(), r.zero(), r.zero()];
            curve_derived(&r, name, a)
        }
        "j0-p3-eps1" | "j0-p3-eps1theta" => {
            let r = LocalRing::new(3, vec![3.into(), (-3).into(), 1.into()])?;
            let theta = r.theta();
            let omega = r.sub(&r.one(), &theta);
            let eps = if name == "j0-p3-eps1" {
                r.one()
            } else {
                r.add(&r.one(), &theta)
            };
            let a2 = r.mul(&eps, &theta);
            let a = [r.zero(), a2, r.zero(), r.neg(&omega), r.zero()];
            curve_derived(&r, name, a)
        }
        "j0-p5" => {
            let r = LocalRing::trivial(5)?;
            let a = [r.zero(), r.zero(), r.one(), r.of_int(5), r.zero()];
            curve_derived(&r, name, a)
        }
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

/// Parses a model file: a `ring <p> <e> <c0> ... <ce>` line (monic modulus,
/// ascending coefficients), then five `curve` lines with e rational
/// coordinates each, giving a1, a2, a3, a4, a6. '#' starts a comment.
pub fn parse_fixture_file(text: &str, label: &str) -> Result<CurveModel> {
    let mut ring: Option<LocalRing> = None;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let no = no + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "ring" => {
                if ring.is_some() {
                    return Err(Error::Parse {
                        line: no,
                        msg: "second ring line".into(),
                    });
                }
                if toks.len() < 4 {
                    return Err(Error::Parse {
                        line: no,
                        msg: "want: ring <p> <e> <c0> ... <ce>".into(),
                    });
                }
                let p: u64 = toks[1].parse().map_err(|_| Error::Parse {
                    line: no,
                    msg: format!("bad prime {:?}", toks[1]),
                })?;
                let e: usize = toks[2].parse().map_err(|_| Error::Parse {
                    line: no,
                    msg: format!("bad degree {:?}", toks[2]),
                })?;
                if toks.len() != 3 + e + 1 {
                    return Err(Error::Parse {
                        line: no,
                        msg: format!(
                            "want {} modulus coefficients, got {}",
                            e + 1,
                            toks.len() - 3
                        ),
                    });
                }
                let f = toks[3..]
                    .iter()
                    .map(|t| {
                        BigInt::from_str(t).map_err(|_| Error::Parse {
                            line: no,
                            msg: format!("bad coefficient {t:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                ring = Some(LocalRing::new(p, f)?);
            }
            "curve" => {
                let r = ring.as_ref().ok_or(Error::Parse {
                    line: no,
                    msg: "curve line before ring line".into(),
                })?;
                if toks.len() != 1 + r.degree() {
                    return Err(Error::Parse {
                        line: no,
                        msg: format!("want {} coordinates, got {}", r.degree(), toks.len() - 1),
                    });
                }
                let coords = toks[1..]
                    .iter()
                    .map(|t| {
                        BigRational::from_str(t).map_err(|_| Error::Parse {
                            line: no,
                            msg: format!("bad coordinate {t:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(coords);
            }
            other => {
                return Err(Error::Parse {
                    line: no,
                    msg: format!("unknown record {other:?}"),
                });
            }
        }
    }
    let ring = ring.ok_or(Error::Parse {
        line: 0,
        msg: "missing ring line".into(),
    })?;
    if rows.len() != 5 {
        return Err(Error::Parse {
            line: 0,
            msg: format!(
                "want 5 curve lines (a1, a2, a3, a4, a6), got {}",
                rows.len()
            ),
        });
    }
    let mut a = Vec::with_capacity(5);
    for coords in rows {
        a.push(ring.from_coords(coords)?);
    }
    let a: [_; 5] = a.try_into().expect("length checked");
    curve_derived(&ring, label, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Valuation;

    #[test]
    fn all_fixtures_have_good_reduction() {
        for name in fixture_names() {
            let m = fixture(name).unwrap();
            assert_eq!(m.ring().val(m.delta()), Valuation::Finite(0), "{name}");
        }
        assert!(matches!(fixture("j0-p11"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn eps_variants_differ_in_a2_only() {
        let one = fixture("j0-p3-eps1").unwrap();
        let two = fixture("j0-p3-eps1theta").unwrap();
        assert_eq!(one.a4(), two.a4());
        assert_ne!(one.a2(), two.a2());
        // (1 + theta) theta = theta + theta^2 = 4 theta - 3
        assert_eq!(
            two.a2().coords(),
            &[
                BigRational::from_integer((-3).into()),
                BigRational::from_integer(4.into())
            ]
        );
    }

    #[test]
    fn file_round_trip_matches_builtin() {
        let text = "# eps = 1 model\nring 3 2 3 -3 1\ncurve 0 0\ncurve 0 1\ncurve 0 0\ncurve -1 1\ncurve 0 0\n";
        let m = parse_fixture_file(text, "file").unwrap();
        let builtin = fixture("j0-p3-eps1").unwrap();
        assert_eq!(m.a2(), builtin.a2());
        assert_eq!(m.a4(), builtin.a4());
        assert_eq!(m.c4(), builtin.c4());
        assert_eq!(m.delta(), builtin.delta());
    }

    #[test]
    fn malformed_files_rejected() {
        assert!(parse_fixture_file("curve 0\n", "x").is_err());
        assert!(parse_fixture_file("ring 3 2 3 -3 1\ncurve 0\n", "x").is_err());
        let short = "ring 2 1 -2 1\ncurve 0\ncurve 0\ncurve 1\ncurve 0\n";
        assert!(parse_fixture_file(short, "x").is_err());
        let junk = "ring 2 1 -2 1\nwat 1\n";
        assert!(matches!(
            parse_fixture_file(junk, "x"),
            Err(Error::Parse { .. })
        ));
    }
}
