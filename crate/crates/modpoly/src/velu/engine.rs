//! The symbolic polynomials t, w, g for an isogeny degree class and the
//! image-coefficient transform.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::{LocalElement, Valuation};
use crate::{Error, Result};

use super::multipoly::{mono_string, MultiPoly, X0, X1, X2, X3, Y0};
use super::CurveModel;

/// The pair (t, w) for degree class N. Only the parity of N and the residues
/// (N-1)/2, (N-2)/2, N/2 enter; callers pass the smallest representative of
/// their class coprime to p.
pub fn tw_polys(curve: &CurveModel, n: u64) -> Result<(MultiPoly, MultiPoly)> {
    if n < 2 {
        return Err(Error::BadLevel);
    }
    let r = curve.ring();
    if n % r.p() == 0 {
        return Err(Error::NotCoprime { n, p: r.p() });
    }
    let half = |m: u64| r.of_int((m / 2) as i64);
    let mut t =
        MultiPoly::linear(r, X2, r.of_int(6)).add(r, &MultiPoly::linear(r, X1, curve.b2().clone()));
    let mut w = MultiPoly::linear(r, X3, r.of_int(10))
        .add(r, &MultiPoly::linear(r, X2, r.scale_int(curve.b2(), 2)))
        .add(r, &MultiPoly::linear(r, X1, r.scale_int(curve.b4(), 3)));
    if n % 2 == 1 {
        t = t.add(r, &MultiPoly::constant(r, r.mul(&half(n - 1), curve.b4())));
        w = w.add(r, &MultiPoly::constant(r, r.mul(&half(n - 1), curve.b6())));
    } else {
        t = t
            .add(r, &MultiPoly::constant(r, r.mul(&half(n - 2), curve.b4())))
            .add(r, &MultiPoly::monomial(r, [2, 0, 0, 0, 0], r.of_int(3)))
            .add(r, &MultiPoly::linear(r, X0, r.scale_int(curve.a2(), 2)))
            .add(r, &MultiPoly::constant(r, curve.a4().clone()))
            .sub(r, &MultiPoly::linear(r, Y0, curve.a1().clone()));
        w = w
            .add(r, &MultiPoly::constant(r, r.mul(&half(n), curve.b6())))
            .add(r, &MultiPoly::monomial(r, [3, 0, 0, 0, 0], r.of_int(7)))
            .add(
                r,
                &MultiPoly::monomial(
                    r,
                    [2, 0, 0, 0, 0],
                    r.add(curve.b2(), &r.scale_int(curve.a2(), 2)),
                ),
            )
            .add(
                r,
                &MultiPoly::linear(r, X0, r.add(&r.scale_int(curve.b4(), 2), curve.a4())),
            )
            .sub(
                r,
                &MultiPoly::monomial(r, [1, 0, 0, 0, 1], curve.a1().clone()),
            );
    }
    Ok((t, w))
}

/// g = [(c4 + 240t)^3 c6^2 - c4^3 (c6 + 504 b2 t + 6048 w)^2] / 1728,
/// fully expanded over the ring's fraction field.
pub fn build_g(curve: &CurveModel, n: u64) -> Result<MultiPoly> {
    let (t, w) = tw_polys(curve, n)?;
    let r = curve.ring();
    let c4 = MultiPoly::constant(r, curve.c4().clone());
    let c6 = MultiPoly::constant(r, curve.c6().clone());
    let lhs = c4
        .add(r, &t.scale(r, &r.of_int(240)))
        .pow(r, 3)
        .mul(r, &c6.pow(r, 2));
    let bracket = c6
        .add(r, &t.scale(r, &r.scale_int(curve.b2(), 504)))
        .add(r, &w.scale(r, &r.of_int(6048)));
    let rhs = c4.pow(r, 3).mul(r, &bracket.pow(r, 2));
    Ok(lhs
        .sub(r, &rhs)
        .scale_rational(r, &BigRational::new(BigInt::from(1), BigInt::from(1728))))
}

#[derive(Clone, Debug, Serialize)]
pub struct GReport {
    pub label: String,
    pub n: u64,
    /// v(g): minimum coefficient valuation in the normalization v(theta) = 1.
    pub n_v: i64,
    /// n_v / e, the same valuation normalized to v(p) = 1.
    pub n_p: BigRational,
    pub terms: usize,
}

/// Builds g and reports its valuation. A negative-valuation coefficient is
/// an error: g is integral on every shipped model.
pub fn g_valuation(curve: &CurveModel, n: u64) -> Result<GReport> {
    let g = build_g(curve, n)?;
    let r = curve.ring();
    let n_v = match g.min_val(r) {
        Valuation::Infinity => return Err(Error::ZeroG),
        Valuation::Finite(v) => v,
    };
    if n_v < 0 {
        let (mono, val) = g
            .terms()
            .map(|(m, c)| (m, r.val(c)))
            .filter(|(_, v)| v.is_finite())
            .map(|(m, v)| (m, v.finite()))
            .min_by_key(|&(_, v)| v)
            .expect("nonzero g has a finite minimum");
        return Err(Error::NonIntegralG {
            mono: mono_string(mono),
            val,
        });
    }
    Ok(GReport {
        label: curve.label().to_string(),
        n,
        n_v,
        n_p: BigRational::new(BigInt::from(n_v), BigInt::from(r.degree() as i64)),
        terms: g.num_terms(),
    })
}

#[derive(Clone, Debug)]
pub struct VeluImage {
    pub a1: LocalElement,
    pub a2: LocalElement,
    pub a3: LocalElement,
    pub a4: LocalElement,
    pub a6: LocalElement,
    /// c4 of the image, recomputed from the primed coefficients.
    pub c4: LocalElement,
    /// c6 of the image, recomputed from the primed coefficients.
    pub c6: LocalElement,
}

/// Image coefficients a4' = a4 - 5t', a6' = a6 - b2 t' - 7w' for specialized
/// isogeny data (t', w'). Asserts the recomputed invariants satisfy
/// c4' = c4 + 240 t' and c6' = c6 + 504 b2 t' + 6048 w'.
pub fn velu_image(curve: &CurveModel, t_val: &LocalElement, w_val: &LocalElement) -> VeluImage {
    let r = curve.ring();
    let a4 = r.sub(curve.a4(), &r.scale_int(t_val, 5));
    let a6 = r.sub(
        curve.a6(),
        &r.add(&r.mul(curve.b2(), t_val), &r.scale_int(w_val, 7)),
    );
    let a1 = curve.a1().clone();
    let a2 = curve.a2().clone();
    let a3 = curve.a3().clone();

    let b2 = r.add(&r.mul(&a1, &a1), &r.scale_int(&a2, 4));
    let b4 = r.add(&r.mul(&a1, &a3), &r.scale_int(&a4, 2));
    let b6 = r.add(&r.mul(&a3, &a3), &r.scale_int(&a6, 4));
    let c4 = r.sub(&r.mul(&b2, &b2), &r.scale_int(&b4, 24));
    let b2sq = r.mul(&b2, &b2);
    let c6 = r.sub(
        &r.scale_int(&r.mul(&b2, &b4), 36),
        &r.add(&r.mul(&b2sq, &b2), &r.scale_int(&b6, 216)),
    );

    let c4_want = r.add(curve.c4(), &r.scale_int(t_val, 240));
    let c6_want = r.add(
        curve.c6(),
        &r.add(
            &r.scale_int(&r.mul(curve.b2(), t_val), 504),
            &r.scale_int(w_val, 6048),
        ),
    );
    assert_eq!(c4, c4_want, "image c4 identity failed on {}", curve.label());
    assert_eq!(c6, c6_want, "image c6 identity failed on {}", curve.label());
    VeluImage {
        a1,
        a2,
        a3,
        a4,
        a6,
        c4,
        c6,
    }
}
