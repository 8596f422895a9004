//! Weierstrass models over ramified local rings and the symbolic valuation
//! n_v = v(g) attached to an isogeny degree class.

use num_rational::BigRational;

use crate::arith::{LocalElement, LocalRing, Valuation};
use crate::{Error, Result};

pub mod engine;
pub mod fixtures;
pub mod multipoly;

pub use engine::{build_g, g_valuation, tw_polys, velu_image, GReport, VeluImage};
pub use fixtures::{fixture, fixture_names, parse_fixture_file};
pub use multipoly::{mono_string, Mono, MultiPoly};

/// A curve y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with good
/// reduction, together with its standard derived quantities.
#[derive(Clone, Debug)]
pub struct CurveModel {
    ring: LocalRing,
    label: String,
    a1: LocalElement,
    a2: LocalElement,
    a3: LocalElement,
    a4: LocalElement,
    a6: LocalElement,
    b2: LocalElement,
    b4: LocalElement,
    b6: LocalElement,
    c4: LocalElement,
    c6: LocalElement,
    delta: LocalElement,
}

/// Computes b2 = a1^2 + 4a2, b4 = a1 a3 + 2a4, b6 = a3^2 + 4a6,
/// c4 = b2^2 - 24 b4, c6 = -b2^3 + 36 b2 b4 - 216 b6 and
/// delta = (c4^3 - c6^2)/1728, rejecting models with v(delta) != 0.
pub fn curve_derived(ring: &LocalRing, label: &str, a: [LocalElement; 5]) -> Result<CurveModel> {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = ring.add(&ring.mul(&a1, &a1), &ring.scale_int(&a2, 4));
    let b4 = ring.add(&ring.mul(&a1, &a3), &ring.scale_int(&a4, 2));
    let b6 = ring.add(&ring.mul(&a3, &a3), &ring.scale_int(&a6, 4));
    let c4 = ring.sub(&ring.mul(&b2, &b2), &ring.scale_int(&b4, 24));
    let b2sq = ring.mul(&b2, &b2);
    let c6 = ring.sub(
        &ring.scale_int(&ring.mul(&b2, &b4), 36),
        &ring.add(&ring.mul(&b2sq, &b2), &ring.scale_int(&b6, 216)),
    );
    let numer = ring.sub(&ring.pow(&c4, 3), &ring.mul(&c6, &c6));
    let delta = ring.scale(&numer, &BigRational::new(1.into(), 1728.into()));
    match ring.val(&delta) {
        Valuation::Finite(0) => {}
        v => return Err(Error::BadReduction(format!("{v}"))),
    }
    Ok(CurveModel {
        ring: ring.clone(),
        label: label.to_string(),
        a1,
        a2,
        a3,
        a4,
        a6,
        b2,
        b4,
        b6,
        c4,
        c6,
        delta,
    })
}

impl CurveModel {
    pub fn ring(&self) -> &LocalRing {
        &self.ring
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn a1(&self) -> &LocalElement {
        &self.a1
    }

    pub fn a2(&self) -> &LocalElement {
        &self.a2
    }

    pub fn a3(&self) -> &LocalElement {
        &self.a3
    }

    pub fn a4(&self) -> &LocalElement {
        &self.a4
    }

    pub fn a6(&self) -> &LocalElement {
        &self.a6
    }

    pub fn b2(&self) -> &LocalElement {
        &self.b2
    }

    pub fn b4(&self) -> &LocalElement {
        &self.b4
    }

    pub fn b6(&self) -> &LocalElement {
        &self.b6
    }

    pub fn c4(&self) -> &LocalElement {
        &self.c4
    }

    pub fn c6(&self) -> &LocalElement {
        &self.c6
    }

    pub fn delta(&self) -> &LocalElement {
        &self.delta
    }
}
