//! Computational toolkit for classical modular polynomials Φ_N and the
//! p-adic divisibility structure of their coefficients.
//!
//! The crate is organised around six areas:
//!
//! * [`arith`] — exact base arithmetic: truncated integer Laurent series,
//!   polynomials over F_p, ramified local rings with a uniformiser, and
//!   p-adic valuations of big integers and rationals.
//! * [`phi`] — the polynomials themselves: q-expansion of j, computation of
//!   Φ_ℓ for primes ℓ, and the plain-text interchange format.
//! * [`bounds`] — coefficient valuation reports: congruence-class divisibility
//!   rules, singular-modulus shifts Φ_N(X+J, Y+J), and the interpolation
//!   valuation lemma used to certify lower bounds.
//! * [`cval`] — isogeny-count invariants C_J(N, p) = ord_X Φ_N(X+J, J) mod p,
//!   ordinary/supersingular classification helpers, and the average-order
//!   inequality for the bad-prime scan.
//! * [`quat`] — maximal quaternion orders for small ramified primes with
//!   exact theta-series enumeration and cyclic-subgroup counts.
//! * [`velu`] — the symbolic isogeny-displacement engine: builds the
//!   polynomial g in the division-polynomial power sums and measures its
//!   uniformiser valuation over a local ring.
//!
//! With the default `parallel` feature the scan- and convolution-shaped inner
//! loops run on rayon; without it the same code paths run sequentially.

pub mod arith;
pub mod bounds;
pub mod cval;
pub(crate) mod par;
pub mod phi;
pub mod quat;
pub mod store;
pub mod velu;

use thiserror::Error;

/// Crate-wide error type. Variants carry enough context to be actionable at
/// the CLI boundary without string matching.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("level must be >= 1")]
    BadLevel,
    #[error("level {0} exceeds the supported computation ceiling of 13")]
    LevelCeiling(u64),
    #[error("precision exhausted at working window {window}: {what}")]
    PrecisionExhausted { window: i64, what: String },
    #[error("series window is empty (lead {lead}, prec {prec})")]
    EmptyWindow { lead: i64, prec: i64 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate entry ({i},{j}) at line {line}")]
    DuplicateEntry { i: u32, j: u32, line: usize },
    #[error("entries ({i},{j}) and ({j},{i}) conflict: symmetry requires equal values")]
    SymmetryConflict { i: u32, j: u32 },
    #[error("polynomial is not monic of degree {expected} in X: a[{expected},0] = {got}")]
    NotMonic { expected: u32, got: String },
    #[error("degree bound exceeded: entry ({i},{j}) with psi(N) = {psi}")]
    DegreeBound { i: u32, j: u32, psi: u32 },
    #[error("coefficient at ({i},{j}) not divisible by {p}^{e} during compression")]
    CompressionDivisibility { i: u32, j: u32, p: u64, e: u64 },
    #[error("polynomial is not Eisenstein at p = {0}: {1}")]
    NotEisenstein(u64, String),
    #[error("ring mismatch: element has {got} coordinates, ring has degree {expected}")]
    RingMismatch { got: usize, expected: usize },
    #[error("bad reduction: discriminant has valuation {0} (want 0)")]
    BadReduction(String),
    #[error("gcd({n}, {p}) != 1")]
    NotCoprime { n: u64, p: u64 },
    #[error("level must be odd for the average-order bound, got {0}")]
    EvenLevel(u64),
    #[error("no maximal-order fixture for p = {0} (class number > 1 or out of range)")]
    UnsupportedOrderPrime(u64),
    #[error("order certification failed: {0}")]
    BadOrder(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("no singular-modulus record with discriminant {0}")]
    UnknownDiscriminant(i64),
    #[error("discriminant {0} must be negative and 0 or 1 mod 4")]
    BadDiscriminant(i64),
    #[error("interpolation hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("g vanishes identically; valuation undefined")]
    ZeroG,
    #[error("g is not integral: coefficient at {mono} has valuation {val}")]
    NonIntegralG { mono: String, val: i64 },
    #[error("pmax {pmax} is below the required scan bound |D|*N = {bound}")]
    ScanBoundTooSmall { pmax: u64, bound: u64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
