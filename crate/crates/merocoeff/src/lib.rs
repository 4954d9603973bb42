//! Coefficient engine for meromorphic (quasi-)modular forms.
//!
//! The crate computes Fourier coefficients of quotients of Eisenstein series
//! (and of an infinite family of weight −8 forms with a prescribed double
//! pole) two independent ways:
//!
//! - [`qseries`]: exact Laurent/power series algebra over the rationals.
//!   This is the ground-truth oracle; every coefficient it produces is a
//!   reduced rational computed by schoolbook series arithmetic.
//! - [`expansions`]: rapidly convergent sums over primitive ideals of
//!   ℤ\[i\] and ℤ\[ρ\] (ρ = e^{iπ/3}), evaluated in arbitrary-precision
//!   floating point.
//!
//! Supporting modules: [`ideals`] enumerates the quadratic-field ideals the
//! sums run over, [`pointeval`] evaluates q-expansions at points of the upper
//! half-plane, [`poincare`] evaluates the two-variable Poincaré series by
//! direct lattice sums, and [`report`] + [`harness`] drive the CLI and its
//! machine-readable reports.

pub mod complex;
pub mod constants;
pub mod expansions;
// pub mod harness;
pub mod ideals;
pub mod parallel;
pub mod pointeval;
pub mod poincare;
pub mod qseries;
// pub mod report;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported Eisenstein weight {0} (expected 2, 4 or 6)")]
    UnsupportedWeight(u32),
    #[error("series inversion requires a nonzero leading coefficient")]
    ZeroLeadingCoefficient,
    #[error("operation needs series order ≥ {needed}, have {have}")]
    InsufficientOrder { needed: i64, have: i64 },
    #[error("unknown target `{0}`")]
    UnknownTarget(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("evaluation point must lie in the upper half-plane")]
    NotUpperHalfPlane,
    #[error("requested precision {requested} exceeds stored constant precision {max}")]
    ConstantPrecision { requested: u32, max: u32 },
    #[error("coprime pair expected, got gcd({c}, {d}) ≠ 1")]
    NotCoprime { c: i64, d: i64 },
    #[error("invalid Bézout pair ({a}, {b}) for ({c}, {d})")]
    InvalidBezout { a: i64, b: i64, c: i64, d: i64 },
    #[error("weight {k} is not a multiple of {expected} as required for this field")]
    WeightCongruence { k: u32, expected: u32 },
    #[error("parameters outside the convergence region: need k ≥ 4 + 2ℓ, got k={k}, ℓ={l}")]
    ConvergenceRegion { k: u32, l: u32 },
    #[error("τ₀ is too close to an elliptic point (|j'(τ₀)| = {jp_abs:e} below threshold)")]
    EllipticProximity { jp_abs: f64 },
    #[error("lattice term too close to a pole of the summand")]
    NearPole,
    #[error("derivative order {0} not supported (r ∈ {{0, 1, 2}})")]
    DerivativeOrder(u32),
    #[error("invalid run configuration: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
