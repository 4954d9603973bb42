//! The ideal-sum coefficient formulas: unit-root factors A and C, the
//! master series F_{k,ℓ,r}, the named expansion recipes with their explicit
//! constants, and the arbitrary-pole weight −8 family.
//!
//! Conventions. For a primitive ideal 𝔟 with canonical generator
//! γ = c𝔷 + d and Bézout pair (a, b), ad − bc = 1,
//!
//!   A_k(γ, n) = e(−(n/N)(ac|𝔷|² + bd + 𝔷₁(ad + bc)) − (k/2π)·arg γ),
//!   C_k(𝔟, n) = Re A_k(γ, n),
//!
//! with e(x) = e^{2πix}. The Bézout-dependent part of the phase is an exact
//! rational with denominator dividing 2N; it is reduced modulo 2 before any
//! trigonometry, so the computed value is bit-identical for every valid
//! Bézout pair. The coefficient sums
//!
//!   F_{k,ℓ,r}(n) = Σ_{N(𝔟) ≤ Λ} C_k(𝔟, n) · n^r · e^{2πn𝔷₂/N} / N^{k/2−ℓ}
//!
//! run over all primitive ideals (conjugates counted separately).

use crate::complex::{self, BigComplex};
use crate::constants::{self, SpecialValue};
use crate::ideals::{self, Field, PrimitiveIdeal};
use crate::parallel;
use crate::pointeval::{self, working_prec};
use crate::qseries::{self, Form, LaurentSeries};
use crate::{Error, Result};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// A coefficient of an expansion with its truncation metadata.
#[derive(Debug, Clone)]
pub struct CoefficientValue {
    pub n: i64,
    pub value: BigComplex,
    pub norm_cutoff: i64,
    pub tail_estimate: Float,
    pub precision_bits: u32,
}

/// One F_{k,ℓ,r} term of a recipe, scaled by a real constant.
#[derive(Debug, Clone)]
pub struct RecipeTerm {
    pub k: u32,
    pub l: u32,
    pub r: u32,
    pub scalar: Float,
}

/// A named linear combination of F_{k,ℓ,r} series.
#[derive(Debug, Clone)]
pub struct ExpansionRecipe {
    pub name: &'static str,
    pub field: Field,
    pub terms: Vec<RecipeTerm>,
}

/// 𝔷₂ = Im 𝔷 for the field's base point.
pub fn z2(field: Field, prec: u32) -> Float {
    match field {
        Field::Gaussian => Float::with_val(prec, 1),
        Field::Eisenstein => Float::with_val(prec, 3).sqrt() / 2u32,
    }
}

/// arg γ for the canonical generator, via two-argument arctangent. The
/// paper's single-argument arctan cosine formulas are only cross-checks;
/// atan2 has no branch trouble at 2d − c = 0 or d = 0.
fn arg_gamma(field: Field, c: i64, d: i64, prec: u32) -> Float {
    match field {
        Field::Gaussian => Float::with_val(prec, c).atan2(&Float::with_val(prec, d)),
        // γ = cρ + d = (c/2 + d) + i·c√3/2; scale both components by 2
        Field::Eisenstein => {
            let y = Float::with_val(prec, c) * Float::with_val(prec, 3).sqrt();
            y.atan2(&Float::with_val(prec, c + 2 * d))
        }
    }
}

/// The Bézout phase reduced modulo 2: returns u ∈ [0, 2) as an exact
/// rational with n·(2P)/N ≡ u (mod 2), where
/// P = ac|𝔷|² + bd + 𝔷₁(ad + bc).
fn phase_fraction(field: Field, c: i64, d: i64, a: i64, b: i64, n: i64) -> Rational {
    let p2 = field.phase_numerator_doubled(c, d, a, b);
    let nn = field.norm(c, d);
    let num = (n as i128 * p2 as i128).rem_euclid(2 * nn as i128);
    Rational::from((Integer::from(num), Integer::from(nn)))
}

/// A_k(γ, n) for γ = c𝔷 + d with the given Bézout pair: a complex number of
/// modulus 1.
pub fn a_value(
    field: Field,
    c: i64,
    d: i64,
    bezout: (i64, i64),
    n: i64,
    k: u32,
    prec: u32,
) -> Result<BigComplex> {
    let (a, b) = bezout;
    if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
        return Err(Error::InvalidBezout { a, b, c, d });
    }
    let u = phase_fraction(field, c, d, a, b, n);
    let pi = complex::pi(prec);
    let mut theta = -Float::with_val(prec, &u) * &pi;
    theta -= Float::with_val(prec, k) * arg_gamma(field, c, d, prec);
    Ok(complex::unit_from_angle(&theta))
}

/// C_k(𝔟, n) = Re A_k on the canonical generator. Requires 2ω | k so the
/// value is independent of the generator choice.
pub fn c_value(ideal: &PrimitiveIdeal, n: i64, k: u32, prec: u32) -> Result<Float> {
    let expected = 2 * ideal.field.omega();
    if k % expected != 0 {
        return Err(Error::WeightCongruence { k, expected });
    }
    let (a, b) = ideal.bezout;
    let u = phase_fraction(ideal.field, ideal.c, ideal.d, a, b, n);
    let pi = complex::pi(prec);
    let mut theta = Float::with_val(prec, &u) * &pi;
    theta += Float::with_val(prec, k) * arg_gamma(ideal.field, ideal.c, ideal.d, prec);
    Ok(theta.cos())
}

/// The paper's explicit single-arctan cosine formula for C_k, where its
/// arctan argument is defined. For ℤ[ρ] the published formula is written in
/// the coordinates γ = c'ω + d' with ω = e^{2πi/3}; our (c, d) map to
/// (c', d') = (c, c + d). Returns `None` at the singular denominators.
pub fn c_value_cosine_formula(
    ideal: &PrimitiveIdeal,
    n: i64,
    k: u32,
    prec: u32,
) -> Option<Float> {
    let nn = ideal.norm;
    let pi = complex::pi(prec);
    match ideal.field {
        Field::Gaussian => {
            let (c, d) = (ideal.c, ideal.d);
            if d == 0 {
                return None;
            }
            let (a, b) = ideal.bezout;
            // cos(2πn(ac+bd)/N + k·arctan(c/d))
            let frac = Rational::from((
                Integer::from((2 * n as i128 * (a * c + b * d) as i128).rem_euclid(2 * nn as i128)),
                Integer::from(nn),
            ));
            let mut theta = Float::with_val(prec, frac) * &pi;
            theta += Float::with_val(prec, k)
                * Float::with_val(prec, Rational::from((c, d))).atan();
            Some(theta.cos())
        }
        Field::Eisenstein => {
            let (cp, dp) = (ideal.c, ideal.c + ideal.d);
            if 2 * dp - cp == 0 {
                return None;
            }
            let (ap, bp) = ideals::bezout(cp, dp).ok()?;
            // (−1)^n cos(πn(a'd'+b'c'−2a'c'−2b'd')/N + πn − k·arctan(c'√3/(2d'−c')))
            let inner = ap * dp + bp * cp - 2 * ap * cp - 2 * bp * dp;
            let frac = Rational::from((
                Integer::from((n as i128 * inner as i128).rem_euclid(2 * nn as i128)),
                Integer::from(nn),
            ));
            let atan_arg = Float::with_val(prec, cp) * Float::with_val(prec, 3).sqrt()
                / Float::with_val(prec, 2 * dp - cp);
            let mut theta = Float::with_val(prec, frac) * &pi;
            theta += Float::with_val(prec, n) * &pi;
            theta -= Float::with_val(prec, k) * atan_arg.atan();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            Some(theta.cos() * Float::with_val(prec, sign))
        }
    }
}

/// Engineering upper bound for the dropped tail of F_{k,ℓ,r} beyond norm
/// cutoff Λ.
///
/// With s = k/2 − ℓ ≥ 2, |C| ≤ 1 and the ideal count function bounded by
/// count(N ≤ X) ≤ c₀·X (c₀ = 1, validated against enumeration in tests),
/// partial summation gives Σ_{N>Λ} N^{−s} ≤ c₀·s/(s−1)·Λ^{1−s}; the factors
/// n^r e^{2πn𝔷₂/N} are bounded by their value at N = Λ. No oscillation
/// credit is taken, so the bound also dominates |value(2Λ) − value(Λ)|.
pub fn tail_estimate(
    field: Field,
    k: u32,
    l: u32,
    r: u32,
    n: i64,
    cutoff: i64,
    prec: u32,
) -> Result<Float> {
    if k < 4 + 2 * l {
        return Err(Error::ConvergenceRegion { k, l });
    }
    let s = (k / 2 - l) as i64;
    if s < 2 {
        return Err(Error::ConvergenceRegion { k, l });
    }
    let lam = Float::with_val(prec, cutoff);
    let z2v = z2(field, prec);
    let expo = (Float::with_val(prec, 2 * n) * complex::pi(prec) * z2v / &lam).exp();
    let nr = Float::with_val(prec, n).pow(r);
    let geom = Float::with_val(prec, s) / Float::with_val(prec, s - 1);
    let power = lam.pow(-(s as i32 - 1));
    Ok(expo * nr * geom * power)
}

/// The inner ideal sum of Eq-style F_{k,ℓ,r} for a single n, truncated at
/// norm Λ. The result is real by construction (C is a real part).
pub fn f_coefficient(
    field: Field,
    k: u32,
    l: u32,
    r: u32,
    n: i64,
    cutoff: i64,
    prec: u32,
) -> Result<CoefficientValue> {
    if k < 4 + 2 * l {
        return Err(Error::ConvergenceRegion { k, l });
    }
    let expected = 2 * field.omega();
    if k % expected != 0 {
        return Err(Error::WeightCongruence { k, expected });
    }
    let wp = working_prec(prec, n);
    let ids = ideals::enumerate_primitive_ideals(field, cutoff);
    let value = f_sum_over(&ids, field, k, l, r, n, wp, false);
    let tail = tail_estimate(field, k, l, r, n, cutoff, wp)?;
    Ok(CoefficientValue {
        n,
        value: BigComplex::from_real(value),
        norm_cutoff: cutoff,
        tail_estimate: tail,
        precision_bits: wp,
    })
}

/// Shared kernel for the ideal sum; `sequential` forces the non-rayon path
/// (used by the benchmark comparison).
pub fn f_sum_over(
    ids: &[PrimitiveIdeal],
    field: Field,
    k: u32,
    l: u32,
    r: u32,
    n: i64,
    wp: u32,
    sequential: bool,
) -> Float {
    if r > 0 && n == 0 {
        return Float::new(wp);
    }
    let s = (k / 2 - l) as u32;
    let z2v = z2(field, wp);
    let two_pi_n_z2 = Float::with_val(wp, 2 * n) * complex::pi(wp) * &z2v;
    let nr = Float::with_val(wp, n).pow(r);
    let term = move |b: &PrimitiveIdeal| -> Float {
        let c = c_value(b, n, k, wp).expect("weight congruence checked by caller");
        let grow = (Float::with_val(wp, &two_pi_n_z2) / Float::with_val(wp, b.norm)).exp();
        let den = Float::with_val(wp, Integer::from(b.norm).pow(s));
        c * grow * Float::with_val(wp, &nr) / den
    };
    if sequential {
        parallel::map_sum_float_seq(ids, wp, term)
    } else {
        parallel::map_sum_float(ids, wp, term)
    }
}

fn e4_at_i(prec: u32) -> Float {
    constants::special_value(SpecialValue::E4AtI, prec.min(constants::MAX_CONST_PREC))
        .expect("capped precision")
}

fn e6_at_rho(prec: u32) -> Float {
    constants::special_value(SpecialValue::E6AtRho, prec.min(constants::MAX_CONST_PREC))
        .expect("capped precision")
}

/// The expansion recipe for a named target: scalars built from the
/// closed-form special values E₄(i) and E₆(ρ) at the requested precision.
///
/// The second- and third-order rows follow the published constant tables,
/// with two corrections that the exact q-series oracle forces (documented in
/// the acceptance suite): the E₆/E₄² row uses weight k = 6 (its source form
/// has weight −2), and the E₂E₄²/E₆² constants are the ones produced by the
/// H-series reduction, a = 15/(π²E₄²(i)), c = 12/(πE₄²(i)), d = 1/(3E₄(i)).
pub fn recipe_for(target: &str, prec: u32) -> Result<ExpansionRecipe> {
    let pi = complex::pi(prec);
    let sqrt3 = Float::with_val(prec, 3).sqrt();
    let e4i = e4_at_i(prec);
    let e6r = e6_at_rho(prec);
    let t = |k: u32, l: u32, r: u32, scalar: Float| RecipeTerm { k, l, r, scalar };
    let (field, terms): (Field, Vec<RecipeTerm>) = match target {
        "1/E4" => (
            Field::Eisenstein,
            vec![t(6, 0, 0, Float::with_val(prec, 3) / &e6r)],
        ),
        "1/E6" => (
            Field::Gaussian,
            vec![t(8, 0, 0, Float::with_val(prec, 2) / e4i.clone().square())],
        ),
        "E4/E6" => (
            Field::Gaussian,
            vec![t(4, 0, 0, Float::with_val(prec, 2) / &e4i)],
        ),
        "E2/E6" => (
            Field::Gaussian,
            vec![t(8, 1, 0, Float::with_val(prec, 6) / (pi.clone() * e4i.clone().square()))],
        ),
        "E2/E4" => (
            Field::Eisenstein,
            vec![t(6, 1, 0, Float::with_val(prec, 6) * &sqrt3 / (pi.clone() * &e6r))],
        ),
        "E2^2/E6" => (
            Field::Gaussian,
            vec![t(8, 2, 0, Float::with_val(prec, 18) / (pi.clone().square() * e4i.clone().square()))],
        ),
        "E4^2/E6^2" => (
            Field::Gaussian,
            vec![
                t(8, 1, 0, Float::with_val(prec, 6) / (pi.clone() * e4i.clone().square())),
                t(8, 0, 1, Float::with_val(prec, 4) / e4i.clone().square()),
            ],
        ),
        "1/E6^2" => (
            Field::Gaussian,
            vec![
                t(16, 1, 0, Float::with_val(prec, 14) / (pi.clone() * e4i.clone().pow(4))),
                t(16, 0, 1, Float::with_val(prec, 4) / e4i.clone().pow(4)),
            ],
        ),
        "E4/E6^2" => (
            Field::Gaussian,
            vec![
                t(12, 1, 0, Float::with_val(prec, 10) / (pi.clone() * e4i.clone().pow(3))),
                t(12, 0, 1, Float::with_val(prec, 4) / e4i.clone().pow(3)),
            ],
        ),
        "1/E4^2" => (
            Field::Eisenstein,
            vec![
                t(12, 1, 0, Float::with_val(prec, 15) * &sqrt3 / (pi.clone() * e6r.clone().square())),
                t(12, 0, 1, Float::with_val(prec, 9) / e6r.clone().square()),
            ],
        ),
        "E6/E4^2" => (
            Field::Eisenstein,
            vec![
                t(6, 1, 0, Float::with_val(prec, 6) * &sqrt3 / (pi.clone() * &e6r)),
                t(6, 0, 1, Float::with_val(prec, 9) / &e6r),
            ],
        ),
        "1/E4^3" => (
            Field::Eisenstein,
            vec![
                t(18, 2, 0, Float::with_val(prec, 945) / (Float::with_val(prec, 4) * pi.clone().square() * e6r.clone().pow(3))),
                t(18, 1, 1, Float::with_val(prec, 135) * &sqrt3 / (Float::with_val(prec, 2) * pi.clone() * e6r.clone().pow(3))),
                t(18, 0, 2, Float::with_val(prec, 27) / (Float::with_val(prec, 2) * e6r.clone().pow(3))),
            ],
        ),
        "E6/E4^3" => (
            Field::Eisenstein,
            vec![
                t(12, 2, 0, Float::with_val(prec, 81) / (pi.clone().square() * e6r.clone().square())),
                t(12, 1, 1, Float::with_val(prec, 81) * &sqrt3 / (Float::with_val(prec, 2) * pi.clone() * e6r.clone().square())),
                t(12, 0, 2, Float::with_val(prec, 27) / (Float::with_val(prec, 2) * e6r.clone().square())),
            ],
        ),
        "E2E4^2/E6^2" => (
            Field::Gaussian,
            vec![
                t(8, 2, 0, Float::with_val(prec, 15) / (pi.clone().square() * e4i.clone().square())),
                t(8, 1, 1, Float::with_val(prec, 12) / (pi.clone() * e4i.clone().square())),
                t(4, 0, 0, Float::with_val(prec, 1) / (Float::with_val(prec, 3) * &e4i)),
            ],
        ),
        other => return Err(Error::UnknownTarget(other.to_string())),
    };
    for term in &terms {
        debug_assert!(term.k >= 4 + 2 * term.l, "convergence constraint");
        debug_assert_eq!(term.k % (2 * field.omega()), 0, "weight congruence");
    }
    Ok(ExpansionRecipe { name: qseries::TARGETS.iter().find(|s| **s == target).copied().unwrap_or("?"), field, terms })
}

/// The n-th Fourier coefficient of a named target by its ideal-sum recipe.
pub fn formula_coefficient(target: &str, n: i64, cutoff: i64, prec: u32) -> Result<CoefficientValue> {
    let wp = working_prec(prec, n);
    let recipe = recipe_for(target, wp)?;
    let ids = ideals::enumerate_primitive_ideals(recipe.field, cutoff);
    let mut value = Float::new(wp);
    let mut tail = Float::new(wp);
    for term in &recipe.terms {
        let s = f_sum_over(&ids, recipe.field, term.k, term.l, term.r, n, wp, false);
        value += &term.scalar * s;
        let t = tail_estimate(recipe.field, term.k, term.l, term.r, n, cutoff, wp)?;
        tail += Float::with_val(wp, &term.scalar).abs() * t;
    }
    Ok(CoefficientValue {
        n,
        value: BigComplex::from_real(value),
        norm_cutoff: cutoff,
        tail_estimate: tail,
        precision_bits: wp,
    })
}

/// Independent second route to the 1/E₄ coefficients: the raw coprime-pair
/// Fourier sum of the weight-6 Poincaré series at ρ, with no folding into
/// ideals and fully complex arithmetic. Agreement with
/// [`formula_coefficient`] exercises the unit-orbit and conjugation folding.
pub fn beta_direct_pairs(n: i64, cutoff: i64, prec: u32) -> Result<CoefficientValue> {
    let wp = working_prec(prec, n);
    let pairs = coprime_pairs_rho(cutoff);
    let term = |pd: &(i64, i64)| -> BigComplex {
        let (c, d) = *pd;
        let (a, b) = ideals::bezout(c, d).expect("coprime");
        let nn = Field::Eisenstein.norm(c, d);
        // (cρ+d)^{-6}
        let gamma = BigComplex::new(
            Float::with_val(wp, Rational::from((Integer::from(c), Integer::from(2))))
                + Float::with_val(wp, d),
            Float::with_val(wp, c) * Float::with_val(wp, 3).sqrt() / 2u32,
        );
        let den = gamma.powi(-6);
        let u = phase_fraction(Field::Eisenstein, c, d, a, b, n);
        let theta = -Float::with_val(wp, &u) * complex::pi(wp);
        let phase = complex::unit_from_angle(&theta);
        let grow = (Float::with_val(wp, n) * complex::pi(wp) * Float::with_val(wp, 3).sqrt()
            / Float::with_val(wp, nn))
        .exp();
        (&den * &phase).scale(&grow)
    };
    let total = parallel::map_sum_complex(&pairs, wp, term);
    // 1/E4 = H6(ρ,·)/(4πi E6(ρ)) and the Fourier sum carries 2πi
    let scale = Float::with_val(wp, 1) / (Float::with_val(wp, 2) * e6_at_rho(wp));
    let value = total.scale(&scale);
    let tail = tail_estimate(Field::Eisenstein, 6, 0, 0, n, cutoff, wp)?;
    Ok(CoefficientValue {
        n,
        value,
        norm_cutoff: cutoff,
        tail_estimate: tail,
        precision_bits: wp,
    })
}

/// All coprime (c, d) ∈ ℤ² with N(cρ + d) ≤ Λ, both signs, in a fixed
/// canonical order.
fn coprime_pairs_rho(cutoff: i64) -> Vec<(i64, i64)> {
    let bound = ((4.0 * cutoff as f64 / 3.0).sqrt() as i64) + 2;
    let mut out = Vec::new();
    for c in -bound..=bound {
        for d in -bound..=bound {
            if Field::Eisenstein.norm(c, d) <= cutoff && gcd64(c, d) == 1 {
                out.push((c, d));
            }
        }
    }
    out.sort_by_key(|&(c, d)| (Field::Eisenstein.norm(c, d), c, d));
    out
}

fn gcd64(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// ---------------------------------------------------------------------------
// Arbitrary pole position: the weight −8 family F_{τ₀} = E₄/(Δ(j − j(τ₀))²)
// ---------------------------------------------------------------------------

/// τ₀ given as exact rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPoint {
    pub re: Rational,
    pub im: Rational,
}

impl RationalPoint {
    pub fn new(re: Rational, im: Rational) -> Self {
        RationalPoint { re, im }
    }

    pub fn to_complex(&self, prec: u32) -> BigComplex {
        BigComplex::from_rationals(prec, &self.re, &self.im)
    }

    /// λ(c, d) = |cτ₀ + d|² as an exact rational.
    fn lambda(&self, c: i64, d: i64) -> Rational {
        let x = Rational::from(&self.re * &Rational::from(c)) + Rational::from(d);
        let y = Rational::from(&self.im * &Rational::from(c));
        Rational::from(&x * &x) + Rational::from(&y * &y)
    }

    /// P = ac|τ₀|² + bd + Re(τ₀)(ad + bc) as an exact rational.
    fn phase_p(&self, c: i64, d: i64, a: i64, b: i64) -> Rational {
        let abs2 = Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im);
        Rational::from(&abs2 * &Rational::from(a * c))
            + Rational::from(b * d)
            + Rational::from(&self.re * &Rational::from(a * d + b * c))
    }
}

/// Minimum |j'| treated as "not an elliptic point". j' vanishes exactly at
/// the SL₂-orbits of i and ρ; elsewhere it is of order 10³ and larger.
const JPRIME_THRESHOLD: f64 = 1e-6;

/// Principal-part data of F_{τ₀} at τ₀: (λ₋₂, λ₋₁), with the elliptic-point
/// guard applied.
pub fn pole_family_lambdas(tau0: &RationalPoint, prec: u32) -> Result<(BigComplex, BigComplex)> {
    let wp = prec + pointeval::GUARD_BITS;
    let t = tau0.to_complex(wp);
    let e4 = pointeval::form_value(Form::E4, &t, prec)?;
    let delta = pointeval::form_value(Form::Delta, &t, prec)?;
    let e4p = pointeval::form_derivative(Form::E4, 1, &t, prec)?;
    let deltap = pointeval::form_derivative(Form::Delta, 1, &t, prec)?;
    let jp = pointeval::form_derivative(Form::J, 1, &t, prec)?;
    let jpp = pointeval::form_derivative(Form::J, 2, &t, prec)?;
    let jp_abs = jp.abs().to_f64();
    if !jp_abs.is_finite() || jp_abs < JPRIME_THRESHOLD {
        return Err(Error::EllipticProximity { jp_abs });
    }
    let jp2 = jp.powi(2);
    let lam2 = &e4 / &(&delta * &jp2);
    // λ₋₁ = −(E₄/Δ)·j''/j'³ + (ΔE₄' − E₄Δ')/(Δ²j'²)
    let first = &(&(&e4 / &delta) * &jpp) / &jp.powi(3);
    let num = &(&delta * &e4p) - &(&e4 * &deltap);
    let second = &num / &(&delta.powi(2) * &jp2);
    let lam1 = &(-&first) + &second;
    Ok((lam2, lam1))
}

/// The n-th Fourier coefficient of F_{τ₀} by the coprime-pair expansion.
///
/// The published statement of this expansion carries two misprinted
/// constants; the combination used here is re-derived from the principal
/// part matching (Y₋₈,₋₂ has Laurent data −2(2iv₀)^{11}, −20(2iv₀)^{10})
/// and is validated against the series oracle:
///
///   F_{τ₀}[n] = 2πi Σ_{(c,d)=1} [ (iλ₋₂/2)(5λ/v₀ + 2πn) B₁₂
///                               + (−λ₋₁/2 − 5iλ₋₂/(2v₀)) B₁₀ ]
///
/// with B_m = (cτ₀+d)^{−m} e^{2πnv₀/λ} e(−nP/λ).
pub fn pole_family_coefficient(
    tau0: &RationalPoint,
    n: i64,
    cutoff: i64,
    prec: u32,
) -> Result<CoefficientValue> {
    let wp = working_prec(prec, n) + magnitude_bits(tau0, n);
    let (lam2, lam1) = pole_family_lambdas(tau0, wp)?;
    let pairs = coprime_pairs_tau(tau0, cutoff);
    let pi = complex::pi(wp);
    let v0 = Float::with_val(wp, &tau0.im);
    let two_pi_n = Float::with_val(wp, 2 * n) * &pi;
    // iλ₋₂/2 and −λ₋₁/2 − 5iλ₋₂/(2v₀)
    let half_i_lam2 = lam2.mul_i().scale(&Float::with_val(wp, 0.5));
    let b10_coef = {
        let a = (-&lam1).scale(&Float::with_val(wp, 0.5));
        let b = lam2
            .mul_i()
            .scale(&(Float::with_val(wp, 5) / (Float::with_val(wp, 2) * &v0)));
        &a - &b
    };
    let term = |pd: &(i64, i64)| -> BigComplex {
        let (c, d) = *pd;
        let (a, b) = ideals::bezout(c, d).expect("coprime");
        let lam = tau0.lambda(c, d);
        let p = tau0.phase_p(c, d, a, b);
        // phase: e(−nP/λ) with exact reduction mod 1
        let mut frac = Rational::from(&p * &Rational::from(n)) / &lam;
        let fl = frac.clone().floor();
        frac -= fl;
        let theta = -Float::with_val(wp, 2) * &pi * Float::with_val(wp, &frac);
        let phase = complex::unit_from_angle(&theta);
        let grow = (Float::with_val(wp, 2 * n) * &pi * &v0 / Float::with_val(wp, &lam)).exp();
        let gamma = BigComplex::from_rationals(
            wp,
            &(Rational::from(&tau0.re * &Rational::from(c)) + Rational::from(d)),
            &Rational::from(&tau0.im * &Rational::from(c)),
        );
        let b12 = gamma.powi(-12);
        let b10 = gamma.powi(-10);
        let lam_f = Float::with_val(wp, &lam);
        let weight12 = half_i_lam2
            .scale(&(Float::with_val(wp, 5) * lam_f / &v0 + Float::with_val(wp, &two_pi_n)));
        let inner = &(&weight12 * &b12) + &(&b10_coef * &b10);
        (&inner * &phase).scale(&grow)
    };
    let total = parallel::map_sum_complex(&pairs, wp, term);
    let two_pi_i = BigComplex::new(Float::new(wp), Float::with_val(wp, 2) * &pi);
    let value = &two_pi_i * &total;
    let tail = pole_family_tail(tau0, &lam2, &lam1, n, cutoff, wp);
    Ok(CoefficientValue {
        n,
        value,
        norm_cutoff: cutoff,
        tail_estimate: tail,
        precision_bits: wp,
    })
}

/// Extra working bits for coefficients that grow like |q(τ₀)|^{−n}.
fn magnitude_bits(tau0: &RationalPoint, n: i64) -> u32 {
    let y = tau0.im.to_f64();
    ((n.max(0) as f64) * 2.0 * std::f64::consts::PI * y / std::f64::consts::LN_2).ceil() as u32
}

/// Tail bound for the pair sum: pair counting gives
/// #{λ ≤ X} ≤ c₁·X with c₁ = 9/min(1, v₀²), and the B₁₂/B₁₀ terms decay
/// like λ^{−5} after the explicit λ prefactor is absorbed.
fn pole_family_tail(
    tau0: &RationalPoint,
    lam2: &BigComplex,
    lam1: &BigComplex,
    n: i64,
    cutoff: i64,
    wp: u32,
) -> Float {
    let v0 = Float::with_val(wp, &tau0.im);
    let v0f = tau0.im.to_f64();
    let c1 = Float::with_val(wp, 9.0 / v0f.min(1.0).powi(2));
    let pi = complex::pi(wp);
    let lam = Float::with_val(wp, cutoff);
    let expo = (Float::with_val(wp, 2 * n) * &pi * &v0 / &lam).exp();
    let tail_pow = |s: i64| -> Float {
        Float::with_val(wp, s) / Float::with_val(wp, s - 1) * lam.clone().pow(-(s as i32 - 1))
    };
    let a = lam2.abs() / 2u32 * (Float::with_val(wp, 5) / &v0) * tail_pow(5);
    let b = lam2.abs() / 2u32 * (Float::with_val(wp, 2 * n) * &pi) * tail_pow(6);
    let c = (lam1.abs() / 2u32 + lam2.abs() * Float::with_val(wp, 5) / (Float::with_val(wp, 2) * &v0))
        * tail_pow(5);
    Float::with_val(wp, 2) * pi * c1 * expo * (a + b + c)
}

/// Coprime pairs with |cτ₀ + d|² ≤ Λ, ordered by λ ascending with (c, d)
/// lexicographic tie-break.
fn coprime_pairs_tau(tau0: &RationalPoint, cutoff: i64) -> Vec<(i64, i64)> {
    let y = tau0.im.to_f64();
    let x = tau0.re.to_f64();
    let cmax = ((cutoff as f64).sqrt() / y) as i64 + 2;
    let mut out: Vec<((Rational, i64, i64), (i64, i64))> = Vec::new();
    let lam_bound = Rational::from(cutoff);
    for c in -cmax..=cmax {
        let center = -x * c as f64;
        let half = (cutoff as f64).sqrt() + 1.0;
        let dmin = (center - half).floor() as i64;
        let dmax = (center + half).ceil() as i64;
        for d in dmin..=dmax {
            if gcd64(c, d) != 1 {
                continue;
            }
            let lam = tau0.lambda(c, d);
            if lam <= lam_bound {
                out.push(((lam, c, d), (c, d)));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, p)| p).collect()
}

/// Series oracle for the pole family: exact generator series with the single
/// numeric constant j(τ₀), expanded with complex-float coefficients.
/// Returns coefficients for n = 0 ..= n_max; the n = 0 coefficient is an
/// exact zero (the product has min exponent 1).
pub fn pole_family_oracle(tau0: &RationalPoint, n_max: i64, prec: u32) -> Result<Vec<BigComplex>> {
    let wp = working_prec(prec, 0) + magnitude_bits(tau0, n_max);
    let t = tau0.to_complex(wp);
    let jp = pointeval::form_derivative(Form::J, 1, &t, prec)?;
    if jp.abs().to_f64() < JPRIME_THRESHOLD {
        return Err(Error::EllipticProximity { jp_abs: jp.abs().to_f64() });
    }
    let j_at = pointeval::form_value(Form::J, &t, wp)?;
    let order = n_max + 2;
    let e4 = qseries::eisenstein(4, order)?;
    let (delta, j) = qseries::delta_and_j(order)?;
    // Work with the shifted integral series Δ/q and j·q to stay in plain
    // power-series land.
    let delta_sh = shift(&delta, -1, wp);
    let j_sh = shift(&j, 1, wp);
    let mut jmj_sh = j_sh;
    let one_idx = 1usize; // q^1 coefficient of j·q holds j's constant term... shifted j(τ₀)
    let cur = jmj_sh.coeffs()[one_idx].clone();
    let repl = &cur - &j_at;
    jmj_sh = replace_coeff(&jmj_sh, one_idx, repl);
    let sq = jmj_sh.mul(&jmj_sh);
    let denom = shift_c(&delta_sh.mul(&sq), 0);
    let num = e4.lift(wp);
    let f = num.mul(&denom.invert()?);
    // F = (E₄ / (Δ/q · (j−J)²q²)) · q, so F_n = f_{n-1}
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(BigComplex::zero(wp));
    for n in 1..=n_max {
        out.push(f.coeff(n - 1)?);
    }
    Ok(out)
}

fn shift(s: &LaurentSeries<Rational>, by: i64, prec: u32) -> LaurentSeries<BigComplex> {
    let lifted = s.lift(prec);
    LaurentSeries::from_coeffs(
        lifted.min_exp() + by,
        lifted.coeffs().to_vec(),
        prec,
    )
}

fn shift_c(s: &LaurentSeries<BigComplex>, to_min: i64) -> LaurentSeries<BigComplex> {
    LaurentSeries::from_coeffs(to_min, s.coeffs().to_vec(), s.prec())
}

fn replace_coeff(
    s: &LaurentSeries<BigComplex>,
    idx: usize,
    value: BigComplex,
) -> LaurentSeries<BigComplex> {
    let mut coeffs = s.coeffs().to_vec();
    coeffs[idx] = value;
    LaurentSeries::from_coeffs(s.min_exp(), coeffs, s.prec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fl(prec: u32, x: f64) -> Float {
        Float::with_val(prec, x)
    }

    #[test]
    fn a_value_trivial_cases() {
        let p = 128;
        // Gaussian unit ideal: all exponent terms vanish
        let a = a_value(Field::Gaussian, 0, 1, (1, 0), 7, 8, p).unwrap();
        assert!((a.re.clone() - 1u32).abs() < fl(p, 1e-30));
        assert!(a.im.clone().abs() < fl(p, 1e-30));
        // |A| = 1 always
        for (c, d, n, k) in [(1i64, 2i64, 3i64, 8u32), (2, 1, 5, 12), (3, 4, 1, 16)] {
            let bez = ideals::bezout(c, d).unwrap();
            let a = a_value(Field::Gaussian, c, d, bez, n, k, p).unwrap();
            assert!((a.abs() - 1u32).abs() < fl(p, 1e-30));
        }
        // invalid Bézout pair rejected
        assert!(a_value(Field::Gaussian, 1, 2, (1, 0), 0, 8, p).is_err());
    }

    #[test]
    fn a_value_bezout_shift_invariance() {
        let p = 192;
        let (c, d) = (3i64, 5i64);
        let (a0, b0) = ideals::bezout(c, d).unwrap();
        for field in [Field::Gaussian, Field::Eisenstein] {
            for n in 0..6 {
                let base = a_value(field, c, d, (a0, b0), n, 12, p).unwrap();
                for t in -3..=3i64 {
                    let shifted = a_value(field, c, d, (a0 + t * c, b0 + t * d), n, 12, p).unwrap();
                    // exact rational reduction makes this bit-identical
                    assert_eq!(base.re, shifted.re, "t={t} n={n} {field:?}");
                    assert_eq!(base.im, shifted.im);
                }
            }
        }
    }

    #[test]
    fn c_value_examples() {
        let p = 160;
        // norm-1 ideal at the Gaussian point: C = 1 for all n, k
        let unit = ideals::canonical_rep(Field::Gaussian, 0, 1).unwrap();
        for n in 0..5 {
            let c = c_value(&unit, n, 8, p).unwrap();
            assert!((c - 1u32).abs() < fl(p, 1e-40));
        }
        // the norm-3 ideal of ℤ[ρ] alternates (−1)^{n+1}: this is the
        // oracle-confirmed value of Re A₆ there
        let three = ideals::canonical_rep(Field::Eisenstein, 1, 1).unwrap();
        for n in 0..6 {
            let c = c_value(&three, n, 6, p).unwrap();
            let expect = if n % 2 == 0 { -1f64 } else { 1f64 };
            assert!((c - fl(p, expect)).abs() < fl(p, 1e-40), "n={n}");
        }
        // wrong weight congruence is rejected
        assert!(matches!(c_value(&three, 0, 8, p), Err(Error::WeightCongruence { .. })));
    }

    #[test]
    fn c_conjugation_invariance() {
        let p = 128;
        for field in [Field::Gaussian, Field::Eisenstein] {
            let k = 2 * field.omega() * 2;
            for b in ideals::enumerate_primitive_ideals(field, 100) {
                let bc = ideals::conjugate_ideal(&b);
                for n in 0..=10 {
                    let x = c_value(&b, n, k, p).unwrap();
                    let y = c_value(&bc, n, k, p).unwrap();
                    assert!((x - &y).abs() < fl(p, 1e-30), "{field:?} N={} n={n}", b.norm);
                }
            }
        }
    }

    #[test]
    fn c_unit_orbit_invariance_via_canonicalization() {
        // c_value is defined on canonical representatives; feeding any orbit
        // member through canonical_rep must give the same C
        let p = 128;
        for field in [Field::Gaussian, Field::Eisenstein] {
            let k = 2 * field.omega();
            for b in ideals::enumerate_primitive_ideals(field, 60) {
                let base = c_value(&b, 3, k, p).unwrap();
                let (mut c, mut d) = (b.c, b.d);
                for _ in 0..field.omega() {
                    let rep = ideals::canonical_rep(field, c, d).unwrap();
                    let v = c_value(&rep, 3, k, p).unwrap();
                    assert_eq!(base, v);
                    let rep2 = ideals::canonical_rep(field, -c, -d).unwrap();
                    assert_eq!(base, c_value(&rep2, 3, k, p).unwrap());
                    // walk the orbit
                    let (nc, nd) = match field {
                        Field::Gaussian => (d, -c),
                        Field::Eisenstein => (c + d, -c),
                    };
                    c = nc;
                    d = nd;
                }
            }
        }
    }

    #[test]
    fn cosine_formulas_agree_with_re_a() {
        let p = 192;
        for field in [Field::Gaussian, Field::Eisenstein] {
            let k = 2 * field.omega() * 2; // 8 at i, 12 at rho
            for b in ideals::enumerate_primitive_ideals(field, 80) {
                for n in 0..5 {
                    if let Some(cf) = c_value_cosine_formula(&b, n, k, p) {
                        let cv = c_value(&b, n, k, p).unwrap();
                        assert!(
                            (cf - &cv).abs() < fl(p, 1e-40),
                            "{field:?} ideal ({}, {}) n={n}",
                            b.c,
                            b.d
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn f_coefficient_basics() {
        let p = 192;
        // r ≥ 1 kills n = 0
        let v = f_coefficient(Field::Eisenstein, 12, 0, 1, 0, 100, p).unwrap();
        assert!(v.value.is_zero());
        // convergence constraint enforced
        assert!(matches!(
            f_coefficient(Field::Gaussian, 4, 1, 0, 1, 100, p),
            Err(Error::ConvergenceRegion { .. })
        ));
        // F(ρ; 6,0,0) at n=0 sums to E₆(ρ)/3
        let v = f_coefficient(Field::Eisenstein, 6, 0, 0, 0, 4000, p).unwrap();
        let expect = e6_at_rho(p) / 3u32;
        let err = (v.value.re.clone() - &expect).abs();
        assert!(err.to_f64() < 1e-8, "err = {:e}", err.to_f64());
    }

    #[test]
    fn recipe_catalog_is_complete() {
        for t in qseries::TARGETS {
            let r = recipe_for(t, 128).unwrap();
            assert!(!r.terms.is_empty());
            for term in &r.terms {
                assert!(term.k >= 4 + 2 * term.l);
                assert_eq!(term.k % (2 * r.field.omega()), 0);
            }
        }
        assert!(recipe_for("E8/E6", 128).is_err());
    }

    #[test]
    fn formula_matches_oracle_for_growing_n() {
        // spot-check the machinery end to end at moderate cutoff
        let p = 192;
        let oracle = qseries::oracle_coefficients("1/E4", 6).unwrap();
        for n in 4..=6 {
            let f = formula_coefficient("1/E4", n, 2000, p).unwrap();
            let o = Float::with_val(f.precision_bits, &oracle.coeff(n).unwrap());
            let rel = (f.value.re.clone() - &o).abs() / o.abs();
            assert!(rel.to_f64() < 1e-12, "n={n} rel={:e}", rel.to_f64());
        }
    }

    #[test]
    fn dual_route_for_one_over_e4() {
        let p = 160;
        for n in 0..=3 {
            let folded = formula_coefficient("1/E4", n, 1500, p).unwrap();
            let raw = beta_direct_pairs(n, 1500, p).unwrap();
            let diff = (&folded.value - &raw.value).abs();
            let scale = folded.value.abs().max(&Float::with_val(p, 1));
            assert!(
                (diff / scale).to_f64() < 1e-20,
                "n={n}: folded and raw routes disagree"
            );
            // the raw route is genuinely complex arithmetic; its imaginary
            // part must still cancel
            assert!(raw.value.im.clone().abs().to_f64() < 1e-20);
        }
    }

    #[test]
    fn tail_estimate_properties() {
        let p = 128;
        // monotone decreasing in Λ
        let t1 = tail_estimate(Field::Eisenstein, 12, 0, 0, 1, 1000, p).unwrap();
        let t2 = tail_estimate(Field::Eisenstein, 12, 0, 0, 1, 2000, p).unwrap();
        assert!(t2 < t1);
        // k=12, ℓ=0, n=1, Λ=10⁴: well under 1e−10·e^{π√3}
        let t = tail_estimate(Field::Eisenstein, 12, 0, 0, 1, 10_000, p).unwrap();
        let bound = Float::with_val(p, 1e-10)
            * (complex::pi(p) * Float::with_val(p, 3).sqrt()).exp();
        assert!(t < bound, "t = {:e}", t.to_f64());
    }

    #[test]
    fn tail_sandwich_against_doubling() {
        let p = 160;
        for (target, n) in [("1/E4", 0i64), ("1/E4", 3), ("1/E6", 1), ("1/E4^2", 2)] {
            let lo = formula_coefficient(target, n, 1000, p).unwrap();
            let hi = formula_coefficient(target, n, 2000, p).unwrap();
            let observed = (&hi.value - &lo.value).abs();
            assert!(
                observed <= lo.tail_estimate,
                "{target} n={n}: |value(2Λ)−value(Λ)| = {:e} exceeds tail {:e}",
                observed.to_f64(),
                lo.tail_estimate.to_f64()
            );
        }
    }

    #[test]
    fn ideal_count_linear_bound_holds() {
        // the c₀ = 1 counting envelope used by tail_estimate
        for field in [Field::Gaussian, Field::Eisenstein] {
            let ids = ideals::enumerate_primitive_ideals(field, 10_000);
            let mut seen = 0usize;
            let mut norms: Vec<i64> = ids.iter().map(|b| b.norm).collect();
            norms.sort_unstable();
            for (i, nn) in norms.iter().enumerate() {
                seen = i + 1;
                assert!(seen as i64 <= *nn, "{field:?}: count({nn}) = {seen}");
            }
            let _ = seen;
        }
    }

    #[test]
    fn pole_family_refuses_elliptic_points() {
        let p = 192;
        let at_i = RationalPoint::new(Rational::from(0), Rational::from(1));
        assert!(matches!(
            pole_family_lambdas(&at_i, p),
            Err(Error::EllipticProximity { .. })
        ));
    }

    #[test]
    fn pole_family_lambda_reality_at_2i() {
        let p = 256;
        let tau = RationalPoint::new(Rational::from(0), Rational::from(2));
        let (lam2, lam1) = pole_family_lambdas(&tau, p).unwrap();
        // on the imaginary axis λ₋₂ is real, λ₋₁ purely imaginary
        assert!(lam2.im.clone().abs().to_f64() < 1e-20);
        assert!(lam1.re.clone().abs().to_f64() < 1e-20);
        assert!(lam2.re.to_f64() < 0.0);
    }

    #[test]
    fn pole_family_formula_matches_oracle_at_2i() {
        let p = 192;
        let tau = RationalPoint::new(Rational::from(0), Rational::from(2));
        let oracle = pole_family_oracle(&tau, 3, p).unwrap();
        for n in 0..=3i64 {
            let f = pole_family_coefficient(&tau, n, 3000, p).unwrap();
            let o = &oracle[n as usize];
            let d = (&f.value - o).abs();
            let rel = if o.is_zero() {
                d.clone()
            } else {
                d.clone() / o.abs()
            };
            assert!(rel.to_f64() < 1e-10, "n={n} rel={:e}", rel.to_f64());
        }
        // oracle coefficients for τ₀ = 2i are integers: spot-check n=2
        let two = &oracle[2];
        assert!((two.re.clone() - 573768u32).abs().to_f64() < 1e-6);
    }

    #[test]
    fn b_term_at_identity_coset() {
        // B_{m,0,1}(τ₀, n) = e^{2πn v₀}: with (c,d) = (0,1), (a,b) = (1,0)
        let tau = RationalPoint::new(Rational::from(0), Rational::from(2));
        let lam = tau.lambda(0, 1);
        assert_eq!(lam, Rational::from(1));
        let p = tau.phase_p(0, 1, 1, 0);
        assert_eq!(p, Rational::from(0));
    }
}
