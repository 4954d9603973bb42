//! Embedded high-precision decimal constants and the two closed-form
//! special values the ideal-sum expansions are normalized by.
//!
//! Γ(1/4), Γ(1/3), Γ(2/3) and π are stored as 120-significant-digit decimal
//! strings. The special values built from them,
//!
//! - E₄(i) = 3 Γ(1/4)⁸ / (2π)⁶
//! - E₆(ρ) = 24√3 Ω⁶ with Ω = (6π)^{-1/2} (Γ(1/3)/Γ(2/3))^{3/2}
//!
//! are cross-checked at test time against direct q-series evaluation at the
//! CM points (a route that needs no Γ at all).

use crate::{Error, Result};
use rug::ops::Pow;
use rug::Float;

const GAMMA_ONE_QUARTER: &str =
    "3.62560990822190831193068515586767200299516768288006546743337799956991924353872912161836013672338430036147175139242071997";
const GAMMA_ONE_THIRD: &str =
    "2.67893853470774763365569294097467764412868937795730110095042832759041761016774381954098288904118878941915904920007226334";
const GAMMA_TWO_THIRDS: &str =
    "1.35411793942640041694528802815451378551932726605679369839402246796378296540174254167583414795297291110643482361003305885";
const PI_DECIMAL: &str =
    "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651328230665";

/// Highest precision (bits) at which the embedded 120-digit constants are
/// still accurate to better than an ulp, with a small safety margin.
pub const MAX_CONST_PREC: u32 = 390;

/// Named closed-form special values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialValue {
    /// E₄ at the Gaussian CM point i (Chowla–Selberg form).
    E4AtI,
    /// E₆ at the hexagonal CM point ρ = e^{iπ/3} (Chowla–Selberg form).
    E6AtRho,
}

fn parse_const(prec: u32, s: &str) -> Result<Float> {
    if prec > MAX_CONST_PREC {
        return Err(Error::ConstantPrecision { requested: prec, max: MAX_CONST_PREC });
    }
    Ok(Float::with_val(prec, Float::parse(s).expect("embedded constant parses")))
}

pub fn gamma_one_quarter(prec: u32) -> Result<Float> {
    parse_const(prec, GAMMA_ONE_QUARTER)
}

pub fn gamma_one_third(prec: u32) -> Result<Float> {
    parse_const(prec, GAMMA_ONE_THIRD)
}

pub fn gamma_two_thirds(prec: u32) -> Result<Float> {
    parse_const(prec, GAMMA_TWO_THIRDS)
}

/// π from the embedded decimal string (the closed-form route uses this;
/// everything else uses MPFR's π directly).
pub fn pi_embedded(prec: u32) -> Result<Float> {
    parse_const(prec, PI_DECIMAL)
}

/// Closed-form special value at the requested precision.
pub fn special_value(name: SpecialValue, prec: u32) -> Result<Float> {
    match name {
        SpecialValue::E4AtI => {
            let g = gamma_one_quarter(prec)?;
            let pi = pi_embedded(prec)?;
            let g8 = g.pow(8u32);
            let two_pi_6 = (Float::with_val(prec, 2) * pi).pow(6u32);
            Ok(Float::with_val(prec, 3) * g8 / two_pi_6)
        }
        SpecialValue::E6AtRho => {
            let g13 = gamma_one_third(prec)?;
            let g23 = gamma_two_thirds(prec)?;
            let pi = pi_embedded(prec)?;
            // Ω⁶ = (6π)^{-3} (Γ(1/3)/Γ(2/3))⁹
            let ratio9 = (g13 / g23).pow(9u32);
            let six_pi_3 = (Float::with_val(prec, 6) * pi).pow(3u32);
            let sqrt3 = Float::with_val(prec, 3).sqrt();
            Ok(Float::with_val(prec, 24) * sqrt3 * ratio9 / six_pi_3)
        }
    }
}
