//! Point evaluation of q-expansions on the upper half-plane in
//! arbitrary-precision arithmetic: values, z-derivatives, the completed
//! weight-2 Eisenstein series Ê₂, and truncation-tail estimates.

use crate::complex::{self, BigComplex};
use crate::qseries::{self, Form, LaurentSeries};
use crate::{Error, Result};
use rug::{Float, Rational};

/// Result of evaluating a truncated series at a point: the value and an
/// engineering estimate of the dropped tail (geometric envelope bound, not
/// a formally verified enclosure).
#[derive(Debug, Clone)]
pub struct PointEvaluation {
    pub value: BigComplex,
    pub tail_bound: Float,
    pub precision_bits: u32,
}

/// Guard bits added on top of a requested target precision.
pub const GUARD_BITS: u32 = 32;

/// Working precision for computations whose values grow like e^{πn√3}:
/// target + guard + magnitude-aware headroom for coefficient index n.
pub fn working_prec(target_bits: u32, n: i64) -> u32 {
    let magnitude_bits = (n.max(0) as f64 * std::f64::consts::PI * 3f64.sqrt() / 2f64.ln()).ceil();
    target_bits + GUARD_BITS + magnitude_bits as u32
}

/// Coefficient-growth envelope |a_n| ≤ C·n^s (n ≥ 1) for tail bounding.
#[derive(Debug, Clone, Copy)]
pub struct GrowthEnvelope {
    pub c: f64,
    pub s: u32,
}

/// Envelopes for the generator series. Divisor sums obey
/// σ_{k−1}(n) ≤ ζ(k−1)·n^{k−1}; τ(n) ≤ n^7 comfortably; j's coefficients
/// grow subexponentially and get a generous polynomial-times-e^{4π√n}
/// special case in [`tail_bound`].
pub fn envelope_for(form: Form) -> GrowthEnvelope {
    match form {
        Form::E2 => GrowthEnvelope { c: 40.0, s: 2 },
        Form::E4 => GrowthEnvelope { c: 290.0, s: 3 },
        Form::E6 => GrowthEnvelope { c: 530.0, s: 5 },
        Form::Delta => GrowthEnvelope { c: 1.0, s: 7 },
        Form::J => GrowthEnvelope { c: 1.0, s: 0 }, // handled specially
    }
}

/// Upper estimate of Σ_{n>N} |a_n| x^n for |a_n| ≤ C n^s and 0 < x < 1,
/// via the ratio bound x·(1 + 1/N)^s.
fn poly_tail(env: GrowthEnvelope, x: &Float, order: i64, prec: u32) -> Float {
    let n1 = Float::with_val(prec, order + 1);
    let ratio = {
        let base = Float::with_val(prec, 1) + Float::with_val(prec, 1) / &n1;
        let mut r = Float::with_val(prec, 1);
        for _ in 0..env.s {
            r *= &base;
        }
        r * x
    };
    if ratio >= 1 {
        return Float::with_val(prec, f64::INFINITY);
    }
    let mut lead = Float::with_val(prec, env.c);
    let mut npow = Float::with_val(prec, 1);
    for _ in 0..env.s {
        npow *= &n1;
    }
    lead *= npow;
    let xp = x.clone().pow_i64(order + 1, prec);
    lead * xp / (Float::with_val(prec, 1) - ratio)
}

/// Tail estimate for j: coefficients below e^{4π√n}.
fn j_tail(x: &Float, order: i64, prec: u32) -> Float {
    let four_pi = Float::with_val(prec, 4) * complex::pi(prec);
    let n1 = Float::with_val(prec, order + 1);
    let lead = (four_pi.clone() * n1.clone().sqrt()).exp() * x.clone().pow_i64(order + 1, prec);
    // ratio bound: x · e^{4π(√(n+1)−√n)} ≤ x · e^{2π/√N}
    let ratio = (Float::with_val(prec, 2) * complex::pi(prec) / n1.sqrt()).exp() * x.clone();
    if ratio >= 1 {
        return Float::with_val(prec, f64::INFINITY);
    }
    lead / (Float::with_val(prec, 1) - ratio)
}

trait PowI64 {
    fn pow_i64(self, e: i64, prec: u32) -> Float;
}

impl PowI64 for Float {
    fn pow_i64(self, e: i64, prec: u32) -> Float {
        let mut acc = Float::with_val(prec, 1);
        let mut base = self;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc *= &base;
            }
            k >>= 1;
            if k > 0 {
                base.square_mut();
            }
        }
        if e < 0 {
            acc.recip_mut();
        }
        acc
    }
}

/// q = e^{2πiτ}.
pub fn nome(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    if !(tau.im.is_sign_positive() && !tau.im.is_zero()) {
        return Err(Error::NotUpperHalfPlane);
    }
    let two_pi = Float::with_val(prec, 2) * complex::pi(prec);
    let w = BigComplex::new(
        Float::with_val(prec, -&tau.im) * &two_pi,
        Float::with_val(prec, &tau.re * &two_pi),
    );
    Ok(w.exp())
}

/// Truncation order that pushes |q|^order below 2^{−(prec+16)}.
pub fn required_order(im_tau: f64, prec: u32) -> i64 {
    let bits = (prec + 16) as f64;
    let per_term = 2.0 * std::f64::consts::PI * im_tau / std::f64::consts::LN_2;
    (bits / per_term).ceil() as i64 + 8
}

/// Evaluate a rational-coefficient Laurent series at τ by Horner's rule on
/// q = e^{2πiτ}, principal part included. Errors out rather than silently
/// degrading when the stored order cannot reach the requested precision.
pub fn eval_at(
    series: &LaurentSeries<Rational>,
    envelope: GrowthEnvelope,
    is_j: bool,
    tau: &BigComplex,
    prec: u32,
) -> Result<PointEvaluation> {
    let wp = prec + GUARD_BITS;
    let q = nome(tau, wp)?;
    let qabs = q.abs();
    // |q|^order must undercut the target resolution
    let target = Float::with_val(wp, 2).pow_i64(-((prec + 16) as i64), wp);
    let reach = qabs.clone().pow_i64(series.order().max(1), wp);
    if series.order() >= 1 && reach > target {
        let needed = required_order(tau.im.to_f64(), prec);
        return Err(Error::InsufficientOrder { needed, have: series.order() });
    }
    let mut acc = BigComplex::zero(wp);
    for n in (series.min_exp()..=series.order()).rev() {
        acc = &acc * &q;
        let c = series.coeff(n).expect("within stored range");
        if c != 0 {
            let cf = BigComplex::from_rationals(wp, &c, &Rational::new());
            acc = &acc + &cf;
        }
    }
    // unwind to q^{min_exp}
    let value = if series.min_exp() != 0 {
        &acc * &q.powi(series.min_exp())
    } else {
        acc
    };
    let tail = if is_j {
        j_tail(&qabs, series.order(), wp)
    } else {
        poly_tail(envelope, &qabs, series.order(), wp)
    };
    Ok(PointEvaluation { value, tail_bound: tail, precision_bits: wp })
}

/// Σ (2πin)^r a_n qⁿ: the r-th z-derivative of the series, r ∈ {0, 1, 2}.
pub fn eval_derivative_at(
    series: &LaurentSeries<Rational>,
    envelope: GrowthEnvelope,
    is_j: bool,
    r: u32,
    tau: &BigComplex,
    prec: u32,
) -> Result<BigComplex> {
    if r > 2 {
        return Err(Error::DerivativeOrder(r));
    }
    let mut s = series.clone();
    for _ in 0..r {
        s = s.derive();
    }
    // derivative multiplies the envelope by n^r
    let env = GrowthEnvelope { c: envelope.c, s: envelope.s + r };
    let ev = eval_at(&s, env, is_j, tau, prec)?;
    let wp = ev.precision_bits;
    let two_pi_i = BigComplex::new(Float::new(wp), Float::with_val(wp, 2) * complex::pi(wp));
    Ok(&ev.value * &two_pi_i.powi(r as i64))
}

/// Evaluate a named generator form, choosing the truncation order from the
/// requested precision automatically.
pub fn form_value(form: Form, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let order = required_order(tau.im.to_f64(), prec).max(2);
    let series = qseries::form_series(form, order)?;
    Ok(eval_at(&series, envelope_for(form), form == Form::J, tau, prec)?.value)
}

/// r-th z-derivative of a named generator form.
pub fn form_derivative(form: Form, r: u32, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let order = required_order(tau.im.to_f64(), prec).max(2) + 2 * r as i64;
    let series = qseries::form_series(form, order)?;
    eval_derivative_at(&series, envelope_for(form), form == Form::J, r, tau, prec)
}

/// Ê₂(τ) = E₂(τ) − 3/(π·Im τ), the weight-2 completion. Vanishes at i and ρ.
pub fn e2hat_at(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let wp = prec + GUARD_BITS;
    let e2 = form_value(Form::E2, tau, prec)?;
    let corr = Float::with_val(wp, 3) / (complex::pi(wp) * &tau.im);
    Ok(&e2 - &BigComplex::from_real(corr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{self, SpecialValue};

    fn assert_small(x: &Float, bound: f64) {
        assert!(
            x.clone().abs().to_f64() < bound,
            "expected |{}| < {bound:e}",
            x.to_f64()
        );
    }

    fn tau(re: f64, im: f64, prec: u32) -> BigComplex {
        BigComplex::from_f64s(prec, re, im)
    }

    #[test]
    fn delta_at_i_matches_product_oracle() {
        let p = 128;
        let t = tau(0.0, 1.0, p);
        let series = qseries::form_series(Form::Delta, required_order(1.0, p)).unwrap();
        let ev = eval_at(&series, envelope_for(Form::Delta), false, &t, p).unwrap();
        // independent route: Delta = q Π (1-q^n)^24
        let wp = ev.precision_bits;
        let q = nome(&t, wp).unwrap();
        let mut prod = BigComplex::one(wp);
        let mut qn = q.clone();
        for _ in 1..200 {
            let f = &BigComplex::one(wp) - &qn;
            prod = &prod * &f.powi(24);
            qn = &qn * &q;
        }
        let expect = &prod * &q;
        let diff = (&ev.value - &expect).abs();
        assert_small(&diff, 1e-35);
        assert!(ev.value.re.to_f64() > 0.0017852 && ev.value.re.to_f64() < 0.0017854);
        assert_small(&ev.value.im, 1e-35);
    }

    #[test]
    fn zero_series_evaluates_to_zero() {
        let p = 96;
        let e4 = qseries::form_series(Form::E4, 40).unwrap();
        let diff_series = e4.sub(&e4);
        let ev = eval_at(&diff_series, envelope_for(Form::E4), false, &tau(0.3, 1.1, p), p).unwrap();
        assert!(ev.value.is_zero());
    }

    #[test]
    fn j_at_2i_is_287496() {
        let p = 128;
        let v = form_value(Form::J, &tau(0.0, 2.0, p), p).unwrap();
        let diff = (v.re.clone() - 287496u32).abs();
        assert_small(&diff, 1e-25);
        assert_small(&v.im, 1e-25);
    }

    #[test]
    fn insufficient_order_is_reported() {
        let p = 256;
        let e4 = qseries::form_series(Form::E4, 5).unwrap();
        let res = eval_at(&e4, envelope_for(Form::E4), false, &tau(0.0, 1.0, p), p);
        assert!(matches!(res, Err(Error::InsufficientOrder { .. })));
    }

    #[test]
    fn derivative_rules() {
        let p = 160;
        let t = tau(0.0, 1.5, p);
        // r = 0 reduces to eval_at
        let e6 = qseries::form_series(Form::E6, required_order(1.5, p)).unwrap();
        let d0 = eval_derivative_at(&e6, envelope_for(Form::E6), false, 0, &t, p).unwrap();
        let v = eval_at(&e6, envelope_for(Form::E6), false, &t, p).unwrap().value;
        assert_small(&(&d0 - &v).abs(), 1e-40);
        // derivative of the constant series is 0
        let one: LaurentSeries = LaurentSeries::one_through(40, 0);
        let d1 = eval_derivative_at(&one, GrowthEnvelope { c: 1.0, s: 0 }, false, 1, &t, p).unwrap();
        assert!(d1.abs().is_zero());
        // (1/2πi) E2' = (E2² − E4)/12 at τ = 3i/2
        let e2p = form_derivative(Form::E2, 1, &t, p).unwrap();
        let wp = e2p.prec();
        let two_pi_i = BigComplex::new(Float::new(wp), Float::with_val(wp, 2) * complex::pi(wp));
        let lhs = &e2p / &two_pi_i;
        let e2v = form_value(Form::E2, &t, p).unwrap();
        let e4v = form_value(Form::E4, &t, p).unwrap();
        let rhs = (&(&e2v * &e2v) - &e4v).scale(&Float::with_val(wp, Rational::from((1, 12))));
        assert_small(&(&lhs - &rhs).abs(), 1e-40);
    }

    #[test]
    fn e2hat_vanishes_at_elliptic_points_not_at_2i() {
        let p = 192;
        let at_i = e2hat_at(&tau(0.0, 1.0, p), p).unwrap();
        assert_small(&at_i.abs(), 1e-45);
        let rho = BigComplex::new(
            Float::with_val(p, Rational::from((1, 2))),
            Float::with_val(p, 3).sqrt() / 2u32,
        );
        let at_rho = e2hat_at(&rho, p).unwrap();
        assert_small(&at_rho.abs(), 1e-45);
        let at_2i = e2hat_at(&tau(0.0, 2.0, p), p).unwrap();
        assert!(at_2i.abs().to_f64() > 1e-3);
    }

    #[test]
    fn special_values_match_qseries_routes() {
        // two independent routes to E4(i) and E6(rho) agree to 1e-40
        let p = 256;
        let closed_e4 = constants::special_value(SpecialValue::E4AtI, p).unwrap();
        let series_e4 = form_value(Form::E4, &tau(0.0, 1.0, p), p).unwrap();
        let d1 = (series_e4.re.clone() - &closed_e4).abs();
        assert_small(&d1, 1e-40);

        let rho = BigComplex::new(
            Float::with_val(p + GUARD_BITS, Rational::from((1, 2))),
            Float::with_val(p + GUARD_BITS, 3).sqrt() / 2u32,
        );
        let closed_e6 = constants::special_value(SpecialValue::E6AtRho, p).unwrap();
        let series_e6 = form_value(Form::E6, &rho, p).unwrap();
        let d2 = (series_e6.re.clone() - &closed_e6).abs();
        assert_small(&d2, 1e-40);
        assert!(closed_e6.is_sign_positive());
    }

    #[test]
    fn modularity_spot_check_e4() {
        // E4(-1/τ) = τ⁴ E4(τ) at a few generic fundamental-domain points
        let p = 192;
        for (re, im) in [(0.21, 1.13), (-0.37, 0.95), (0.05, 2.4)] {
            let t = tau(re, im, p);
            let minus_inv = -&t.recip();
            let lhs = form_value(Form::E4, &minus_inv, p).unwrap();
            let rhs_val = form_value(Form::E4, &t, p).unwrap();
            let rhs = &rhs_val * &t.powi(4);
            let rel = (&lhs - &rhs).abs() / rhs.abs();
            assert!(rel.to_f64() < 1e-45, "rel = {:e}", rel.to_f64());
        }
    }

    #[test]
    fn precision_monotonicity() {
        let p_lo = 128;
        let p_hi = 320;
        let t_lo = tau(0.1, 1.2, p_lo);
        let t_hi = tau(0.1, 1.2, p_hi);
        let series = qseries::form_series(Form::E6, required_order(1.2, p_hi)).unwrap();
        let lo = eval_at(&series, envelope_for(Form::E6), false, &t_lo, p_lo).unwrap();
        let hi = eval_at(&series, envelope_for(Form::E6), false, &t_hi, p_hi).unwrap();
        let diff = (&lo.value - &hi.value).abs();
        let capped = Float::with_val(64, 2f64.powi(-(p_lo as i32) + 8));
        assert!(diff < capped + &lo.tail_bound);
    }
}
