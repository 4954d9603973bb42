//! Direct two-variable evaluation of the Poincaré series H_{m,ℓ}^{(r)}(𝔷, z)
//! and 𝓕_{m,ℓ}^{(r)}(𝔷, z) by lattice sums over coprime pairs, plus a
//! catalog of numerical identity checks built on them.
//!
//! The expanded form summed here is
//!
//!   H_{m,ℓ}^{(r)}(𝔷, z) = 2πi Σ_{(c,d)=1} Im(M𝔷)^{−ℓ} (c𝔷+d)^{−m} D_r(z − M𝔷)
//!
//! with D₀(w) = 1/(1−e^{2πiw}), D₁ = 2πi e^{2πiw}/(1−e^{2πiw})²,
//! D₂ = (2πi)² e^{2πiw}(1+e^{2πiw})/(1−e^{2πiw})³, and M𝔷 = (a𝔷+b)/(c𝔷+d)
//! for any Bézout completion (the terms are coset functions). Both signs of
//! (c, d) are separate cosets of Γ_∞ here since Γ_∞ contains no −I.
//!
//! Truncation is by square shells max(|c|,|d|) = R; shells are mapped in
//! parallel and combined in canonical shell order, so results do not depend
//! on the thread schedule.

use crate::complex::{self, BigComplex};
use crate::ideals;
use crate::parallel;
use crate::pointeval::{self, GUARD_BITS};
use crate::qseries::Form;
use crate::{Error, Result};
use rug::ops::Pow;
use rug::{Float, Rational};

/// Truncation and precision parameters for a lattice sum.
#[derive(Debug, Clone)]
pub struct LatticeSumConfig {
    /// Maximum shell radius max(|c|, |d|).
    pub box_bound: i64,
    /// Working precision in bits.
    pub prec: u32,
    /// Stop early once two consecutive full shells each contribute less
    /// than this in absolute value.
    pub convergence_threshold: Option<f64>,
}

impl LatticeSumConfig {
    pub fn new(box_bound: i64, prec: u32) -> Self {
        assert!(box_bound >= 2, "box_bound must be at least 2");
        LatticeSumConfig { box_bound, prec, convergence_threshold: None }
    }
}

/// Coprime pairs on the square shell max(|c|,|d|) = r, in lexicographic
/// order.
fn shell_pairs(r: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    if r == 0 {
        return out;
    }
    for c in -r..=r {
        for d in [-r, r] {
            if gcd(c, d) == 1 {
                out.push((c, d));
            }
        }
    }
    for d in (-r + 1)..=(r - 1) {
        for c in [-r, r] {
            if gcd(c, d) == 1 {
                out.push((c, d));
            }
        }
    }
    out.sort_unstable();
    out
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// One coset term: Im(M𝔷)^{−ℓ} (c𝔷+d)^{−m} D_r(z − M𝔷).
fn coset_term(
    m: u32,
    l: u32,
    r: u32,
    zf: &BigComplex,
    z: &BigComplex,
    c: i64,
    d: i64,
    wp: u32,
) -> Result<BigComplex> {
    let (a, b) = ideals::bezout(c, d).expect("shells contain only coprime pairs");
    let den = &zf.scale(&Float::with_val(wp, c)) + &BigComplex::from_real(Float::with_val(wp, d));
    let num = &zf.scale(&Float::with_val(wp, a)) + &BigComplex::from_real(Float::with_val(wp, b));
    let mz = &num / &den;
    // w = e^{2πi(z − M𝔷)}
    let two_pi = Float::with_val(wp, 2) * complex::pi(wp);
    let diff = z - &mz;
    let w = BigComplex::new(
        Float::with_val(wp, -&diff.im) * &two_pi,
        Float::with_val(wp, &diff.re) * &two_pi,
    )
    .exp();
    let one = BigComplex::one(wp);
    let denom1 = &one - &w;
    let guard = Float::with_val(wp, 2).pow(-((wp / 2) as i32));
    if denom1.abs() < guard {
        return Err(Error::NearPole);
    }
    let two_pi_i = BigComplex::new(Float::new(wp), two_pi);
    let kernel = match r {
        0 => denom1.recip(),
        1 => &(&two_pi_i * &w) / &denom1.powi(2),
        2 => {
            let num2 = &(&two_pi_i.powi(2) * &w) * &(&one + &w);
            &num2 / &denom1.powi(3)
        }
        _ => return Err(Error::DerivativeOrder(r)),
    };
    // Im(M𝔷)^{-ℓ} = (|c𝔷+d|²/𝔷₂)^ℓ
    let lam_over_z2 = den.norm_sqr() / &zf.im;
    let mut t = &den.powi(-(m as i64)) * &kernel;
    if l > 0 {
        t = t.scale(&lam_over_z2.pow(l));
    }
    Ok(t)
}

/// Direct lattice evaluation of H_{m,ℓ}^{(r)}(𝔷, z).
pub fn h_direct(
    m: u32,
    l: u32,
    r: u32,
    zf: &BigComplex,
    z: &BigComplex,
    cfg: &LatticeSumConfig,
) -> Result<BigComplex> {
    if m % 2 != 0 || m < 4 + 2 * l {
        return Err(Error::ConvergenceRegion { k: m, l });
    }
    if r > 2 {
        return Err(Error::DerivativeOrder(r));
    }
    let wp = cfg.prec + GUARD_BITS;
    let mut total = BigComplex::zero(wp);
    let mut small_shells = 0u32;
    for radius in 1..=cfg.box_bound {
        let pairs = shell_pairs(radius);
        let shell = sum_shell(&pairs, m, l, r, zf, z, wp)?;
        total = &total + &shell;
        if let Some(th) = cfg.convergence_threshold {
            if shell.abs().to_f64() < th {
                small_shells += 1;
                if small_shells >= 2 {
                    break;
                }
            } else {
                small_shells = 0;
            }
        }
    }
    let two_pi_i = BigComplex::new(Float::new(wp), Float::with_val(wp, 2) * complex::pi(wp));
    Ok(&two_pi_i * &total)
}

fn sum_shell(
    pairs: &[(i64, i64)],
    m: u32,
    l: u32,
    r: u32,
    zf: &BigComplex,
    z: &BigComplex,
    wp: u32,
) -> Result<BigComplex> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let vals: std::result::Result<Vec<BigComplex>, Error> = pairs
            .par_iter()
            .map(|&(c, d)| coset_term(m, l, r, zf, z, c, d, wp))
            .collect();
        let vals = vals?;
        let mut acc = BigComplex::zero(wp);
        for v in vals {
            acc = &acc + &v;
        }
        Ok(acc)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut acc = BigComplex::zero(wp);
        for &(c, d) in pairs {
            acc = &acc + &coset_term(m, l, r, zf, z, c, d, wp)?;
        }
        Ok(acc)
    }
}

/// Matched-cutoff Fourier evaluation: the same coprime-pair set, with each
/// coset's kernel replaced by its geometric expansion
/// Σ_{n≤n_max} (λ/𝔷₂)^ℓ (2πin)^r B_{m,c,d}(𝔷,n) qⁿ. Valid for
/// y > Im(M𝔷) over the enumerated cosets; serves as the independent oracle
/// for [`h_direct`].
pub fn fourier_h(
    m: u32,
    l: u32,
    r: u32,
    zf: &BigComplex,
    z: &BigComplex,
    box_bound: i64,
    n_max: i64,
    prec: u32,
) -> Result<BigComplex> {
    if m % 2 != 0 || m < 4 + 2 * l {
        return Err(Error::ConvergenceRegion { k: m, l });
    }
    let wp = prec + GUARD_BITS;
    let two_pi = Float::with_val(wp, 2) * complex::pi(wp);
    let mut pairs = Vec::new();
    for radius in 1..=box_bound {
        pairs.extend(shell_pairs(radius));
    }
    let term = |pd: &(i64, i64)| -> BigComplex {
        let (c, d) = *pd;
        let (a, b) = ideals::bezout(c, d).expect("coprime");
        let den =
            &zf.scale(&Float::with_val(wp, c)) + &BigComplex::from_real(Float::with_val(wp, d));
        let num =
            &zf.scale(&Float::with_val(wp, a)) + &BigComplex::from_real(Float::with_val(wp, b));
        let mz = &num / &den;
        let diff = z - &mz;
        // w = e^{2πi(z−M𝔷)}; the n-th Fourier term is w^n times the weights
        let w = BigComplex::new(
            Float::with_val(wp, -&diff.im) * &two_pi,
            Float::with_val(wp, &diff.re) * &two_pi,
        )
        .exp();
        let lam_over_z2 = den.norm_sqr() / &zf.im;
        let mut ell_factor = Float::with_val(wp, 1);
        for _ in 0..l {
            ell_factor *= &lam_over_z2;
        }
        let front = den.powi(-(m as i64)).scale(&ell_factor);
        let two_pi_i = BigComplex::new(Float::new(wp), Float::with_val(wp, &two_pi));
        let mut acc = BigComplex::zero(wp);
        let mut wn = BigComplex::one(wp);
        for n in 0..=n_max {
            if n > 0 {
                wn = &wn * &w;
            }
            let factor = match r {
                0 => BigComplex::one(wp),
                rr => {
                    let nf = BigComplex::from_real(Float::with_val(wp, n));
                    (&two_pi_i * &nf).powi(rr as i64)
                }
            };
            acc = &acc + &(&factor * &wn);
        }
        &front * &acc
    };
    let total = parallel::map_sum_complex(&pairs, wp, term);
    let two_pi_i = BigComplex::new(Float::new(wp), two_pi);
    Ok(&two_pi_i * &total)
}

/// 𝓕_{m,ℓ}^{(r)}(𝔷, z) = Σ_j (ℓ choose j) (3/π)^{ℓ−j} Ê₂(𝔷)^j
/// H_{m−2j,ℓ−j}^{(r)}(𝔷, z).
pub fn f_script_direct(
    m: u32,
    l: u32,
    r: u32,
    zf: &BigComplex,
    z: &BigComplex,
    cfg: &LatticeSumConfig,
) -> Result<BigComplex> {
    if m < 4 + 2 * l {
        return Err(Error::ConvergenceRegion { k: m, l });
    }
    let wp = cfg.prec + GUARD_BITS;
    let e2hat = pointeval::e2hat_at(zf, cfg.prec)?;
    let three_over_pi = Float::with_val(wp, 3) / complex::pi(wp);
    let mut total = BigComplex::zero(wp);
    for j in 0..=l {
        let h = h_direct(m - 2 * j, l - j, r, zf, z, cfg)?;
        let binom = Float::with_val(wp, binomial(l, j));
        let pow_pi = three_over_pi.clone().pow(l - j);
        let coef = e2hat.powi(j as i64).scale(&(binom * pow_pi));
        total = &total + &(&coef * &h);
    }
    Ok(total)
}

fn binomial(n: u32, k: u32) -> u64 {
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

const SQRT3_OVER_2: f64 = 0.8660254037844386;

/// Generic sample pairs (𝔷, z) used by the identity catalog.
fn sample_points(prec: u32) -> Vec<(BigComplex, BigComplex)> {
    let pt = |xr: (i64, i64), xi: (i64, i64), zr: (i64, i64), zi: (i64, i64)| {
        (
            BigComplex::from_rationals(prec, &Rational::from(xr), &Rational::from(xi)),
            BigComplex::from_rationals(prec, &Rational::from(zr), &Rational::from(zi)),
        )
    };
    vec![
        pt((1, 5), (6, 5), (1, 7), (2, 1)),
        pt((-1, 3), (7, 5), (2, 9), (5, 3)),
        pt((3, 11), (13, 10), (-1, 8), (12, 7)),
    ]
}

/// Result of evaluating one identity at one sample point.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub identity: String,
    pub sample: String,
    pub residual: Float,
    pub tolerance: f64,
    pub pass: bool,
}

/// Specification of a catalog entry: default truncation, documented
/// tolerance, and what limits the tolerance.
#[derive(Debug, Clone, Copy)]
pub struct IdentitySpec {
    pub name: &'static str,
    pub default_box: i64,
    pub default_prec: u32,
    /// Residual bound the entry is expected to meet at the default box;
    /// lattice-tail-limited entries scale like box^{−(m−2ℓ−2)}.
    pub tolerance: f64,
}

/// The checkable identity catalog.
pub const CATALOG: &[IdentitySpec] = &[
    IdentitySpec { name: "fourier_vs_direct_10_0_0", default_box: 12, default_prec: 192, tolerance: 1e-20 },
    IdentitySpec { name: "fourier_vs_direct_10_1_0", default_box: 12, default_prec: 192, tolerance: 1e-20 },
    IdentitySpec { name: "fourier_vs_direct_12_1_1", default_box: 12, default_prec: 192, tolerance: 1e-20 },
    IdentitySpec { name: "fourier_vs_direct_12_2_0", default_box: 12, default_prec: 192, tolerance: 1e-20 },
    IdentitySpec { name: "fourier_vs_direct_14_0_2", default_box: 12, default_prec: 192, tolerance: 1e-20 },
    IdentitySpec { name: "cor_htildegen_1a_m6", default_box: 80, default_prec: 192, tolerance: 1e-3 },
    IdentitySpec { name: "cor_htildegen_1a_m8", default_box: 80, default_prec: 192, tolerance: 1e-7 },
    IdentitySpec { name: "cor_htildegen_1a_m10", default_box: 80, default_prec: 192, tolerance: 1e-11 },
    IdentitySpec { name: "cor_htildegen_1a_m14", default_box: 130, default_prec: 192, tolerance: 1e-20 },
    IdentitySpec { name: "cor_htildegen_1b_m8", default_box: 80, default_prec: 192, tolerance: 1e-5 },
    IdentitySpec { name: "cor_htildegen_1b_m10", default_box: 80, default_prec: 192, tolerance: 1e-8 },
    IdentitySpec { name: "cor_htildegen_1b_m14", default_box: 340, default_prec: 192, tolerance: 1e-20 },
    IdentitySpec { name: "cor_htildegen_2_m6", default_box: 80, default_prec: 192, tolerance: 1e-3 },
    IdentitySpec { name: "cor_htildegen_2_m8", default_box: 80, default_prec: 192, tolerance: 1e-7 },
    IdentitySpec { name: "cor_htildegen_2_m10", default_box: 80, default_prec: 192, tolerance: 1e-11 },
    IdentitySpec { name: "cor_htildegen_2_m14", default_box: 130, default_prec: 192, tolerance: 1e-20 },
    IdentitySpec { name: "residue_h6", default_box: 60, default_prec: 256, tolerance: 1e-10 },
    IdentitySpec { name: "residue_z_h8", default_box: 60, default_prec: 256, tolerance: 1e-10 },
    IdentitySpec { name: "decay_h12", default_box: 40, default_prec: 192, tolerance: 1e-6 },
    IdentitySpec { name: "e2hat_i", default_box: 2, default_prec: 256, tolerance: 1e-30 },
    IdentitySpec { name: "e2hat_rho", default_box: 2, default_prec: 256, tolerance: 1e-30 },
    IdentitySpec { name: "h_translation_invariance", default_box: 40, default_prec: 192, tolerance: 1e-6 },
    IdentitySpec { name: "f_script_ell0_reduction", default_box: 20, default_prec: 192, tolerance: 1e-40 },
    IdentitySpec { name: "f_script_collapse_at_i", default_box: 20, default_prec: 192, tolerance: 1e-40 },
    IdentitySpec { name: "f_script_modularity_m14", default_box: 60, default_prec: 192, tolerance: 1e-12 },
];

pub fn spec_for(name: &str) -> Result<&'static IdentitySpec> {
    CATALOG
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownIdentity(name.to_string()))
}

fn fmt_point(zf: &BigComplex, z: &BigComplex) -> String {
    format!(
        "zf=({:.4},{:.4}) z=({:.4},{:.4})",
        zf.re.to_f64(),
        zf.im.to_f64(),
        z.re.to_f64(),
        z.im.to_f64()
    )
}

fn check(spec: &IdentitySpec, sample: String, residual: Float) -> IdentityCheck {
    let pass = residual.to_f64() < spec.tolerance;
    IdentityCheck {
        identity: spec.name.to_string(),
        sample,
        residual,
        tolerance: spec.tolerance,
        pass,
    }
}

/// Evaluate a named identity from the catalog at its sample points;
/// `box_override`/`prec_override` replace the catalog defaults.
pub fn run_identity(
    name: &str,
    box_override: Option<i64>,
    prec_override: Option<u32>,
) -> Result<Vec<IdentityCheck>> {
    let spec = spec_for(name)?;
    let bx = box_override.unwrap_or(spec.default_box);
    let prec = prec_override.unwrap_or(spec.default_prec);
    let cfg = LatticeSumConfig::new(bx, prec);
    let wp = prec + GUARD_BITS;
    let pi = complex::pi(wp);
    let mut out = Vec::new();

    if let Some(suffix) = name.strip_prefix("fourier_vs_direct_") {
        let parts: Vec<u32> = suffix.split('_').filter_map(|p| p.parse().ok()).collect();
        if parts.len() != 3 {
            return Err(Error::UnknownIdentity(name.to_string()));
        }
        let (m, l, r) = (parts[0], parts[1], parts[2]);
        for (zf, z) in [
            (BigComplex::i(wp), BigComplex::from_f64s(wp, 0.0, 2.0)),
            (BigComplex::i(wp), BigComplex::from_f64s(wp, 1.0 / 3.0, 1.8)),
        ] {
            let direct = h_direct(m, l, r, &zf, &z, &cfg)?;
            let fourier = fourier_h(m, l, r, &zf, &z, bx, 80, prec)?;
            let residual = (&direct - &fourier).abs();
            out.push(check(spec, fmt_point(&zf, &z), residual));
        }
        return Ok(out);
    }

    if let Some(m) = parse_m(name, "cor_htildegen_1a_m") {
        // H_{m,1}(𝔷,z) = (π/3)E₂(z)H_m(𝔷,z) − (π/3)Ê₂(𝔷)H_{m−2}(𝔷,z)
        for (zf, z) in sample_points(wp) {
            let lhs = h_direct(m, 1, 0, &zf, &z, &cfg)?;
            let e2z = pointeval::form_value(Form::E2, &z, prec)?;
            let e2hat = pointeval::e2hat_at(&zf, prec)?;
            let hm = h_direct(m, 0, 0, &zf, &z, &cfg)?;
            let hm2 = h_direct(m - 2, 0, 0, &zf, &z, &cfg)?;
            let pi3 = Float::with_val(wp, &pi) / 3u32;
            let rhs = &(&e2z * &hm).scale(&pi3) - &(&e2hat * &hm2).scale(&pi3);
            out.push(check(spec, fmt_point(&zf, &z), (&lhs - &rhs).abs()));
        }
        return Ok(out);
    }

    if let Some(m) = parse_m(name, "cor_htildegen_1b_m") {
        // H_{m,2} = (π/3)²E₂²(z)H_m − (2π/3)Ê₂(𝔷)H_{m−2,1} − (π/3)²Ê₂²(𝔷)H_{m−4}
        for (zf, z) in sample_points(wp) {
            let lhs = h_direct(m, 2, 0, &zf, &z, &cfg)?;
            let e2z = pointeval::form_value(Form::E2, &z, prec)?;
            let e2hat = pointeval::e2hat_at(&zf, prec)?;
            let hm = h_direct(m, 0, 0, &zf, &z, &cfg)?;
            let hm21 = h_direct(m - 2, 1, 0, &zf, &z, &cfg)?;
            let hm4 = h_direct(m - 4, 0, 0, &zf, &z, &cfg)?;
            let pi3 = Float::with_val(wp, &pi) / 3u32;
            let pi3sq = pi3.clone().square();
            let t1 = (&e2z.powi(2) * &hm).scale(&pi3sq);
            let t2 = (&e2hat * &hm21).scale(&(Float::with_val(wp, 2) * &pi3));
            let t3 = (&e2hat.powi(2) * &hm4).scale(&pi3sq);
            let rhs = &(&t1 - &t2) - &t3;
            out.push(check(spec, fmt_point(&zf, &z), (&lhs - &rhs).abs()));
        }
        return Ok(out);
    }

    if let Some(m) = parse_m(name, "cor_htildegen_2_m") {
        // E₂(z)H_m^{(1)} = (3/π)H_{m,1}^{(1)} + Ê₂(𝔷)H_{m−2}^{(1)}
        //                − (πi/6)(E₂²(z) − E₄(z))H_m
        for (zf, z) in sample_points(wp) {
            let e2z = pointeval::form_value(Form::E2, &z, prec)?;
            let e4z = pointeval::form_value(Form::E4, &z, prec)?;
            let e2hat = pointeval::e2hat_at(&zf, prec)?;
            let lhs = &e2z * &h_direct(m, 0, 1, &zf, &z, &cfg)?;
            let t1 = h_direct(m, 1, 1, &zf, &z, &cfg)?
                .scale(&(Float::with_val(wp, 3) / Float::with_val(wp, &pi)));
            let t2 = &e2hat * &h_direct(m - 2, 0, 1, &zf, &z, &cfg)?;
            let pi_i_6 = BigComplex::new(Float::new(wp), Float::with_val(wp, &pi) / 6u32);
            let bracket = &e2z.powi(2) - &e4z;
            let t3 = &(&pi_i_6 * &bracket) * &h_direct(m, 0, 0, &zf, &z, &cfg)?;
            let rhs = &(&t1 + &t2) - &t3;
            out.push(check(spec, fmt_point(&zf, &z), (&lhs - &rhs).abs()));
        }
        return Ok(out);
    }

    match name {
        "residue_h6" => {
            // (𝔷−z)·H₆(𝔷,z) → ε(z)(cz+d)^{m−2} = 2 as 𝔷 → z, generic z
            let z = BigComplex::from_rationals(
                wp,
                &Rational::from((1, 7)),
                &Rational::from(2),
            );
            let eps = Float::with_val(wp, 1e-13);
            let zf = &z + &BigComplex::from_real(eps.clone());
            let h = h_direct(6, 0, 0, &zf, &z, &cfg)?;
            let extracted = h.scale(&eps);
            let residual =
                (&extracted - &BigComplex::from_real(Float::with_val(wp, 2))).abs();
            out.push(check(spec, fmt_point(&zf, &z), residual));
        }
        "residue_z_h8" => {
            // (z−𝔷)·H₈(i,z) → ε̃(i)(c𝔷+d)^{−m} = −2ω_i = −4 as z → i
            let zf = BigComplex::i(wp);
            let eps = Float::with_val(wp, 1e-13);
            let z = &zf + &BigComplex::from_real(eps.clone());
            let h = h_direct(8, 0, 0, &zf, &z, &cfg)?;
            let extracted = h.scale(&eps);
            let residual =
                (&extracted - &BigComplex::from_real(Float::with_val(wp, -4))).abs();
            out.push(check(spec, fmt_point(&zf, &z), residual));
        }
        "decay_h12" => {
            // vanishing as 𝔷 → i∞: |H₁₂(10i, 3i/2)| is already tiny
            let zf = BigComplex::from_f64s(wp, 0.0, 10.0);
            let z = BigComplex::from_f64s(wp, 0.0, 1.5);
            let h = h_direct(12, 0, 0, &zf, &z, &cfg)?;
            out.push(check(spec, fmt_point(&zf, &z), h.abs()));
        }
        "e2hat_i" => {
            let t = BigComplex::i(wp);
            let v = pointeval::e2hat_at(&t, prec)?;
            out.push(check(spec, "zf=i".to_string(), v.abs()));
        }
        "e2hat_rho" => {
            let rho = BigComplex::new(
                Float::with_val(wp, Rational::from((1, 2))),
                Float::with_val(wp, 3).sqrt() / 2u32,
            );
            let v = pointeval::e2hat_at(&rho, prec)?;
            out.push(check(spec, "zf=rho".to_string(), v.abs()));
        }
        "h_translation_invariance" => {
            let z = BigComplex::from_f64s(wp, 0.0, 3.0);
            let zf1 = BigComplex::from_f64s(wp, 5.0, 1.0);
            let zf0 = BigComplex::i(wp);
            let a = h_direct(10, 0, 0, &zf1, &z, &cfg)?;
            let b = h_direct(10, 0, 0, &zf0, &z, &cfg)?;
            out.push(check(spec, fmt_point(&zf1, &z), (&a - &b).abs()));
        }
        "f_script_ell0_reduction" => {
            let (zf, z) = (BigComplex::from_f64s(wp, 0.2, 1.2), BigComplex::from_f64s(wp, 0.1, 2.0));
            let a = f_script_direct(10, 0, 1, &zf, &z, &cfg)?;
            let b = h_direct(10, 0, 1, &zf, &z, &cfg)?;
            out.push(check(spec, fmt_point(&zf, &z), (&a - &b).abs()));
        }
        "f_script_collapse_at_i" => {
            // Ê₂(i) = 0 collapses the binomial sum to (3/π)^ℓ H_{m,ℓ}
            let zf = BigComplex::i(wp);
            let z = BigComplex::from_f64s(wp, 0.0, 2.0);
            let a = f_script_direct(10, 2, 0, &zf, &z, &cfg)?;
            let factor = (Float::with_val(wp, 3) / Float::with_val(wp, &pi)).square();
            let b = h_direct(10, 2, 0, &zf, &z, &cfg)?.scale(&factor);
            out.push(check(spec, fmt_point(&zf, &z), (&a - &b).abs()));
        }
        "f_script_modularity_m14" => {
            // weight-14 modularity in 𝔷: 𝓕(−1/𝔷, z) = 𝔷¹⁴ 𝓕(𝔷, z)
            let zf = BigComplex::new(
                Float::with_val(wp, Rational::from((1, 3))),
                Float::with_val(wp, Rational::from((3, 2))),
            );
            let z = BigComplex::from_f64s(wp, 0.0, 2.0);
            let minus_inv = -&zf.recip();
            let lhs = f_script_direct(14, 1, 0, &minus_inv, &z, &cfg)?;
            let rhs = &zf.powi(14) * &f_script_direct(14, 1, 0, &zf, &z, &cfg)?;
            out.push(check(spec, fmt_point(&zf, &z), (&lhs - &rhs).abs()));
        }
        other => return Err(Error::UnknownIdentity(other.to_string())),
    }
    Ok(out)
}

fn parse_m(name: &str, prefix: &str) -> Option<u32> {
    name.strip_prefix(prefix).and_then(|rest| rest.parse().ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_pairs_partition_the_coprime_lattice() {
        let mut seen = std::collections::HashSet::new();
        for r in 1..=12 {
            for p in shell_pairs(r) {
                assert_eq!(gcd(p.0, p.1), 1);
                assert_eq!(p.0.abs().max(p.1.abs()), r);
                assert!(seen.insert(p), "duplicate {:?}", p);
            }
        }
        // spot totals: coprime pairs in [-12,12]² minus origin
        let mut direct = 0;
        for c in -12i64..=12 {
            for d in -12i64..=12 {
                if gcd(c, d) == 1 {
                    direct += 1;
                }
            }
        }
        assert_eq!(seen.len(), direct);
    }

    #[test]
    fn fourier_matches_direct_at_matched_cutoff() {
        let cfg = LatticeSumConfig::new(8, 160);
        let zf = BigComplex::i(192);
        let z = BigComplex::from_f64s(192, 0.0, 2.0);
        let direct = h_direct(10, 1, 1, &zf, &z, &cfg).unwrap();
        let fourier = fourier_h(10, 1, 1, &zf, &z, 8, 70, 160).unwrap();
        let resid = (&direct - &fourier).abs();
        assert!(resid.to_f64() < 1e-20, "residual {:e}", resid.to_f64());
    }

    #[test]
    fn translation_invariance_in_zf() {
        let checks = run_identity("h_translation_invariance", None, None).unwrap();
        assert!(checks[0].pass, "residual {:e}", checks[0].residual.to_f64());
    }

    #[test]
    fn near_pole_guard_refuses() {
        let cfg = LatticeSumConfig::new(6, 192);
        let zf = BigComplex::from_f64s(224, 0.0, 2.0);
        // z exactly at M𝔷 for M = identity makes the kernel singular
        let res = h_direct(10, 0, 0, &zf, &zf, &cfg);
        assert!(matches!(res, Err(Error::NearPole)));
    }

    #[test]
    fn convergence_threshold_early_stop_matches_full_sum() {
        let mut cfg = LatticeSumConfig::new(60, 128);
        let zf = BigComplex::from_f64s(160, 0.2, 1.3);
        let z = BigComplex::from_f64s(160, 0.0, 2.0);
        let full = h_direct(14, 0, 0, &zf, &z, &cfg).unwrap();
        cfg.convergence_threshold = Some(1e-25);
        let stopped = h_direct(14, 0, 0, &zf, &z, &cfg).unwrap();
        let diff = (&full - &stopped).abs();
        assert!(diff.to_f64() < 1e-20, "diff {:e}", diff.to_f64());
    }

    #[test]
    fn f_script_reductions() {
        for name in ["f_script_ell0_reduction", "f_script_collapse_at_i"] {
            for c in run_identity(name, None, None).unwrap() {
                assert!(c.pass, "{name}: residual {:e}", c.residual.to_f64());
            }
        }
    }

    #[test]
    fn catalog_names_resolve() {
        for spec in CATALOG {
            assert!(spec_for(spec.name).is_ok());
        }
        assert!(spec_for("no_such_identity").is_err());
        assert!(matches!(
            run_identity("no_such_identity", None, None),
            Err(Error::UnknownIdentity(_))
        ));
    }
}
