//! Exact Laurent/power series algebra over ℚ: the ground-truth oracle.
//!
//! Series are truncated expansions in q = e^{2πiz}. A [`LaurentSeries`]
//! stores coefficients from `min_exp` through `order` inclusive; arithmetic
//! tracks the largest exponent through which the result is still exact and
//! never silently extends it. Coefficients are exact rationals by default;
//! the same container is reused with [`BigComplex`] coefficients for the
//! arbitrary-pole oracle, where one constant of the series is a
//! high-precision float.

use crate::complex::BigComplex;
use crate::{Error, Result};
use rug::ops::Pow;
use rug::{Integer, Rational};

/// Coefficient ring abstraction: exact rationals or big complex floats.
pub trait Coeff: Clone {
    /// Additive identity. `prec` is ignored by exact coefficient types.
    fn zero(prec: u32) -> Self;
    fn one(prec: u32) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn div_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn mul_small(&self, k: i64) -> Self;
}

impl Coeff for Rational {
    fn zero(_: u32) -> Self {
        Rational::new()
    }
    fn one(_: u32) -> Self {
        Rational::from(1)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_ref(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn div_ref(&self, o: &Self) -> Self {
        Rational::from(self / o)
    }
    fn neg_ref(&self) -> Self {
        Rational::from(-self)
    }
    fn mul_small(&self, k: i64) -> Self {
        Rational::from(self * &Rational::from(k))
    }
}

impl Coeff for BigComplex {
    fn zero(prec: u32) -> Self {
        BigComplex::zero(prec)
    }
    fn one(prec: u32) -> Self {
        BigComplex::one(prec)
    }
    fn is_zero(&self) -> bool {
        BigComplex::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_small(&self, k: i64) -> Self {
        let s = rug::Float::with_val(self.prec(), k);
        self.scale(&s)
    }
}

/// Truncated Laurent series: coefficients of q^{min_exp} .. q^{order}.
#[derive(Clone, Debug)]
pub struct LaurentSeries<T: Coeff = Rational> {
    min_exp: i64,
    coeffs: Vec<T>,
    prec: u32,
}

impl<T: Coeff> LaurentSeries<T> {
    pub fn from_coeffs(min_exp: i64, coeffs: Vec<T>, prec: u32) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one stored coefficient");
        LaurentSeries { min_exp, coeffs, prec }
    }

    /// The zero series, stored through q^order.
    pub fn zero_through(order: i64, prec: u32) -> Self {
        LaurentSeries::from_coeffs(0, vec![T::zero(prec); (order.max(0) + 1) as usize], prec)
    }

    /// The constant series 1, stored through q^order.
    pub fn one_through(order: i64, prec: u32) -> Self {
        let mut s = Self::zero_through(order, prec);
        s.coeffs[0] = T::one(prec);
        s
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Largest exponent through which the coefficients are valid.
    pub fn order(&self) -> i64 {
        self.min_exp + self.coeffs.len() as i64 - 1
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Coefficient of q^n. Exponents below `min_exp` are exactly zero;
    /// exponents above `order` are unknown and rejected.
    pub fn coeff(&self, n: i64) -> Result<T> {
        if n > self.order() {
            return Err(Error::InsufficientOrder { needed: n, have: self.order() });
        }
        if n < self.min_exp {
            return Ok(T::zero(self.prec));
        }
        Ok(self.coeffs[(n - self.min_exp) as usize].clone())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Drop leading exactly-zero coefficients (pure representation change).
    fn trimmed(&self) -> LaurentSeries<T> {
        let mut k = 0;
        while k + 1 < self.coeffs.len() && self.coeffs[k].is_zero() {
            k += 1;
        }
        LaurentSeries {
            min_exp: self.min_exp + k as i64,
            coeffs: self.coeffs[k..].to_vec(),
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    fn combine(&self, o: &Self, subtract: bool) -> Self {
        let min = self.min_exp.min(o.min_exp);
        let order = self.order().min(o.order());
        let prec = self.prec.max(o.prec);
        let mut coeffs = Vec::with_capacity((order - min + 1) as usize);
        for n in min..=order {
            let a = self.coeff(n).expect("within order");
            let b = o.coeff(n).expect("within order");
            coeffs.push(if subtract { a.sub_ref(&b) } else { a.add_ref(&b) });
        }
        LaurentSeries { min_exp: min, coeffs, prec }
    }

    /// Schoolbook product. The result is valid through
    /// min(a.order + b.min_exp, b.order + a.min_exp).
    pub fn mul(&self, o: &Self) -> Self {
        let min = self.min_exp + o.min_exp;
        let order = (self.order() + o.min_exp).min(o.order() + self.min_exp);
        let prec = self.prec.max(o.prec);
        let len = (order - min + 1) as usize;
        let mut coeffs = vec![T::zero(prec); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add_ref(&a.mul_ref(b));
            }
        }
        LaurentSeries { min_exp: min, coeffs, prec }
    }

    /// Multiplicative inverse. Requires a nonzero leading coefficient after
    /// trimming; the result is valid through order − 2·min_exp of the
    /// trimmed operand.
    pub fn invert(&self) -> Result<Self> {
        let t = self.trimmed();
        if t.coeffs[0].is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let len = t.coeffs.len();
        let mut inv = Vec::with_capacity(len);
        inv.push(T::one(t.prec).div_ref(&t.coeffs[0]));
        for n in 1..len {
            let mut s = T::zero(t.prec);
            for k in 1..=n {
                if t.coeffs[k].is_zero() {
                    continue;
                }
                s = s.add_ref(&t.coeffs[k].mul_ref(&inv[n - k]));
            }
            inv.push(s.neg_ref().div_ref(&t.coeffs[0]));
        }
        Ok(LaurentSeries { min_exp: -t.min_exp, coeffs: inv, prec: t.prec })
    }

    /// Integer power; negative exponents go through [`Self::invert`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one_through(self.order() - self.min_exp, self.prec));
        }
        let (mut base, mut k) = if e < 0 {
            (self.invert()?, e.unsigned_abs())
        } else {
            (self.clone(), e as u64)
        };
        let mut acc: Option<Self> = None;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.expect("e != 0"))
    }

    /// q·d/dq: multiplies the coefficient of q^n by n. Under q = e^{2πiz}
    /// this is (2πi)^{-1} d/dz.
    pub fn derive(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a.mul_small(self.min_exp + i as i64))
            .collect();
        LaurentSeries { min_exp: self.min_exp, coeffs, prec: self.prec }
    }

    pub fn scale(&self, s: &T) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.mul_ref(s)).collect();
        LaurentSeries { min_exp: self.min_exp, coeffs, prec: self.prec.max(0) }
    }

    /// Restrict the valid order (never extends).
    pub fn truncate(&self, order: i64) -> Self {
        assert!(order >= self.min_exp, "truncation below min_exp");
        let keep = ((order - self.min_exp + 1) as usize).min(self.coeffs.len());
        LaurentSeries { min_exp: self.min_exp, coeffs: self.coeffs[..keep].to_vec(), prec: self.prec }
    }
}

impl LaurentSeries<Rational> {
    /// True if every stored coefficient through `order` is an integer.
    pub fn is_integral_through(&self, order: i64) -> bool {
        let top = order.min(self.order());
        (self.min_exp..=top).all(|n| self.coeff(n).map(|c| c.is_integer()).unwrap_or(false))
    }

    /// Lift to complex coefficients at the given precision.
    pub fn lift(&self, prec: u32) -> LaurentSeries<BigComplex> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| BigComplex::from_rationals(prec, &c.clone(), &Rational::new()))
            .collect();
        LaurentSeries { min_exp: self.min_exp, coeffs, prec }
    }
}

/// The generator series the oracle is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    E2,
    E4,
    E6,
    Delta,
    J,
}

/// σ_k(n) = Σ_{d|n} d^k as an exact integer.
fn divisor_sigma(k: u32, n: u64) -> Integer {
    let mut s = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += Integer::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += Integer::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// Eisenstein series E_w = 1 + c_w Σ σ_{w−1}(n) qⁿ with c₂ = −24,
/// c₄ = 240, c₆ = −504, truncated at `order`.
pub fn eisenstein(weight: u32, order: i64) -> Result<LaurentSeries<Rational>> {
    let c: i64 = match weight {
        2 => -24,
        4 => 240,
        6 => -504,
        w => return Err(Error::UnsupportedWeight(w)),
    };
    assert!(order >= 0, "eisenstein: order must be nonnegative");
    let mut coeffs = Vec::with_capacity(order as usize + 1);
    coeffs.push(Rational::from(1));
    for n in 1..=order as u64 {
        coeffs.push(Rational::from(divisor_sigma(weight - 1, n) * Integer::from(c)));
    }
    Ok(LaurentSeries::from_coeffs(0, coeffs, 0))
}

/// Δ = (E₄³ − E₆²)/1728 and j = E₄³/Δ, both valid through `order`.
///
/// Δ has min_exp 1 with leading coefficient 1; j has min_exp −1 with
/// leading coefficient 1.
pub fn delta_and_j(order: i64) -> Result<(LaurentSeries<Rational>, LaurentSeries<Rational>)> {
    assert!(order >= 1, "delta_and_j: order must be at least 1");
    let work = order + 2;
    let e4 = eisenstein(4, work)?;
    let e6 = eisenstein(6, work)?;
    let e4cubed = e4.pow(3)?;
    let num = e4cubed.sub(&e6.pow(2)?);
    let delta = num.scale(&Rational::from((1, 1728))).trimmed();
    debug_assert_eq!(delta.min_exp(), 1);
    let j = e4cubed.mul(&delta.invert()?);
    Ok((delta.truncate(order), j.truncate(order)))
}

/// Build one of the generator series through `order`.
pub fn form_series(form: Form, order: i64) -> Result<LaurentSeries<Rational>> {
    match form {
        Form::E2 => eisenstein(2, order),
        Form::E4 => eisenstein(4, order),
        Form::E6 => eisenstein(6, order),
        Form::Delta => Ok(delta_and_j(order.max(1))?.0),
        Form::J => Ok(delta_and_j(order.max(1))?.1),
    }
}

/// The named quotient targets the coefficient formulas cover, in the ASCII
/// spelling the CLI accepts.
pub const TARGETS: &[&str] = &[
    "1/E4",
    "1/E6",
    "E4/E6",
    "E2/E6",
    "E2/E4",
    "E2^2/E6",
    "E4^2/E6^2",
    "1/E6^2",
    "E4/E6^2",
    "1/E4^2",
    "E6/E4^2",
    "1/E4^3",
    "E6/E4^3",
    "E2E4^2/E6^2",
];

/// Exact rational coefficients of a named quotient of Eisenstein series,
/// valid through `order`.
pub fn oracle_coefficients(target: &str, order: i64) -> Result<LaurentSeries<Rational>> {
    assert!(order >= 0, "oracle_coefficients: order must be nonnegative");
    let e2 = || eisenstein(2, order);
    let e4 = || eisenstein(4, order);
    let e6 = || eisenstein(6, order);
    let s = match target {
        "1/E4" => e4()?.invert()?,
        "1/E6" => e6()?.invert()?,
        "E4/E6" => e4()?.mul(&e6()?.invert()?),
        "E2/E6" => e2()?.mul(&e6()?.invert()?),
        "E2/E4" => e2()?.mul(&e4()?.invert()?),
        "E2^2/E6" => e2()?.pow(2)?.mul(&e6()?.invert()?),
        "E4^2/E6^2" => e4()?.pow(2)?.mul(&e6()?.pow(-2)?),
        "1/E6^2" => e6()?.pow(-2)?,
        "E4/E6^2" => e4()?.mul(&e6()?.pow(-2)?),
        "1/E4^2" => e4()?.pow(-2)?,
        "E6/E4^2" => e6()?.mul(&e4()?.pow(-2)?),
        "1/E4^3" => e4()?.pow(-3)?,
        "E6/E4^3" => e6()?.mul(&e4()?.pow(-3)?),
        "E2E4^2/E6^2" => e2()?.mul(&e4()?.pow(2)?).mul(&e6()?.pow(-2)?),
        other => return Err(Error::UnknownTarget(other.to_string())),
    };
    Ok(s)
}
