//! Arbitrary-precision complex arithmetic on top of MPFR floats.
//!
//! Built as a pair of [`rug::Float`]s rather than MPC so the crate links
//! against the system GMP/MPFR alone. Only the operations the lattice and
//! ideal sums actually need are provided. Every result carries the maximum
//! precision of its operands; precision is always an explicit per-value
//! property, never ambient state.

use rug::float::Constant;
use rug::{Float, Rational};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Complex number with explicit binary precision.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{}-{}i", self.re, self.im.clone().abs())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        BigComplex::new(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn i(prec: u32) -> Self {
        BigComplex::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn from_real(re: Float) -> Self {
        let p = re.prec();
        BigComplex::new(re, Float::new(p))
    }

    pub fn from_rationals(prec: u32, re: &Rational, im: &Rational) -> Self {
        BigComplex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_f64s(prec: u32, re: f64, im: f64) -> Self {
        BigComplex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        BigComplex::new(Float::with_val(p, &self.re * s), Float::with_val(p, &self.im * s))
    }

    /// Multiplication by the imaginary unit.
    pub fn mul_i(&self) -> Self {
        let p = self.prec();
        BigComplex::new(Float::with_val(p, -&self.im), self.re.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut t = Float::with_val(p, &self.re * &self.re);
        t += Float::with_val(p, &self.im * &self.im);
        t
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> Float {
        self.im.clone().atan2(&self.re)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -&self.im) / &n,
        )
    }

    /// e^{self} = e^{re} (cos im + i sin im).
    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        BigComplex::new(Float::with_val(p, &m * &c), m * s)
    }

    /// Integer power by binary exponentiation; negative exponents invert.
    pub fn powi(&self, e: i64) -> Self {
        let p = self.prec();
        if e == 0 {
            return BigComplex::one(p);
        }
        let (mut base, mut k) = if e < 0 {
            (self.recip(), e.unsigned_abs())
        } else {
            (self.clone(), e as u64)
        };
        let mut acc = BigComplex::one(p);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex::new(Float::with_val(p, &self.re + &rhs.re), Float::with_val(p, &self.im + &rhs.im))
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex::new(Float::with_val(p, &self.re - &rhs.re), Float::with_val(p, &self.im - &rhs.im))
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += Float::with_val(p, &self.im * &rhs.re);
        BigComplex::new(re, im)
    }
}

impl Div for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        self * &rhs.recip()
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        let p = self.prec();
        BigComplex::new(Float::with_val(p, -&self.re), Float::with_val(p, -&self.im))
    }
}

/// π at the requested precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// e(x) = e^{2πix} for real x.
pub fn e_of(x: &Float) -> BigComplex {
    let p = x.prec();
    let two_pi_x = Float::with_val(p, 2) * pi(p) * x;
    let (s, c) = two_pi_x.sin_cos(Float::new(p));
    BigComplex::new(c, s)
}

/// e^{iθ} for real θ.
pub fn unit_from_angle(theta: &Float) -> BigComplex {
    let p = theta.prec();
    let (s, c) = theta.clone().sin_cos(Float::new(p));
    BigComplex::new(c, s)
}

/// Convert a rational to a float at the given precision.
pub fn rat_to_float(prec: u32, r: &Rational) -> Float {
    Float::with_val(prec, r)
}
