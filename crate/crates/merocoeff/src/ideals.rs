//! Primitive ideals of ℤ[i] and ℤ[ρ] (ρ = e^{iπ/3}), the index sets of the
//! ideal-sum coefficient formulas.
//!
//! Each primitive ideal is stored through its canonical generator
//! γ = c𝔷 + d: among the 2ω unit multiples the one whose argument lies in
//! [0, π/ω). In coordinates that window is exactly the cone c ≥ 0, d ≥ 1,
//! which enumeration uses directly — every primitive ideal of norm ≤ Λ has
//! precisely one generator there, so no deduplication pass is required.

use crate::{Error, Result};

/// The two imaginary quadratic fields with extra units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// ℚ(i): 𝔷 = i, 𝔷₁ = 0, 𝔷₂ = 1, norm c² + d², stabilizer order ω = 2.
    Gaussian,
    /// ℚ(ρ), ρ = e^{iπ/3}: 𝔷₁ = 1/2, 𝔷₂ = √3/2, norm c² + cd + d², ω = 3.
    Eisenstein,
}

impl Field {
    /// Stabilizer order ω_𝔷 of the base point in PSL₂(ℤ).
    pub fn omega(self) -> u32 {
        match self {
            Field::Gaussian => 2,
            Field::Eisenstein => 3,
        }
    }

    /// N(c𝔷 + d) = |c𝔷 + d|².
    pub fn norm(self, c: i64, d: i64) -> i64 {
        match self {
            Field::Gaussian => c * c + d * d,
            Field::Eisenstein => c * c + c * d + d * d,
        }
    }

    /// 2·(a c|𝔷|² + b d + 𝔷₁(a d + b c)): the Bézout-dependent part of the
    /// root-of-unity exponent, doubled so it is always an integer.
    pub fn phase_numerator_doubled(self, c: i64, d: i64, a: i64, b: i64) -> i64 {
        match self {
            Field::Gaussian => 2 * (a * c + b * d),
            Field::Eisenstein => 2 * (a * c + b * d) + (a * d + b * c),
        }
    }

    /// Coordinates of the unit multiple γ·u where u = i (Gaussian) or
    /// u = ρ (Eisenstein); iterating walks the unit orbit.
    fn rotate(self, c: i64, d: i64) -> (i64, i64) {
        match self {
            // i(ci + d) = -c + di
            Field::Gaussian => (d, -c),
            // ρ(cρ + d) = (c + d)ρ - c
            Field::Eisenstein => (c + d, -c),
        }
    }
}

/// Primitive ideal with canonical generator and Bézout completion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimitiveIdeal {
    pub field: Field,
    /// Canonical generator coordinates: γ = c𝔷 + d with c ≥ 0, d ≥ 1
    /// (except the unit ideal (0, 1)), i.e. arg γ ∈ [0, π/ω).
    pub c: i64,
    pub d: i64,
    /// N(γ) = |c𝔷 + d|².
    pub norm: i64,
    /// (a, b) with ad − bc = 1, a balanced into (−|c|/2, |c|/2].
    pub bezout: (i64, i64),
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Canonical Bézout completion of a coprime pair: ad − bc = 1 with
/// a ∈ (−|c|/2, |c|/2] (and b = 0 when c = 0). Any completion differs by
/// (a, b) → (a + tc, b + td); the formulas are invariant under that shift.
pub fn bezout(c: i64, d: i64) -> Result<(i64, i64)> {
    if gcd(c, d) != 1 {
        return Err(Error::NotCoprime { c, d });
    }
    if c == 0 {
        // d = ±1, a·d = 1
        return Ok((d, 0));
    }
    // extended Euclid for x·d + y·c = 1, then a = x, b = -y
    let (mut r0, mut r1) = (d as i128, c as i128);
    let (mut x0, mut x1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
    }
    // r0 = ±1 = x0·d + y·c for some y
    let sign = r0; // ±1
    let mut a = (x0 * sign) as i64;
    // balance a into (-|c|/2, |c|/2]
    let m = c.abs();
    a = a.rem_euclid(m);
    if 2 * a > m {
        a -= m;
    }
    let b_num = a as i128 * d as i128 - 1;
    debug_assert_eq!(b_num % c as i128, 0);
    let b = (b_num / c as i128) as i64;
    if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
        return Err(Error::InvalidBezout { a, b, c, d });
    }
    Ok((a, b))
}

impl PrimitiveIdeal {
    fn from_cone(field: Field, c: i64, d: i64) -> Result<Self> {
        let bez = bezout(c, d)?;
        Ok(PrimitiveIdeal { field, c, d, norm: field.norm(c, d), bezout: bez })
    }
}

/// Whether (c, d) is the canonical cone representative of its unit orbit.
fn in_cone(c: i64, d: i64) -> bool {
    c >= 0 && d >= 1
}

/// Canonical representative of the unit orbit of γ = c𝔷 + d.
pub fn canonical_rep(field: Field, c: i64, d: i64) -> Result<PrimitiveIdeal> {
    if gcd(c, d) != 1 {
        return Err(Error::NotCoprime { c, d });
    }
    let mut cur = (c, d);
    let mut found = None;
    for _ in 0..field.omega() {
        for cand in [cur, (-cur.0, -cur.1)] {
            if in_cone(cand.0, cand.1) {
                debug_assert!(found.is_none(), "two orbit members in the cone");
                found = Some(cand);
            }
        }
        cur = field.rotate(cur.0, cur.1);
    }
    let (cc, dd) = found.expect("every unit orbit meets the cone exactly once");
    PrimitiveIdeal::from_cone(field, cc, dd)
}

/// The complex-conjugate ideal, canonicalized. An involution; self-conjugate
/// exactly for the unit ideal and the ramified prime.
pub fn conjugate_ideal(ideal: &PrimitiveIdeal) -> PrimitiveIdeal {
    let (c, d) = match ideal.field {
        // conj(ci + d) = -ci + d
        Field::Gaussian => (-ideal.c, ideal.d),
        // conj(cρ + d) = c(1 - ρ) + d = -cρ + (c + d)
        Field::Eisenstein => (-ideal.c, ideal.c + ideal.d),
    };
    canonical_rep(ideal.field, c, d).expect("conjugate of a coprime pair is coprime")
}

/// All primitive ideals with norm ≤ `norm_bound`, sorted by norm then by
/// canonical (c, d). Includes the unit ideal (norm 1).
pub fn enumerate_primitive_ideals(field: Field, norm_bound: i64) -> Vec<PrimitiveIdeal> {
    assert!(norm_bound >= 1, "norm bound must be at least 1");
    let cmax = (norm_bound as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for c in 0..=cmax {
        for d in 1..=cmax {
            let n = field.norm(c, d);
            if n > norm_bound {
                // the norm form is increasing in d on the cone
                break;
            }
            if gcd(c, d) != 1 {
                continue;
            }
            out.push(PrimitiveIdeal::from_cone(field, c, d).expect("coprime cone pair"));
        }
    }
    out.sort_by_key(|b| (b.norm, b.c, b.d));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn gaussian_norms_up_to_five() {
        let ids = enumerate_primitive_ideals(Field::Gaussian, 5);
        let norms: Vec<i64> = ids.iter().map(|b| b.norm).collect();
        assert_eq!(norms, vec![1, 2, 5, 5]);
    }

    #[test]
    fn eisenstein_unit_ideal_only_at_norm_one() {
        let ids = enumerate_primitive_ideals(Field::Eisenstein, 1);
        assert_eq!(ids.len(), 1);
        assert_eq!((ids[0].c, ids[0].d), (0, 1));
    }

    #[test]
    fn eisenstein_norms_up_to_fifty() {
        let ids = enumerate_primitive_ideals(Field::Eisenstein, 50);
        let norms: BTreeSet<i64> = ids.iter().map(|b| b.norm).collect();
        let expected: BTreeSet<i64> = [1, 3, 7, 13, 19, 21, 31, 37, 39, 43, 49].into();
        assert_eq!(norms, expected);
    }

    #[test]
    fn eisenstein_norm_characterization() {
        // every occurring norm is 3^a Π p_i^{a_i} with a ∈ {0,1}, p_i ≡ 1 mod 6
        let ids = enumerate_primitive_ideals(Field::Eisenstein, 10_000);
        for b in &ids {
            let mut m = b.norm;
            let mut threes = 0;
            while m % 3 == 0 {
                threes += 1;
                m /= 3;
            }
            assert!(threes <= 1, "norm {} divisible by 9", b.norm);
            let mut p = 5;
            let mut rem = m;
            while p * p <= rem {
                while rem % p == 0 {
                    assert_eq!(p % 6, 1, "prime {} | norm {}", p, b.norm);
                    rem /= p;
                }
                p += 2;
            }
            if rem > 1 {
                assert!(rem % 6 == 1 || rem == 1, "prime {} | norm {}", rem, b.norm);
            }
        }
    }

    #[test]
    fn gaussian_counting_against_brute_force() {
        // ideals of norm N correspond to coprime solutions of c²+d²=N up to
        // the 4 units
        let ids = enumerate_primitive_ideals(Field::Gaussian, 500);
        for n in 1..=500i64 {
            let enumerated = ids.iter().filter(|b| b.norm == n).count();
            let mut brute = 0usize;
            let r = (n as f64).sqrt() as i64 + 1;
            for c in -r..=r {
                for d in -r..=r {
                    if c * c + d * d == n && gcd(c, d) == 1 {
                        brute += 1;
                    }
                }
            }
            assert_eq!(brute % 4, 0);
            assert_eq!(enumerated, brute / 4, "norm {n}");
        }
    }

    #[test]
    fn canonical_rep_examples() {
        let a = canonical_rep(Field::Gaussian, 0, -1).unwrap();
        assert_eq!((a.c, a.d), (0, 1));
        let b1 = canonical_rep(Field::Gaussian, 1, 2).unwrap();
        let b2 = canonical_rep(Field::Gaussian, -1, -2).unwrap();
        assert_eq!(b1, b2);
        let c = canonical_rep(Field::Eisenstein, 1, 1).unwrap();
        assert_eq!(c.norm, 3);
        assert!(canonical_rep(Field::Gaussian, 2, 4).is_err());
    }

    #[test]
    fn canonicalization_idempotent_and_orbit_constant() {
        for field in [Field::Gaussian, Field::Eisenstein] {
            for b in enumerate_primitive_ideals(field, 200) {
                let again = canonical_rep(field, b.c, b.d).unwrap();
                assert_eq!(again, b);
                let mut cur = (b.c, b.d);
                for _ in 0..field.omega() {
                    cur = field.rotate(cur.0, cur.1);
                    assert_eq!(canonical_rep(field, cur.0, cur.1).unwrap(), b);
                    assert_eq!(canonical_rep(field, -cur.0, -cur.1).unwrap(), b);
                }
            }
        }
    }

    #[test]
    fn conjugation_examples_and_involution() {
        // (2+i) has (c,d) = (1,2); conjugate class is (2,1)
        let b = canonical_rep(Field::Gaussian, 1, 2).unwrap();
        let bc = conjugate_ideal(&b);
        assert_eq!((bc.c, bc.d), (2, 1));
        assert_eq!(bc.norm, 5);
        for field in [Field::Gaussian, Field::Eisenstein] {
            let unit = canonical_rep(field, 0, 1).unwrap();
            assert_eq!(conjugate_ideal(&unit), unit);
            for b in enumerate_primitive_ideals(field, 100) {
                assert_eq!(conjugate_ideal(&conjugate_ideal(&b)), b);
            }
        }
    }

    #[test]
    fn bezout_validity_for_enumerated_ideals() {
        for field in [Field::Gaussian, Field::Eisenstein] {
            for b in enumerate_primitive_ideals(field, 300) {
                let (a, bb) = b.bezout;
                assert_eq!(a * b.d - bb * b.c, 1, "ideal {:?}", b);
                assert!(2 * a <= b.c.abs() && 2 * a > -b.c.abs() || b.c == 0);
            }
        }
    }
}
