//! Fundamental units of real quadratic fields via continued fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactnum::Enclosure;
use crate::error::Result;
use crate::FieldElement;

use super::height::real_embedding;

/// Partial quotients of `(p0 + sqrt d) / q0`, one period past the preperiod
/// is not detected; callers stop on their own condition.
struct QuadraticCf {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    s: BigInt,
}

impl QuadraticCf {
    fn new(p0: BigInt, q0: BigInt, d: BigInt) -> Self {
        debug_assert!(((&d - &p0 * &p0) % &q0).is_zero());
        let s = d.sqrt();
        QuadraticCf { p: p0, q: q0, d, s }
    }
}

impl Iterator for QuadraticCf {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        // floor((P + sqrt D) / Q); sqrt D is irrational so the quotient never divides exactly.
        let num = &self.p + &self.s;
        let a = if self.q.is_positive() {
            num.div_floor(&self.q)
        } else {
            -(num.div_floor(&-&self.q) + BigInt::one())
        };
        let p_next = &a * &self.q - &self.p;
        let q_next = (&self.d - &p_next * &p_next) / &self.q;
        self.p = p_next;
        self.q = q_next;
        Some(a)
    }
}

/// The fundamental unit `eps > 1` of the real quadratic field `Q(sqrt m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub unit: FieldElement,
    /// `N(eps)`, either 1 or -1.
    pub norm: i32,
}

/// Finds `eps` as the first convergent `p/q` of the integral generator `w`
/// for which `p - q * conj(w)` has norm `+-1`.
pub fn fundamental_unit(m: i64) -> FundamentalUnit {
    assert!(m > 1, "fundamental unit needs a real quadratic field");
    let one_mod_four = m.rem_euclid(4) == 1;
    let (p0, q0) = if one_mod_four { (BigInt::one(), BigInt::from(2)) } else { (BigInt::zero(), BigInt::one()) };
    // conj(w) as an element of Q(sqrt m)
    let w_conj = if one_mod_four {
        FieldElement::new(BigRational::new(1.into(), 2.into()), BigRational::new((-1).into(), 2.into()), m)
    } else {
        FieldElement::new(BigRational::zero(), -BigRational::one(), m)
    };
    let cf = QuadraticCf::new(p0, q0, BigInt::from(m));
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    for (i, a) in cf.enumerate() {
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        let candidate = &FieldElement::from_rational(BigRational::from_integer(p.clone()), m)
            - &(&w_conj * &FieldElement::from_rational(BigRational::from_integer(q.clone()), m));
        let n = candidate.norm();
        if n.abs().is_one() {
            return FundamentalUnit { unit: candidate, norm: if n.is_positive() { 1 } else { -1 } };
        }
        assert!(i < 10_000_000, "continued fraction did not produce a unit");
    }
    unreachable!()
}

/// Enclosure of `ln eps` for the fundamental unit of `Q(sqrt m)`, `m > 1`.
pub fn regulator(m: i64, prec: u32) -> Result<Enclosure> {
    let eps = fundamental_unit(m).unit;
    real_embedding(&eps, prec)?.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(a: (i64, i64), b: (i64, i64), m: i64) -> FieldElement {
        FieldElement::new(BigRational::new(a.0.into(), a.1.into()), BigRational::new(b.0.into(), b.1.into()), m)
    }

    #[test]
    fn small_fundamental_units() {
        assert_eq!(fundamental_unit(2).unit, unit((1, 1), (1, 1), 2));
        assert_eq!(fundamental_unit(2).norm, -1);
        assert_eq!(fundamental_unit(3).unit, unit((2, 1), (1, 1), 3));
        assert_eq!(fundamental_unit(3).norm, 1);
        assert_eq!(fundamental_unit(5).unit, unit((1, 2), (1, 2), 5));
        assert_eq!(fundamental_unit(6).unit, unit((5, 1), (2, 1), 6));
        assert_eq!(fundamental_unit(7).unit, unit((8, 1), (3, 1), 7));
        assert_eq!(fundamental_unit(10).unit, unit((3, 1), (1, 1), 10));
        assert_eq!(fundamental_unit(13).unit, unit((3, 2), (1, 2), 13));
    }

    #[test]
    fn large_period_unit() {
        // eps(94) = 2143295 + 221064 sqrt 94
        assert_eq!(fundamental_unit(94).unit, unit((2143295, 1), (221064, 1), 94));
    }

    #[test]
    fn regulator_encloses_ln_eps() {
        let r = regulator(2, 128).unwrap();
        assert!((r.to_f64() - 0.881373587019543).abs() < 1e-14);
        assert!(r.width().msb().unwrap() < -110);
    }
}
