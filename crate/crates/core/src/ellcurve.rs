//! Elliptic curves over the base field: j-invariants, semi-stable reduction
//! types at degree-one places and traces of Frobenius.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::numfield::{DegreeOnePlace, FieldDescriptor};
use crate::FieldElement;

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    pub a1: FieldElement,
    pub a2: FieldElement,
    pub a3: FieldElement,
    pub a4: FieldElement,
    pub a6: FieldElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PlaceType {
    #[serde(rename = "multiplicative")]
    PotentiallyMultiplicative,
    #[serde(rename = "good-ordinary")]
    GoodOrdinary,
    #[serde(rename = "good-supersingular")]
    GoodSupersingular,
}

impl PlaceType {
    pub fn name(&self) -> &'static str {
        match self {
            PlaceType::PotentiallyMultiplicative => "multiplicative",
            PlaceType::GoodOrdinary => "good-ordinary",
            PlaceType::GoodSupersingular => "good-supersingular",
        }
    }

    pub fn is_good(&self) -> bool {
        !matches!(self, PlaceType::PotentiallyMultiplicative)
    }
}

impl fmt::Display for PlaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Frobenius data at a place of good reduction: `X^2 - T X + q` and the field
/// `L^q` it generates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusData {
    pub q: u64,
    pub trace: i64,
    /// `T^2 - 4q`.
    pub disc: i64,
    pub lq: FieldDescriptor,
}

impl FrobeniusData {
    pub fn new(q: u64, trace: i64) -> Result<Self> {
        let disc = trace * trace - 4 * q as i64;
        if disc > 0 {
            return Err(Error::InvalidInput(format!("trace {trace} violates the Hasse bound at {q}")));
        }
        let lq = if disc == 0 {
            FieldDescriptor::Rational
        } else {
            let m = arith::squarefree_part(&BigInt::from(disc));
            FieldDescriptor::Quadratic { m: i64::try_from(m).expect("fits") }
        };
        Ok(FrobeniusData { q, trace, disc, lq })
    }
}

fn scalar(n: i64, m: i64) -> FieldElement {
    FieldElement::from_ints(n, 0, m)
}

impl WeierstrassModel {
    /// Builds a model, rejecting singular ones. All coefficients must lie in
    /// the same field.
    pub fn new(coeffs: [FieldElement; 5]) -> Result<Self> {
        let m = coeffs.iter().find(|c| !c.is_scalar()).map_or(coeffs[0].m, |c| c.m);
        if coeffs.iter().any(|c| !c.is_scalar() && c.m != m) {
            return Err(Error::InvalidInput("coefficients from different quadratic fields".into()));
        }
        let [a1, a2, a3, a4, a6] = coeffs.map(|c| c.in_field(m));
        let e = WeierstrassModel { a1, a2, a3, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(Error::Singular);
        }
        Ok(e)
    }

    /// `y^2 = x^3 + a x + b`.
    pub fn short(a: FieldElement, b: FieldElement) -> Result<Self> {
        let m = if a.is_scalar() { b.m } else { a.m };
        let z = FieldElement::zero(m);
        Self::new([z.clone(), z.clone(), z, a, b])
    }

    pub fn from_ints(c: [i64; 5]) -> Result<Self> {
        Self::new(c.map(|x| scalar(x, 0)))
    }

    /// Radicand of the field the coefficients live in (0 for rational models).
    pub fn radicand(&self) -> i64 {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
            .iter()
            .find(|c| !c.is_scalar())
            .map_or(self.a1.m, |c| c.m)
    }

    fn bs(&self) -> (FieldElement, FieldElement, FieldElement, FieldElement) {
        let m = self.radicand();
        let s = |n| scalar(n, m);
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = &(a1 * a1) + &(&s(4) * a2);
        let b4 = &(&s(2) * a4) + &(a1 * a3);
        let b6 = &(a3 * a3) + &(&s(4) * a6);
        let b8 = &(&(&(&(a1 * a1) * a6) + &(&(&s(4) * a2) * a6)) - &(&(a1 * a3) * a4)) + &(&(&(a2 * a3) * a3) - &(a4 * a4));
        (b2, b4, b6, b8)
    }

    pub fn c4(&self) -> FieldElement {
        let (b2, b4, _, _) = self.bs();
        &(&b2 * &b2) - &(&scalar(24, b2.m) * &b4)
    }

    pub fn c6(&self) -> FieldElement {
        let (b2, b4, b6, _) = self.bs();
        let m = b2.m;
        &(&(&(-&b2) * &(&b2 * &b2)) + &(&(&scalar(36, m) * &b2) * &b4)) - &(&scalar(216, m) * &b6)
    }

    pub fn discriminant(&self) -> FieldElement {
        let (b2, b4, b6, b8) = self.bs();
        let m = b2.m;
        let t1 = -&(&(&b2 * &b2) * &b8);
        let t2 = &scalar(8, m) * &(&(&b4 * &b4) * &b4);
        let t3 = &scalar(27, m) * &(&b6 * &b6);
        let t4 = &scalar(9, m) * &(&(&b2 * &b4) * &b6);
        &(&(&t1 - &t2) - &t3) + &t4
    }

    pub fn j_invariant(&self) -> FieldElement {
        let c4 = self.c4();
        let delta = self.discriminant();
        (&(&c4 * &c4) * &c4).div(&delta).expect("nonsingular model")
    }

    /// Coefficients `(A, B)` of the isomorphic short model `y^2 = x^3 + A x + B`
    /// with `A = -27 c4`, `B = -54 c6`.
    pub fn short_coefficients(&self) -> (FieldElement, FieldElement) {
        let m = self.radicand();
        (&scalar(-27, m) * &self.c4(), &scalar(-54, m) * &self.c6())
    }

    /// Quadratic twist `y^2 = x^3 + d^2 A x + d^3 B` of the short model.
    pub fn quadratic_twist(&self, d: &FieldElement) -> Result<Self> {
        let (a, b) = self.short_coefficients();
        let d2 = d * d;
        Self::short(&d2 * &a, &(&d2 * d) * &b)
    }

    fn check_field(&self, field: &FieldDescriptor) -> Result<()> {
        match field {
            FieldDescriptor::Supplied(_) => Err(Error::Unsupported(
                "curves over fields of degree > 2".into(),
            )),
            _ => {
                let m = self.radicand();
                if m != 0 && field.radicand() != Some(m) {
                    return Err(Error::InvalidInput(format!("curve over Q(sqrt {m}) used with {field}")));
                }
                Ok(())
            }
        }
    }

    /// Semi-stable reduction type at a degree-one place above `q >= 5`.
    pub fn classify_place(&self, field: &FieldDescriptor, place: &DegreeOnePlace) -> Result<PlaceType> {
        self.check_field(field)?;
        if place.q < 5 {
            return Err(Error::Unsupported(format!("residue characteristic {}", place.q)));
        }
        let j = self.j_invariant();
        if !j.is_zero() && field.valuation_at(&j, place)? < 0 {
            return Ok(PlaceType::PotentiallyMultiplicative);
        }
        let jt = field.reduce_mod_place(&j, place)?;
        Ok(if supersingular_j(jt, place.q)? { PlaceType::GoodSupersingular } else { PlaceType::GoodOrdinary })
    }

    /// Reduction `(a, b)` in `F_q` of a model `y^2 = x^3 + a x + b` with good
    /// reduction at the place, obtained by scaling and minimalizing the short model.
    pub fn good_reduction(&self, field: &FieldDescriptor, place: &DegreeOnePlace) -> Result<(u64, u64)> {
        self.check_field(field)?;
        let q = place.q;
        if q < 5 {
            return Err(Error::Unsupported(format!("residue characteristic {q}")));
        }
        let (mut a, mut b) = self.short_coefficients();
        let val = |x: &FieldElement| -> Result<Option<i64>> {
            if x.is_zero() {
                Ok(None)
            } else {
                field.valuation_at(x, place).map(Some)
            }
        };
        let (va, vb) = (val(&a)?, val(&b)?);
        // u = q^k with k chosen so that A u^4 and B u^6 are integral
        let need_a = va.map_or(0, |v| (-v).max(0));
        let need_b = vb.map_or(0, |v| (-v).max(0));
        let mut k = (need_a + 3) / 4;
        k = k.max((need_b + 5) / 6);
        let mut va = va.map(|v| v + 4 * k);
        let mut vb = vb.map(|v| v + 6 * k);
        let mut shift: i64 = k;
        while va.map_or(true, |v| v >= 4) && vb.map_or(true, |v| v >= 6) && (va.is_some() || vb.is_some()) {
            shift -= 1;
            va = va.map(|v| v - 4);
            vb = vb.map(|v| v - 6);
        }
        let m = a.m;
        let scale = |x: &FieldElement, e: i64| -> FieldElement {
            let qe = BigRational::from_integer(BigInt::from(q).pow(e.unsigned_abs() as u32));
            let f = if e >= 0 { qe } else { BigRational::one() / qe };
            x * &FieldElement::from_rational(f, m)
        };
        a = scale(&a, 4 * shift);
        b = scale(&b, 6 * shift);
        let disc = &(&scalar(4, m) * &(&(&a * &a) * &a)) + &(&scalar(27, m) * &(&b * &b));
        if disc.is_zero() || val(&disc)? != Some(0) {
            return Err(Error::NoGoodModel { q });
        }
        Ok((field.reduce_mod_place(&a, place)?, field.reduce_mod_place(&b, place)?))
    }

    pub fn trace_of_frobenius(&self, field: &FieldDescriptor, place: &DegreeOnePlace) -> Result<FrobeniusData> {
        let (a, b) = self.good_reduction(field, place)?;
        FrobeniusData::new(place.q, trace_short(a, b, place.q))
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{},{}]", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

impl Serialize for WeierstrassModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Trace of Frobenius of `y^2 = x^3 + a x + b` over `F_q` (odd `q`), by
/// counting points with a table of quadratic residues.
pub fn trace_short(a: u64, b: u64, q: u64) -> i64 {
    let mut chi = vec![-1i8; q as usize];
    chi[0] = 0;
    for y in 1..=q / 2 {
        chi[arith::mul_mod(y, y, q) as usize] = 1;
    }
    let mut sum: i64 = 0;
    for x in 0..q {
        let x2 = arith::mul_mod(x, x, q);
        let f = (arith::mul_mod(x2 + a, x, q) + b) % q;
        sum += chi[f as usize] as i64;
    }
    -sum
}

/// A short model `(a, b)` over `F_q` with j-invariant `j`.
pub fn curve_with_j(j: u64, q: u64) -> (u64, u64) {
    let j = j % q;
    if j == 0 {
        return (0, 1);
    }
    if j == 1728 % q {
        return (1, 0);
    }
    let den = (1728 % q + q - j) % q;
    let k = arith::mul_mod(j, arith::inv_mod(den, q), q);
    (arith::mul_mod(3, k, q), arith::mul_mod(2, k, q))
}

/// Whether curves over `F_q` with invariant `j` are supersingular, by the
/// Hasse invariant: the coefficient of `x^(q-1)` in `f(x)^((q-1)/2)`.
pub fn supersingular_j(j: u64, q: u64) -> Result<bool> {
    if q < 5 {
        return Err(Error::Unsupported(format!("supersingularity test in characteristic {q}")));
    }
    if !arith::is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let (a, b) = curve_with_j(j, q);
    Ok(hasse_invariant(a, b, q) == 0)
}

/// Coefficient of `x^(q-1)` in `(x^3 + a x + b)^n`, `n = (q-1)/2`, modulo `q`,
/// summing the multinomial terms `n!/(i! j! k!) a^j b^k` with `3i + j = q - 1`.
pub fn hasse_invariant(a: u64, b: u64, q: u64) -> u64 {
    let n = (q - 1) / 2;
    let mut fact = vec![1u64; n as usize + 1];
    for i in 1..=n as usize {
        fact[i] = arith::mul_mod(fact[i - 1], i as u64, q);
    }
    let mut total = 0u64;
    let mut i = 0u64;
    while 3 * i <= q - 1 {
        let j = q - 1 - 3 * i;
        if i + j <= n {
            let k = n - i - j;
            let denom = arith::mul_mod(arith::mul_mod(fact[i as usize], fact[j as usize], q), fact[k as usize], q);
            let mut term = arith::mul_mod(fact[n as usize], arith::inv_mod(denom, q), q);
            term = arith::mul_mod(term, arith::pow_mod(a, j, q), q);
            term = arith::mul_mod(term, arith::pow_mod(b, k, q), q);
            total = (total + term) % q;
        }
        i += 1;
    }
    total
}
