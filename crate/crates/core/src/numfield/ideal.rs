//! Prime ideals of quadratic orders, their powers, and generators of small height.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::exactnum::Enclosure;
use crate::FieldElement;

use super::forms::{reduce_indefinite, Form};
use super::height::{height_power, real_embedding};
use super::units::fundamental_unit;
use super::{DegreeOnePlace, FieldDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeKind {
    Split,
    Ramified,
    Inert,
}

/// A prime ideal of `O_K` for quadratic `K`: `(q, w - c)` when `q` splits or
/// ramifies, `(q)` when inert.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeIdeal {
    pub q: u64,
    pub kind: PrimeKind,
    pub c: Option<u64>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        match self.kind {
            PrimeKind::Inert => self.q * self.q,
            _ => self.q,
        }
    }

    /// The prime `(q, w - c)` of a degree-one place; for the rational field, `(q)`.
    pub fn from_place(place: &DegreeOnePlace) -> Self {
        PrimeIdeal { q: place.q, kind: PrimeKind::Split, c: place.omega }
    }
}

/// Z-lattice `Z a + Z (b + d w)` in Hermite normal form, `0 <= b < a`, `d > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Lattice {
    a: BigInt,
    b: BigInt,
    d: BigInt,
}

impl Lattice {
    fn from_vectors(vs: &[(BigInt, BigInt)]) -> Lattice {
        let (mut a, mut b, mut d) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
        for (x, y) in vs {
            if y.is_zero() {
                a = a.gcd(x);
                continue;
            }
            let e = d.extended_gcd(y);
            let g = e.gcd;
            let nb = &e.x * &b + &e.y * x;
            let rest = &b * (y / &g) - x * (&d / &g);
            a = a.gcd(&rest);
            b = nb;
            d = g;
        }
        assert!(a.is_positive() && d.is_positive(), "degenerate lattice");
        b = b.mod_floor(&a);
        Lattice { a, b, d }
    }

    /// Elements `x + y w` spanning the lattice.
    fn basis(&self) -> [(BigInt, BigInt); 2] {
        [(self.a.clone(), BigInt::zero()), (self.b.clone(), self.d.clone())]
    }
}

/// `(x1 + y1 w)(x2 + y2 w)` with `w^2 = t w - n`.
fn mul_coords(u: &(BigInt, BigInt), v: &(BigInt, BigInt), t: &BigInt, n: &BigInt) -> (BigInt, BigInt) {
    let yy = &u.1 * &v.1;
    (&u.0 * &v.0 - n * &yy, &u.0 * &v.1 + &u.1 * &v.0 + t * &yy)
}

fn ideal_mul(i: &Lattice, j: &Lattice, t: &BigInt, n: &BigInt) -> Lattice {
    let mut vs = Vec::with_capacity(4);
    for u in i.basis().iter() {
        for v in j.basis().iter() {
            vs.push(mul_coords(u, v, t, n));
        }
    }
    Lattice::from_vectors(&vs)
}

fn ideal_pow(i: &Lattice, mut e: u64, t: &BigInt, n: &BigInt) -> Lattice {
    let mut result = Lattice { a: BigInt::one(), b: BigInt::zero(), d: BigInt::one() };
    let mut base = i.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = ideal_mul(&result, &base, t, n);
        }
        e >>= 1;
        if e > 0 {
            base = ideal_mul(&base, &base, t, n);
        }
    }
    result
}

fn quadratic_data(field: &FieldDescriptor) -> Result<(i64, BigInt, BigInt, FieldElement)> {
    match field {
        FieldDescriptor::Quadratic { m } => {
            let (t, n) = field.omega_poly().unwrap();
            Ok((*m, t, n, field.omega().unwrap()))
        }
        _ => Err(Error::Unsupported("prime ideals outside quadratic fields".into())),
    }
}

fn coords_to_element(x: &BigInt, y: &BigInt, omega: &FieldElement) -> FieldElement {
    let m = omega.m;
    &FieldElement::from_rational(BigRational::from_integer(x.clone()), m)
        + &(omega * &FieldElement::from_rational(BigRational::from_integer(y.clone()), m))
}

/// Roots of `x^2 - t x + n` modulo the prime `q`, ascending.
fn roots_mod(t: &BigInt, n: &BigInt, q: u64) -> Vec<u64> {
    let tt = arith::big_mod(t, q);
    let nn = arith::big_mod(n, q);
    if q == 2 {
        return (0..2).filter(|&x| (x * x + tt * x + nn) % 2 == 0).collect();
    }
    let disc = (arith::mul_mod(tt, tt, q) + q - arith::mul_mod(4, nn, q)) % q;
    let s = match arith::sqrt_mod(disc, q) {
        Some(s) => s,
        None => return Vec::new(),
    };
    let inv2 = arith::inv_mod(2, q);
    let mut out = vec![arith::mul_mod((tt + s) % q, inv2, q), arith::mul_mod((tt + q - s) % q, inv2, q)];
    out.sort_unstable();
    out.dedup();
    out
}

/// All prime ideals of a quadratic field with norm at most `bound`.
pub fn prime_ideals_up_to(field: &FieldDescriptor, bound: u64) -> Result<Vec<PrimeIdeal>> {
    let (_, t, n, _) = quadratic_data(field)?;
    let disc = field.discriminant();
    let mut out = Vec::new();
    for q in arith::primes_up_to(bound) {
        let kind = if arith::big_mod(&disc, q) == 0 {
            PrimeKind::Ramified
        } else if arith::kronecker(&disc, q) == 1 {
            PrimeKind::Split
        } else {
            PrimeKind::Inert
        };
        match kind {
            PrimeKind::Inert => {
                if q.checked_mul(q).map_or(false, |qq| qq <= bound) {
                    out.push(PrimeIdeal { q, kind, c: None });
                }
            }
            _ => {
                for c in roots_mod(&t, &n, q) {
                    out.push(PrimeIdeal { q, kind, c: Some(c) });
                }
            }
        }
    }
    Ok(out)
}

/// A generator of the principal ideal `P^h` (`h` the class number), of small
/// height: in real fields the generator is adjusted by the power of the
/// fundamental unit that balances the two real absolute values.
pub fn small_generator(field: &FieldDescriptor, ideal: &PrimeIdeal, h: u64, prec: u32) -> Result<FieldElement> {
    if let FieldDescriptor::Rational = field {
        return Ok(FieldElement::from_rational(BigRational::from_integer(BigInt::from(ideal.q).pow(h as u32)), 0));
    }
    let (m, t, n, omega) = quadratic_data(field)?;
    let base = match (ideal.kind, ideal.c) {
        (PrimeKind::Inert, _) => {
            let qh = BigInt::from(ideal.q).pow(h as u32);
            return Ok(FieldElement::from_rational(BigRational::from_integer(qh), m));
        }
        (_, Some(c)) => Lattice::from_vectors(&[
            (BigInt::from(ideal.q), BigInt::zero()),
            (-BigInt::from(c), BigInt::one()),
        ]),
        (_, None) => return Err(Error::InvalidInput("split or ramified prime ideal without a root".into())),
    };
    let power = ideal_pow(&base, h, &t, &n);
    let content = power.d.clone();
    debug_assert!((&power.a % &content).is_zero() && (&power.b % &content).is_zero());
    let a = &power.a / &content;
    let b = &power.b / &content;
    // primitive ideal a Z + (b + w) Z <-> form N(x a + y (b + w)) / a
    let form = Form::new(a.clone(), BigInt::from(2) * &b + &t, (&b * &b + &t * &b + &n) / &a);
    let (x, y) = if m < 0 {
        let (reduced, mat) = form.reduce_definite();
        if !reduced.a.is_one() {
            return Err(Error::InvalidInput(format!("P^{h} is not principal; class number {h} is wrong")));
        }
        (mat.p, mat.r)
    } else {
        principal_vector(&form, h)?
    };
    let alpha = coords_to_element(&(&x * &a + &y * &b), &y, &omega);
    let gamma = &alpha * &FieldElement::from_rational(BigRational::from_integer(content), m);
    debug_assert_eq!(gamma.norm().abs(), BigRational::from_integer(BigInt::from(ideal.norm()).pow(h as u32)));
    if m < 0 {
        Ok(gamma)
    } else {
        balance_by_units(&gamma, m, prec)
    }
}

/// Coordinates `(x, y)` with `|f(x, y)| = 1` for an indefinite form in the
/// principal (wide) class, found by walking its cycle of reduced forms.
fn principal_vector(form: &Form, h: u64) -> Result<(BigInt, BigInt)> {
    let (mut g, mut mat) = reduce_indefinite(form);
    let start = g.clone();
    loop {
        if g.a.abs().is_one() {
            return Ok((mat.p, mat.r));
        }
        let (next, step) = g.rho();
        g = next;
        mat = mat.mul(&step);
        if g == start {
            return Err(Error::InvalidInput(format!("P^{h} is not principal; class number {h} is wrong")));
        }
    }
}

/// Multiplies `gamma` by the power of the fundamental unit minimizing its height.
fn balance_by_units(gamma: &FieldElement, m: i64, prec: u32) -> Result<FieldElement> {
    let eps = fundamental_unit(m).unit;
    let w = prec.max(64);
    let s1 = real_embedding(&gamma.real_abs(), w)?.ln()?;
    let s2 = real_embedding(&gamma.conj().real_abs(), w)?.ln()?;
    let r = real_embedding(&eps, w)?.ln()?;
    // ln|s1 eps^k| - ln|s2 eps^-k| = (s1 - s2) + 2 k R
    let k0 = (-(s1.sub(&s2)).to_f64() / (2.0 * r.to_f64())).round();
    let k0 = k0.to_i64().unwrap_or(0);
    let mut best: Option<(FieldElement, Enclosure)> = None;
    for k in [k0, k0 - 1, k0 + 1] {
        let k = i32::try_from(k).map_err(|_| Error::Overflow("unit exponent".into()))?;
        let cand = gamma * &eps.powi(k).expect("units are invertible");
        let hp = height_power(&cand, 2, w)?;
        let better = match &best {
            None => true,
            Some((_, bh)) => hp.certainly_lt(bh),
        };
        if better {
            best = Some((cand, hp));
        }
    }
    Ok(best.unwrap().0)
}

/// The reduced form class attached to a degree-one place of an imaginary quadratic field.
pub fn ideal_class_of(field: &FieldDescriptor, place: &DegreeOnePlace) -> Result<Form> {
    if !field.is_imaginary_quadratic() {
        return Err(Error::Unsupported("ideal classes need an imaginary quadratic field".into()));
    }
    let (_, t, n, _) = quadratic_data(field)?;
    let c = BigInt::from(place.omega.ok_or(Error::NotSplit { q: place.q })?);
    let q = BigInt::from(place.q);
    let form = Form::new(q.clone(), &t - BigInt::from(2) * &c, (&c * &c - &t * &c + &n) / &q);
    Ok(form.reduce_definite().0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(m: i64) -> FieldDescriptor {
        FieldDescriptor::quadratic(m).unwrap()
    }

    #[test]
    fn hnf_of_principal_lattice() {
        let l = Lattice::from_vectors(&[(BigInt::from(6), BigInt::from(0)), (BigInt::from(4), BigInt::from(2))]);
        assert_eq!(l, Lattice { a: BigInt::from(6), b: BigInt::from(4), d: BigInt::from(2) });
    }

    #[test]
    fn generator_above_two_in_q_sqrt2() {
        let f = field(2);
        let p = prime_ideals_up_to(&f, 2).unwrap();
        assert_eq!(p.len(), 1);
        let g = small_generator(&f, &p[0], 1, 128).unwrap();
        assert_eq!(g.norm().abs(), BigRational::from_integer(2.into()));
        // a balanced generator is +-sqrt 2 up to sign
        assert_eq!(g.a, BigRational::zero());
    }

    #[test]
    fn generator_above_five_in_gaussian_integers() {
        let f = field(-1);
        let place = f.place(5, Some(2)).unwrap();
        let p = PrimeIdeal::from_place(&place);
        let g = small_generator(&f, &p, 1, 64).unwrap();
        assert_eq!(g.norm(), BigRational::from_integer(5.into()));
        // g lies in the place: valuation 1
        assert_eq!(f.valuation_at(&g, &place).unwrap(), 1);
    }

    #[test]
    fn square_of_nonprincipal_prime_in_q_sqrt_minus5() {
        let f = field(-5);
        let place = f.place(3, None).unwrap();
        let p = PrimeIdeal::from_place(&place);
        let g = small_generator(&f, &p, 2, 64).unwrap();
        assert_eq!(g.norm(), BigRational::from_integer(9.into()));
        assert_eq!(g.a.abs(), BigRational::from_integer(2.into()));
        assert_eq!(f.valuation_at(&g, &place).unwrap(), 2);
    }

    #[test]
    fn classes_of_places() {
        let f = field(-5);
        let p3 = f.place(3, None).unwrap();
        assert_eq!(ideal_class_of(&f, &p3).unwrap(), Form::new(2, 2, 3));
        let p29 = f.place(29, None).unwrap();
        assert_eq!(ideal_class_of(&f, &p29).unwrap(), Form::new(1, 0, 5));
        let gi = field(-1);
        assert_eq!(ideal_class_of(&gi, &gi.place(5, None).unwrap()).unwrap(), Form::new(1, 0, 1));
        assert!(ideal_class_of(&field(2), &field(2).place(7, None).unwrap()).is_err());
    }

    #[test]
    fn real_field_with_class_number_two() {
        let f = field(10);
        for p in prime_ideals_up_to(&f, 60).unwrap() {
            let g = small_generator(&f, &p, 2, 128).unwrap();
            assert_eq!(g.norm().abs(), BigRational::from_integer(BigInt::from(p.norm()).pow(2)));
        }
    }
}
