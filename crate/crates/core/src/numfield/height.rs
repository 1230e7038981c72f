//! Absolute multiplicative heights.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactnum::Enclosure;
use crate::FieldElement;

/// Enclosure of `a + b sqrt m` under the embedding with `sqrt m > 0`.
/// Requires a real field (`m >= 0`).
pub fn real_embedding(x: &FieldElement, prec: u32) -> Result<Enclosure> {
    if x.m < 0 {
        return Err(Error::Domain("real embedding of an imaginary quadratic element".into()));
    }
    let a = Enclosure::from_rational(&x.a, prec);
    if x.is_scalar() {
        return Ok(a);
    }
    let root = Enclosure::from_int(x.m, prec + 8).sqrt()?;
    Ok(a.add(&Enclosure::from_rational(&x.b, prec + 8).mul(&root)).with_precision(prec))
}

/// `|sigma(x)|` for each archimedean embedding of `Q(sqrt m)` up to complex
/// conjugation, as exact field elements when the field is real.
pub(crate) fn abs_real_embeddings(x: &FieldElement) -> Vec<FieldElement> {
    debug_assert!(x.m > 0);
    vec![x.real_abs(), x.conj().real_abs()]
}

fn rational_height(q: &BigRational) -> BigInt {
    q.numer().abs().max(q.denom().clone())
}

/// Leading coefficient of the primitive integer minimal polynomial of an
/// irrational quadratic element.
fn minpoly_leading(x: &FieldElement) -> BigInt {
    let t = x.trace();
    let n = x.norm();
    t.denom().lcm(n.denom())
}

/// Enclosure of `prod_v max(1, |x|_v)`, i.e. `H(x)^degree`, where complex
/// places contribute `|x|^2`.
///
/// `degree` is the degree of the ambient field (1 for Q, 2 for quadratic fields).
/// Rational and imaginary-quadratic inputs give exact (point) enclosures.
pub fn height_power(x: &FieldElement, degree: u32, prec: u32) -> Result<Enclosure> {
    if x.is_zero() {
        return Err(Error::Domain("height of zero".into()));
    }
    if x.is_scalar() {
        let h = rational_height(&x.a).pow(degree);
        return Ok(Enclosure::from_int(h, prec));
    }
    if degree != 2 {
        return Err(Error::Unsupported("heights of irrational elements need a quadratic field".into()));
    }
    let lead = minpoly_leading(x);
    if x.m < 0 {
        // one complex place: lead * max(1, |x|^2), and |x|^2 = N(x) is rational
        let n = x.norm();
        let prod = if n > BigRational::one() { n } else { BigRational::one() };
        let v = prod * BigRational::from_integer(lead);
        return Ok(Enclosure::from_rational(&v, prec));
    }
    let one = Enclosure::one(prec);
    let mut acc = Enclosure::from_int(lead, prec);
    for e in abs_real_embeddings(x) {
        acc = acc.mul(&real_embedding(&e, prec + 8)?.max(&one));
    }
    Ok(acc.with_precision(prec))
}

/// Enclosure of the absolute height `H(x)`.
pub fn height(x: &FieldElement, degree: u32, prec: u32) -> Result<Enclosure> {
    let hp = height_power(x, degree, prec + 8)?;
    let h = match degree {
        1 => hp,
        2 => hp.sqrt()?,
        _ => hp.ln()?.div_int(degree)?.exp()?,
    };
    Ok(h.with_precision(prec))
}
