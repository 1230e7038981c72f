//! Certified integer bounds: `C1`, `C2`, `C(K, n)`, `B(K; q)`, the torsion
//! bound, the norm cap of the split-ideal set and `C_K`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{decimal_string, ln2, refine_ceil, Enclosure, Round};
use crate::numfield::{fundamental_unit, real_embedding, FieldDescriptor, FieldInvariants, Provenance};

/// Largest bound (in bits) that will be materialized.
const MAX_BOUND_BITS: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundName {
    C1,
    C2,
    #[serde(rename = "C_of_n")]
    COfN,
    #[serde(rename = "B_of_q")]
    BOfQ,
    #[serde(rename = "torsion")]
    Torsion,
    #[serde(rename = "C_K")]
    CK,
    #[serde(rename = "jk_bound")]
    JkBound,
    #[serde(rename = "delta_K")]
    DeltaK,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub name: BoundName,
    /// Decimal integer for integer bounds, `[lo, hi]` for real enclosures.
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enclosure: Option<Enclosure>,
    pub inputs: BTreeMap<String, String>,
    pub precision_bits: u32,
}

impl BoundReport {
    pub fn integer(name: BoundName, value: &BigInt, inputs: BTreeMap<String, String>, precision_bits: u32) -> Self {
        BoundReport { name, value: value.to_string(), enclosure: None, inputs, precision_bits }
    }

    pub fn real(name: BoundName, e: &Enclosure, inputs: BTreeMap<String, String>) -> Self {
        let value = format!(
            "[{}, {}]",
            decimal_string(e.lo(), Round::Down, 30),
            decimal_string(e.hi(), Round::Up, 30)
        );
        BoundReport { name, value, enclosure: Some(e.clone()), inputs, precision_bits: e.precision() }
    }
}

/// Field invariants echoed into bound reports.
pub fn invariant_inputs(inv: &FieldInvariants) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("d_K".into(), inv.degree.to_string());
    m.insert("disc_K".into(), inv.discriminant.to_string());
    m.insert("h_K".into(), inv.class_number.to_string());
    m.insert("r_K".into(), inv.unit_rank.to_string());
    m.insert(
        "R_K".into(),
        format!(
            "[{}, {}]",
            decimal_string(inv.regulator.lo(), Round::Down, 20),
            decimal_string(inv.regulator.hi(), Round::Up, 20)
        ),
    );
    m
}

/// `delta_K`: `ln 2 / (r_K + 1)` in degree at most 2, otherwise the larger of
/// `1 / (53 d ln(6d))` and `(ln ln d / ln d)^3 / 1201`.
pub fn delta_k(inv: &FieldInvariants, prec: u32) -> Result<Enclosure> {
    let w = prec + 16;
    let d = inv.degree;
    let out = if d <= 2 {
        ln2(w).div_int(inv.unit_rank + 1)?
    } else {
        let six_d = Enclosure::from_int(6 * d, w).ln()?;
        let first = six_d.mul_int(53 * d).recip()?;
        let ln_d = Enclosure::from_int(d, w).ln()?;
        let ratio = ln_d.ln()?.div(&ln_d)?;
        let second = ratio.powu(3).div_int(1201)?;
        first.max(&second)
    };
    Ok(out.with_precision(prec))
}

/// `C1 = r^(r+1) delta^-(r-1) / 2`; exactly 0 when `r = 0` and 1/2 when `r = 1`.
pub fn c1(inv: &FieldInvariants, prec: u32) -> Result<Enclosure> {
    let r = inv.unit_rank;
    match r {
        0 => Ok(Enclosure::zero(prec)),
        1 => Ok(Enclosure::from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)), prec)),
        _ => {
            let w = prec + 16;
            let num = BigInt::from(r).pow(r + 1);
            let delta = delta_k(inv, w)?;
            let v = delta.powi(-(i64::from(r) - 1))?.mul_int(num).mul_pow2(-1);
            Ok(v.with_precision(prec))
        }
    }
}

/// `C2 = exp(12 d C1 R)`; exactly 1 when `C1 = 0`.
pub fn c2(inv: &FieldInvariants, prec: u32) -> Result<Enclosure> {
    let w = prec + 16;
    let c = c1(inv, w)?;
    if c.is_point() && c.lo().is_zero() {
        return Ok(Enclosure::one(prec));
    }
    let arg = c.mul(&inv.regulator.with_precision(w.max(inv.regulator.precision()))).mul_int(12 * inv.degree);
    Ok(arg.exp()?.with_precision(prec))
}

/// `C2` for a field descriptor. For computed real quadratic fields
/// `12 d C1 R = 12 ln eps`, so `C2 = eps^12` is evaluated from the exact unit.
pub fn c2_for_field(field: &FieldDescriptor, prec: u32) -> Result<Enclosure> {
    if let FieldDescriptor::Quadratic { m } = field {
        if *m > 0 {
            let eps12 = fundamental_unit(*m).unit.pow(12);
            return real_embedding(&eps12, prec);
        }
    }
    c2(&field.invariants(prec)?, prec)
}

fn check_size(n: &BigInt, exponent: u64) -> Result<()> {
    let bits = n.bits().max(1);
    if bits.saturating_mul(exponent) > MAX_BOUND_BITS {
        return Err(Error::Overflow(format!("bound with about {} bits", bits.saturating_mul(exponent))));
    }
    Ok(())
}

/// Enclosure of `(n^(12h) C2 + n^(6h))^(2d)` given an enclosure of `C2`.
pub fn c_of_n_enclosure(inv: &FieldInvariants, c2: &Enclosure, n: &BigInt) -> Result<Enclosure> {
    let h = u32::try_from(inv.class_number).map_err(|_| Error::Overflow("class number".into()))?;
    let prec = c2.precision();
    let big = Enclosure::from_int(n.pow(12 * h), prec);
    let small = Enclosure::from_int(n.pow(6 * h), prec);
    Ok(big.mul(c2).add(&small).powu(2 * u64::from(inv.degree)))
}

/// `C(K, n)` as a certified integer ceiling, with the precision used.
/// Exact big-integer evaluation when `C2 = 1`.
pub fn c_of_n(field: &FieldDescriptor, n: &BigInt, prec: u32) -> Result<(BigInt, u32)> {
    if !n.is_positive() {
        return Err(Error::InvalidInput(format!("C(K, n) needs n >= 1, got {n}")));
    }
    let inv = field.invariants(prec)?;
    c_of_n_with(field, &inv, n, prec)
}

fn c_of_n_with(field: &FieldDescriptor, inv: &FieldInvariants, n: &BigInt, prec: u32) -> Result<(BigInt, u32)> {
    let h = inv.class_number;
    check_size(n, 24 * h * u64::from(inv.degree))?;
    let h32 = u32::try_from(h).map_err(|_| Error::Overflow("class number".into()))?;
    if inv.unit_rank == 0 {
        let v = (n.pow(12 * h32) + n.pow(6 * h32)).pow(2 * inv.degree);
        return Ok((v, prec));
    }
    // the enclosure must resolve integers of this size
    let start = prec.max(((n.bits() * 24 * h * u64::from(inv.degree)) as u32).saturating_add(64));
    refine_ceil(start, |p| {
        let c2 = match (field, inv.provenance) {
            (FieldDescriptor::Quadratic { .. }, Provenance::Computed) => c2_for_field(field, p)?,
            _ => c2(inv, p)?,
        };
        c_of_n_enclosure(inv, &c2, n)
    })
}

/// `(1 + 3^(6 d h))^2`.
pub fn torsion_bound(inv: &FieldInvariants) -> Result<BigInt> {
    let e = 6 * u64::from(inv.degree) * inv.class_number;
    check_size(&BigInt::from(3), 2 * e)?;
    let t = BigInt::one() + BigInt::from(3).pow(e as u32);
    Ok(&t * &t)
}

/// `B(K; q) = max(C(K, q), (1 + 3^(6dh))^2)` for a totally split prime `q`.
pub fn b_of_q(field: &FieldDescriptor, q: u64, prec: u32) -> Result<(BigInt, u32)> {
    if !field.totally_split(q)? {
        return Err(Error::NotSplit { q });
    }
    let inv = field.invariants(prec)?;
    let (c, p) = c_of_n_with(field, &inv, &BigInt::from(q), prec)?;
    Ok((c.max(torsion_bound(&inv)?), p))
}

/// Certified ceiling of `2 |disc|^(A h)`, computed exactly with integer roots.
pub fn jk_bound(inv: &FieldInvariants, a: &BigRational) -> Result<BigInt> {
    if !a.is_positive() {
        return Err(Error::InvalidInput(format!("A must be positive, got {a}")));
    }
    let disc = inv.discriminant.abs();
    // |disc|^(num h / den): ceil(2 X^(1/den)) = ceil((2^den X)^(1/den))
    let num = a.numer() * BigInt::from(inv.class_number);
    let den = a.denom().to_u32().ok_or_else(|| Error::Overflow("denominator of A".into()))?;
    let num = num.to_u32().ok_or_else(|| Error::Overflow("exponent A h".into()))?;
    check_size(&disc, u64::from(num))?;
    let x = disc.pow(num) << den as usize;
    let r = x.nth_root(den);
    Ok(if r.pow(den) == x { r } else { r + 1 })
}

/// `C_K = max(C(K, 2|disc|^(A h)), (1 + 3^(6dh))^2)`.
pub fn c_k(field: &FieldDescriptor, a: &BigRational, prec: u32) -> Result<(BigInt, u32)> {
    let inv = field.invariants(prec)?;
    let n = jk_bound(&inv, a)?;
    let (c, p) = c_of_n_with(field, &inv, &n, prec)?;
    Ok((c.max(torsion_bound(&inv)?), p))
}

/// Whether an enclosure is the exact value zero.
pub fn is_exact_zero(e: &Enclosure) -> bool {
    e.is_point() && e.lo().is_zero()
}

/// Echo of `C2` as an integer-free report value.
pub fn c2_report(field: &FieldDescriptor, prec: u32) -> Result<BoundReport> {
    let inv = field.invariants(prec)?;
    let e = c2_for_field(field, prec)?;
    Ok(BoundReport::real(BoundName::C2, &e, invariant_inputs(&inv)))
}

pub fn c1_report(field: &FieldDescriptor, prec: u32) -> Result<BoundReport> {
    let inv = field.invariants(prec)?;
    Ok(BoundReport::real(BoundName::C1, &c1(&inv, prec)?, invariant_inputs(&inv)))
}

pub fn delta_report(field: &FieldDescriptor, prec: u32) -> Result<BoundReport> {
    let inv = field.invariants(prec)?;
    Ok(BoundReport::real(BoundName::DeltaK, &delta_k(&inv, prec)?, invariant_inputs(&inv)))
}

pub fn c_of_n_report(field: &FieldDescriptor, n: &BigInt, prec: u32) -> Result<BoundReport> {
    let inv = field.invariants(prec)?;
    let (v, p) = c_of_n_with(field, &inv, n, prec)?;
    let mut inputs = invariant_inputs(&inv);
    inputs.insert("n".into(), n.to_string());
    Ok(BoundReport::integer(BoundName::COfN, &v, inputs, p))
}

pub fn b_of_q_report(field: &FieldDescriptor, q: u64, prec: u32) -> Result<BoundReport> {
    let inv = field.invariants(prec)?;
    let (v, p) = b_of_q(field, q, prec)?;
    let mut inputs = invariant_inputs(&inv);
    inputs.insert("q".into(), q.to_string());
    Ok(BoundReport::integer(BoundName::BOfQ, &v, inputs, p))
}

pub fn torsion_report(field: &FieldDescriptor, prec: u32) -> Result<BoundReport> {
    let inv = field.invariants(prec)?;
    Ok(BoundReport::integer(BoundName::Torsion, &torsion_bound(&inv)?, invariant_inputs(&inv), prec))
}

pub fn jk_bound_report(field: &FieldDescriptor, a: &BigRational, prec: u32) -> Result<BoundReport> {
    let inv = field.invariants(prec)?;
    let mut inputs = invariant_inputs(&inv);
    inputs.insert("A".into(), a.to_string());
    Ok(BoundReport::integer(BoundName::JkBound, &jk_bound(&inv, a)?, inputs, prec))
}

pub fn c_k_report(field: &FieldDescriptor, a: &BigRational, prec: u32) -> Result<BoundReport> {
    let inv = field.invariants(prec)?;
    let (v, p) = c_k(field, a, prec)?;
    let mut inputs = invariant_inputs(&inv);
    inputs.insert("A".into(), a.to_string());
    Ok(BoundReport::integer(BoundName::CK, &v, inputs, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn quad(m: i64) -> FieldDescriptor {
        FieldDescriptor::quadratic(m).unwrap()
    }

    fn int(n: u64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn delta_values() {
        let d = delta_k(&q().invariants(64).unwrap(), 64).unwrap();
        assert!((d.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        let d = delta_k(&quad(2).invariants(64).unwrap(), 64).unwrap();
        assert!((d.to_f64() - std::f64::consts::LN_2 / 2.0).abs() < 1e-15);
        let mut inv = q().invariants(64).unwrap();
        inv.degree = 6;
        inv.unit_rank = 5;
        let d = delta_k(&inv, 64).unwrap();
        assert!((d.to_f64() - 1.0 / (318.0 * 36f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn c1_and_c2_degenerate_cases() {
        for f in [q(), quad(-5)] {
            let inv = f.invariants(64).unwrap();
            assert!(is_exact_zero(&c1(&inv, 64).unwrap()));
            let c = c2(&inv, 64).unwrap();
            assert!(c.is_point() && c.contains_rational(&BigRational::one()));
        }
        let c = c1(&quad(2).invariants(64).unwrap(), 64).unwrap();
        assert!(c.is_point() && c.contains_rational(&BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn c2_of_q_sqrt2() {
        let inv = quad(2).invariants(128).unwrap();
        let c = c2(&inv, 128).unwrap();
        let exact = c2_for_field(&quad(2), 128).unwrap();
        assert!(c.overlaps(&exact));
        assert!((c.to_f64() - 39201.99997449).abs() < 1e-6);
    }

    #[test]
    fn c_of_n_exact_branch() {
        assert_eq!(c_of_n(&q(), &int(2), 64).unwrap().0, int(17_305_600));
        assert_eq!(c_of_n(&q(), &int(1), 64).unwrap().0, int(4));
        assert_eq!(c_of_n(&quad(-1), &int(2), 64).unwrap().0, int(299_483_791_360_000));
    }

    #[test]
    fn c_of_n_real_quadratic_is_certified() {
        let (v, _) = c_of_n(&quad(2), &int(2), 128).unwrap();
        // (4096 * eps^12 + 64)^4 with eps^12 = 19601 + 13860 sqrt 2 ~ 39201.99997
        let approx = (4096.0 * 39201.99997449f64 + 64.0).powi(4);
        let vf = v.to_f64().unwrap();
        assert!(vf >= approx * (1.0 - 1e-12) && vf <= approx * (1.0 + 1e-12));
    }

    #[test]
    fn torsion_and_b_of_q() {
        let inv = q().invariants(64).unwrap();
        assert_eq!(torsion_bound(&inv).unwrap(), int(532_900));
        assert_eq!(torsion_bound(&quad(-1).invariants(64).unwrap()).unwrap(), int(531_442).pow(2));
        assert_eq!(b_of_q(&q(), 2, 64).unwrap().0, int(17_305_600));
        assert_eq!(b_of_q(&q(), 3, 64).unwrap().0, (int(531_441) + int(729)).pow(2));
        assert!(matches!(b_of_q(&quad(-1), 7, 64), Err(Error::NotSplit { q: 7 })));
    }

    #[test]
    fn jk_bounds() {
        let one = BigRational::one();
        assert_eq!(jk_bound(&quad(-1).invariants(64).unwrap(), &one).unwrap(), int(8));
        assert_eq!(jk_bound(&quad(-5).invariants(64).unwrap(), &one).unwrap(), int(800));
        assert_eq!(jk_bound(&q().invariants(64).unwrap(), &BigRational::new(7.into(), 3.into())).unwrap(), int(2));
        // 2 * 4^(1/2) = 4 exactly, 2 * 20^(1/2) = 8.94.. -> 9
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(jk_bound(&quad(-1).invariants(64).unwrap(), &half).unwrap(), int(4));
        assert_eq!(jk_bound(&quad(-5).invariants(64).unwrap(), &BigRational::new(1.into(), 4.into())).unwrap(), int(9));
        assert!(jk_bound(&q().invariants(64).unwrap(), &BigRational::zero()).is_err());
    }

    #[test]
    fn c_k_values() {
        let one = BigRational::one();
        assert_eq!(c_k(&q(), &one, 64).unwrap().0, int(17_305_600));
        let expected = (int(8).pow(12) + int(8).pow(6)).pow(4);
        assert_eq!(c_k(&quad(-1), &one, 64).unwrap().0, expected);
    }
}
