//! Number fields: the rational field, quadratic fields, and Galois fields
//! described by user-supplied invariants.

mod forms;
mod height;
mod ideal;
mod quad;
mod units;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

pub use forms::{indefinite_cycles, reduce_indefinite, reduced_definite_forms, reduced_indefinite_forms, Form, Mat2};
pub use height::{height, height_power, real_embedding};
pub use ideal::{ideal_class_of, prime_ideals_up_to, small_generator, PrimeIdeal, PrimeKind};
pub use quad::QuadElement;
pub use units::{fundamental_unit, regulator, FundamentalUnit};

use crate::arith::{self, polymod};
use crate::error::{Error, Result};
use crate::exactnum::Enclosure;
use crate::FieldElement;

pub(crate) fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Supplied,
}

/// Invariants of a field given by the user rather than computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuppliedField {
    pub degree: u32,
    pub discriminant: BigInt,
    pub class_number: u64,
    pub regulator: Enclosure,
    pub unit_rank: u32,
    /// Monic defining polynomial, coefficients from constant term upward.
    pub poly: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldDescriptor {
    Rational,
    /// `Q(sqrt m)` with `m` squarefree, `m != 0, 1`.
    Quadratic { m: i64 },
    Supplied(Box<SuppliedField>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldInvariants {
    pub degree: u32,
    #[serde(serialize_with = "ser_bigint")]
    pub discriminant: BigInt,
    pub class_number: u64,
    pub regulator: Enclosure,
    pub unit_rank: u32,
    pub provenance: Provenance,
}

/// A place of residue degree one above a totally split prime `q`.
///
/// For quadratic fields `root` is the image of `sqrt m` (odd `q` only) and
/// `omega` the image of the integral generator `w` (`sqrt m`, or
/// `(1 + sqrt m)/2` when `m = 1 mod 4`). For supplied fields `root` is a root
/// of the defining polynomial modulo `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DegreeOnePlace {
    pub q: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<u64>,
}

impl DegreeOnePlace {
    pub fn norm(&self) -> u64 {
        self.q
    }

    pub fn label(&self) -> String {
        match (self.root, self.omega) {
            (Some(r), _) => format!("({}, s={})", self.q, r),
            (None, Some(w)) => format!("({}, w={})", self.q, w),
            _ => format!("({})", self.q),
        }
    }
}

impl PartialOrd for DegreeOnePlace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DegreeOnePlace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.root, self.omega).cmp(&(other.q, other.root, other.omega))
    }
}

impl fmt::Display for DegreeOnePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FieldDescriptor {
    pub fn quadratic(m: i64) -> Result<Self> {
        if m == 0 || m == 1 {
            return Err(Error::InvalidField(format!("m = {m} does not define a quadratic field")));
        }
        if !arith::is_squarefree(m) {
            return Err(Error::InvalidField(format!("m not squarefree: {m}")));
        }
        Ok(FieldDescriptor::Quadratic { m })
    }

    pub fn degree(&self) -> u32 {
        match self {
            FieldDescriptor::Rational => 1,
            FieldDescriptor::Quadratic { .. } => 2,
            FieldDescriptor::Supplied(s) => s.degree,
        }
    }

    /// Radicand `m` for quadratic fields, 0 for the rational field.
    pub fn radicand(&self) -> Option<i64> {
        match self {
            FieldDescriptor::Rational => Some(0),
            FieldDescriptor::Quadratic { m } => Some(*m),
            FieldDescriptor::Supplied(_) => None,
        }
    }

    pub fn is_imaginary_quadratic(&self) -> bool {
        matches!(self, FieldDescriptor::Quadratic { m } if *m < 0)
    }

    pub fn is_real_quadratic(&self) -> bool {
        matches!(self, FieldDescriptor::Quadratic { m } if *m > 0)
    }

    pub fn discriminant(&self) -> BigInt {
        match self {
            FieldDescriptor::Rational => BigInt::one(),
            FieldDescriptor::Quadratic { m } => BigInt::from(quadratic_discriminant(*m)),
            FieldDescriptor::Supplied(s) => s.discriminant.clone(),
        }
    }

    /// Trace and norm of the integral generator `w` of a quadratic field, so
    /// that `w` is a root of `x^2 - t x + n`.
    pub fn omega_poly(&self) -> Option<(BigInt, BigInt)> {
        match self {
            FieldDescriptor::Quadratic { m } if m.rem_euclid(4) == 1 => {
                Some((BigInt::one(), BigInt::from((1 - m) / 4)))
            }
            FieldDescriptor::Quadratic { m } => Some((BigInt::zero(), BigInt::from(-m))),
            _ => None,
        }
    }

    /// The integral generator `w` as a field element.
    pub fn omega(&self) -> Option<FieldElement> {
        match self {
            FieldDescriptor::Quadratic { m } if m.rem_euclid(4) == 1 => {
                let half = BigRational::new(1.into(), 2.into());
                Some(FieldElement::new(half.clone(), half, *m))
            }
            FieldDescriptor::Quadratic { m } => Some(FieldElement::generator(*m)),
            _ => None,
        }
    }

    pub fn class_number(&self) -> u64 {
        match self {
            FieldDescriptor::Rational => 1,
            FieldDescriptor::Quadratic { m } => class_number(*m),
            FieldDescriptor::Supplied(s) => s.class_number,
        }
    }

    pub fn invariants(&self, prec: u32) -> Result<FieldInvariants> {
        Ok(match self {
            FieldDescriptor::Rational => FieldInvariants {
                degree: 1,
                discriminant: BigInt::one(),
                class_number: 1,
                regulator: Enclosure::one(prec),
                unit_rank: 0,
                provenance: Provenance::Computed,
            },
            FieldDescriptor::Quadratic { m } => {
                let real = *m > 0;
                FieldInvariants {
                    degree: 2,
                    discriminant: BigInt::from(quadratic_discriminant(*m)),
                    class_number: class_number(*m),
                    regulator: if real { regulator(*m, prec)? } else { Enclosure::one(prec) },
                    unit_rank: u32::from(real),
                    provenance: Provenance::Computed,
                }
            }
            FieldDescriptor::Supplied(s) => FieldInvariants {
                degree: s.degree,
                discriminant: s.discriminant.clone(),
                class_number: s.class_number,
                regulator: s.regulator.with_precision(prec.max(s.regulator.precision())),
                unit_rank: s.unit_rank,
                provenance: Provenance::Supplied,
            },
        })
    }

    /// Whether `q` splits into `degree` distinct primes of residue degree one.
    pub fn totally_split(&self, q: u64) -> Result<bool> {
        if !arith::is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(match self {
            FieldDescriptor::Rational => true,
            FieldDescriptor::Quadratic { .. } => {
                let d = self.discriminant();
                arith::big_mod(&d, q) != 0 && arith::kronecker(&d, q) == 1
            }
            FieldDescriptor::Supplied(s) => supplied_totally_split(&s.poly, q),
        })
    }

    pub fn split_primes_up_to(&self, bound: u64) -> Vec<u64> {
        arith::primes_up_to(bound)
            .into_iter()
            .filter(|&q| self.totally_split(q).unwrap_or(false))
            .collect()
    }

    /// The degree-one places above a totally split prime, in ascending label order.
    pub fn degree_one_places(&self, q: u64) -> Result<Vec<DegreeOnePlace>> {
        if !self.totally_split(q)? {
            return Err(Error::NotSplit { q });
        }
        let mut places = match self {
            FieldDescriptor::Rational => vec![DegreeOnePlace { q, root: None, omega: None }],
            FieldDescriptor::Quadratic { m } => {
                let (t, n) = self.omega_poly().unwrap();
                if q == 2 {
                    let tt = arith::big_mod(&t, 2);
                    let nn = arith::big_mod(&n, 2);
                    (0..2u64)
                        .filter(|&x| (x * x + tt * x + nn) % 2 == 0)
                        .map(|x| DegreeOnePlace { q, root: None, omega: Some(x) })
                        .collect()
                } else {
                    let mm = arith::big_mod(&BigInt::from(*m), q);
                    let r = arith::sqrt_mod(mm, q).expect("split prime has a square root");
                    let mut roots = vec![r, (q - r) % q];
                    roots.sort_unstable();
                    roots.dedup();
                    roots
                        .into_iter()
                        .map(|r| DegreeOnePlace { q, root: Some(r), omega: Some(omega_image(*m, r, q)) })
                        .collect()
                }
            }
            FieldDescriptor::Supplied(s) => {
                if q > 10_000_000 {
                    return Err(Error::Unsupported(format!("root enumeration modulo {q}")));
                }
                let f: Vec<u64> = s.poly.iter().map(|c| arith::big_mod(c, q)).collect();
                (0..q)
                    .filter(|&x| polymod::eval(&f, x, q) == 0)
                    .map(|x| DegreeOnePlace { q, root: Some(x), omega: None })
                    .collect()
            }
        };
        places.sort();
        Ok(places)
    }

    fn check_element(&self, x: &FieldElement) -> Result<()> {
        match self {
            FieldDescriptor::Rational if !x.is_scalar() => {
                Err(Error::InvalidInput(format!("{x} is not rational")))
            }
            FieldDescriptor::Quadratic { m } if !x.is_scalar() && x.m != *m => Err(Error::InvalidInput(
                format!("element of Q(sqrt {}) used in Q(sqrt {m})", x.m),
            )),
            FieldDescriptor::Supplied(_) if !x.is_scalar() => Err(Error::Unsupported(
                "elements of supplied fields beyond Q".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Valuation of a nonzero element at a degree-one place above an odd
    /// prime (any prime for the rational field).
    pub fn valuation_at(&self, x: &FieldElement, place: &DegreeOnePlace) -> Result<i64> {
        self.check_element(x)?;
        if x.is_zero() {
            return Err(Error::Domain("valuation of zero".into()));
        }
        let q = place.q;
        if x.is_scalar() {
            return Ok(arith::valuation(x.a.numer(), q) as i64 - arith::valuation(x.a.denom(), q) as i64);
        }
        let (a, b, d) = x.scaled_numerators();
        let vd = arith::valuation(&d, q) as i64;
        let alpha = FieldElement::new(BigRational::from_integer(a.clone()), BigRational::from_integer(b.clone()), x.m);
        let vn = arith::valuation(&alpha.norm().to_integer(), q);
        let s = self.qadic_sqrt(place, vn + 1)?;
        let modulus = BigInt::from(q).pow(vn + 1);
        let image = (&a + &b * &s).mod_floor(&modulus);
        let va = if image.is_zero() { vn + 1 } else { arith::valuation(&image, q) };
        debug_assert!(va <= vn);
        Ok(va as i64 - vd)
    }

    /// Residue of `x` in `F_q` at a degree-one place; `x` must be integral there.
    pub fn reduce_mod_place(&self, x: &FieldElement, place: &DegreeOnePlace) -> Result<u64> {
        self.check_element(x)?;
        let q = place.q;
        if x.is_zero() {
            return Ok(0);
        }
        let v = self.valuation_at(x, place)?;
        if v < 0 {
            return Err(Error::NonIntegral { q });
        }
        if v > 0 {
            return Ok(0);
        }
        if x.is_scalar() {
            return arith::rational_mod(&x.a, q).ok_or(Error::NonIntegral { q });
        }
        let (a, b, d) = x.scaled_numerators();
        let vd = arith::valuation(&d, q);
        let s = self.qadic_sqrt(place, vd + 1)?;
        let qv = BigInt::from(q).pow(vd);
        let modulus = &qv * BigInt::from(q);
        let num = (&a + &b * &s).mod_floor(&modulus);
        debug_assert!((&num % &qv).is_zero());
        let num = arith::big_mod(&(num / &qv), q);
        let den = arith::big_mod(&(&d / &qv), q);
        Ok(arith::mul_mod(num, arith::inv_mod(den, q), q))
    }

    /// The image of `sqrt m` in `Z/q^k` at the place.
    fn qadic_sqrt(&self, place: &DegreeOnePlace, k: u32) -> Result<BigInt> {
        let m = match self {
            FieldDescriptor::Quadratic { m } => *m,
            _ => return Err(Error::Unsupported("q-adic embedding outside quadratic fields".into())),
        };
        let r = place
            .root
            .ok_or_else(|| Error::Unsupported(format!("residue characteristic {} in Q(sqrt {m})", place.q)))?;
        Ok(arith::hensel_lift_quadratic(&BigInt::zero(), &BigInt::from(-m), r, place.q, k.max(1)))
    }

    /// Places of `Q(sqrt m)` above odd `q` given by the image `r` of `sqrt m`;
    /// for the rational field, the single place at `q`.
    pub fn place(&self, q: u64, root: Option<u64>) -> Result<DegreeOnePlace> {
        let places = self.degree_one_places(q)?;
        match root {
            None => places.into_iter().next().ok_or(Error::NotSplit { q }),
            Some(r) => places
                .into_iter()
                .find(|p| p.root == Some(r % q))
                .ok_or_else(|| Error::InvalidInput(format!("no place above {q} with root {r}"))),
        }
    }

    pub fn element_from_ints(&self, a: i64, b: i64) -> FieldElement {
        FieldElement::from_ints(a, b, self.radicand().unwrap_or(0))
    }

    pub fn height(&self, x: &FieldElement, prec: u32) -> Result<Enclosure> {
        self.check_element(x)?;
        height(x, self.degree(), prec)
    }

    pub fn height_power(&self, x: &FieldElement, prec: u32) -> Result<Enclosure> {
        self.check_element(x)?;
        height_power(x, self.degree(), prec)
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Quadratic { m } => write!(f, "Q(sqrt:{m})"),
            FieldDescriptor::Supplied(s) => {
                let poly: Vec<String> = s.poly.iter().map(|c| c.to_string()).collect();
                write!(
                    f,
                    "custom:{{d:{},disc:{},h:{},R:[{},{}],r:{},poly:[{}]}}",
                    s.degree,
                    s.discriminant,
                    s.class_number,
                    crate::exactnum::decimal_string(s.regulator.lo(), crate::exactnum::Round::Down, 20),
                    crate::exactnum::decimal_string(s.regulator.hi(), crate::exactnum::Round::Up, 20),
                    s.unit_rank,
                    poly.join(",")
                )
            }
        }
    }
}

impl Serialize for FieldDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Image of the integral generator `w` given the image `r` of `sqrt m` mod odd `q`.
fn omega_image(m: i64, r: u64, q: u64) -> u64 {
    if m.rem_euclid(4) == 1 {
        arith::mul_mod((1 + r) % q, arith::inv_mod(2, q), q)
    } else {
        r
    }
}

pub fn quadratic_discriminant(m: i64) -> i64 {
    if m.rem_euclid(4) == 1 {
        m
    } else {
        4 * m
    }
}

/// Class number of `Q(sqrt m)`.
///
/// Imaginary fields count reduced primitive forms. Real fields count cycles
/// of reduced indefinite forms (the narrow class number) and halve it when
/// the fundamental unit has norm +1.
pub fn class_number(m: i64) -> u64 {
    let d = quadratic_discriminant(m);
    if m < 0 {
        reduced_definite_forms(d).len() as u64
    } else {
        let cycles = indefinite_cycles(d).len() as u64;
        if fundamental_unit(m).norm == 1 {
            cycles / 2
        } else {
            cycles
        }
    }
}

fn supplied_totally_split(poly: &[BigInt], q: u64) -> bool {
    let f: Vec<u64> = polymod::trim(poly.iter().map(|c| arith::big_mod(c, q)).collect());
    let d = match polymod::degree(&f) {
        Some(d) if d + 1 == poly.len() => d,
        _ => return false,
    };
    if d == 0 {
        return true;
    }
    let df = polymod::derivative(&f, q);
    if df.is_empty() || polymod::degree(&polymod::gcd(&f, &df, q)) != Some(0) {
        return false;
    }
    let xq = polymod::pow_x_mod(q, &f, q);
    let g = polymod::gcd(&polymod::sub(&xq, &vec![0, 1], q), &f, q);
    polymod::degree(&g) == Some(d)
}

/// Smallest prime `>= from` that splits completely, scanning upward.
pub fn next_split_prime(field: &FieldDescriptor, from: u64) -> Option<u64> {
    arith::primes_from(from).find(|&q| field.totally_split(q).unwrap_or(false))
}
