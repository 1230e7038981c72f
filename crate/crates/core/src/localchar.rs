//! Local data of the isogeny character: the inertia exponent table at places
//! above p, the five reduction cases at split places, and the twisted norm.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::ellcurve::{FrobeniusData, PlaceType, WeierstrassModel};
use crate::error::{Error, Result};
use crate::numfield::{small_generator, DegreeOnePlace, FieldDescriptor, PrimeIdeal};
use crate::FieldElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    Ordinary,
    Supersingular,
}

/// A congruence `p = residue (mod modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub residue: u32,
    pub modulus: u32,
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p = {} mod {}", self.residue, self.modulus)
    }
}

impl Serialize for Congruence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalExponentRow {
    pub e: u32,
    pub r: u32,
    pub a: u32,
    pub p_condition: Option<Congruence>,
    /// `j(E)` is congruent to this value modulo the place above p.
    pub j_condition: Option<u32>,
    pub reduction: Option<Reduction>,
}

/// The admissible `(e, r)` pairs, in table order.
pub const EXPONENT_PAIRS: [(u32, u32); 15] = [
    (1, 0),
    (1, 1),
    (2, 0),
    (2, 2),
    (3, 0),
    (3, 1),
    (3, 2),
    (3, 3),
    (4, 0),
    (4, 2),
    (4, 4),
    (6, 0),
    (6, 2),
    (6, 4),
    (6, 6),
];

pub fn exponent_row(e: u32, r: u32) -> Result<LocalExponentRow> {
    if !EXPONENT_PAIRS.contains(&(e, r)) {
        return Err(Error::InvalidExponentPair { e, r });
    }
    let a = 12 * r / e;
    let (p_condition, j_condition, reduction) = match e {
        3 | 6 => {
            if r % 3 == 0 {
                (Some(Congruence { residue: 1, modulus: 3 }), Some(0), Some(Reduction::Ordinary))
            } else {
                (Some(Congruence { residue: 2, modulus: 3 }), Some(0), Some(Reduction::Supersingular))
            }
        }
        4 => {
            if r % 4 == 0 {
                (Some(Congruence { residue: 1, modulus: 4 }), Some(1728), Some(Reduction::Ordinary))
            } else {
                (Some(Congruence { residue: 3, modulus: 4 }), Some(1728), Some(Reduction::Supersingular))
            }
        }
        _ => (None, None, None),
    };
    Ok(LocalExponentRow { e, r, a, p_condition, j_condition, reduction })
}

pub fn exponent_table() -> Vec<LocalExponentRow> {
    EXPONENT_PAIRS.iter().map(|&(e, r)| exponent_row(e, r).unwrap()).collect()
}

/// Exponents `a_tau` for the Galois group of a field of degree at most 2:
/// `identity` always, `conjugation` when the field is quadratic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ATauFamily {
    pub identity: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugation: Option<u32>,
}

impl ATauFamily {
    pub fn uniform(field: &FieldDescriptor, a: u32) -> Result<Self> {
        match field.degree() {
            1 => Ok(ATauFamily { identity: a, conjugation: None }),
            2 if !matches!(field, FieldDescriptor::Supplied(_)) => {
                Ok(ATauFamily { identity: a, conjugation: Some(a) })
            }
            d => Err(Error::Unsupported(format!("exponent families over a Galois group of order {d}"))),
        }
    }

    pub fn values(&self) -> Vec<u32> {
        std::iter::once(self.identity).chain(self.conjugation).collect()
    }
}

/// `prod_tau tau(alpha)^(a_tau)`.
pub fn twisted_norm(alpha: &FieldElement, fam: &ATauFamily) -> Result<FieldElement> {
    if alpha.is_zero() {
        return Err(Error::Domain("twisted norm of zero".into()));
    }
    let mut out = alpha.pow(fam.identity);
    if let Some(c) = fam.conjugation {
        out = &out * &alpha.conj().pow(c);
    } else if !alpha.is_scalar() {
        return Err(Error::InvalidInput("family has no conjugation exponent for a quadratic element".into()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseName {
    M0,
    M1,
    BS,
    BO,
    BOPrime,
}

impl CaseName {
    pub const ALL: [CaseName; 5] = [CaseName::M0, CaseName::M1, CaseName::BS, CaseName::BO, CaseName::BOPrime];

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseName::M0 => "M0",
            CaseName::M1 => "M1",
            CaseName::BS => "BS",
            CaseName::BO => "BO",
            CaseName::BOPrime => "BO'",
        }
    }

    pub fn place_type(&self) -> PlaceType {
        match self {
            CaseName::M0 | CaseName::M1 => PlaceType::PotentiallyMultiplicative,
            CaseName::BS => PlaceType::GoodSupersingular,
            CaseName::BO | CaseName::BOPrime => PlaceType::GoodOrdinary,
        }
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M0" => Ok(CaseName::M0),
            "M1" => Ok(CaseName::M1),
            "BS" => Ok(CaseName::BS),
            "BO" => Ok(CaseName::BO),
            "BO'" | "BOprime" | "BO-prime" => Ok(CaseName::BOPrime),
            _ => Err(Error::Parse(format!("unknown case {s:?} (expected M0, M1, BS, BO, BO')"))),
        }
    }
}

impl Serialize for CaseName {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseDescriptor {
    pub case: CaseName,
    pub reduction: PlaceType,
    pub family: ATauFamily,
    /// Asserted value of `mu(sigma_q)`, symbolic.
    pub mu_value: String,
    pub lq: String,
    pub constraints: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<FrobeniusData>,
}

pub fn case_row(case: CaseName, field: &FieldDescriptor) -> Result<CaseDescriptor> {
    let (family, mu, lq, constraints): (ATauFamily, &str, &str, Vec<&str>) = match case {
        CaseName::M0 => (ATauFamily::uniform(field, 0)?, "1", "", vec!["N(gamma_q) = 1"]),
        CaseName::M1 => (ATauFamily::uniform(field, 12)?, "q^12", "", vec!["N(gamma_q) = q^(12 h_K)"]),
        CaseName::BS => (
            ATauFamily::uniform(field, 6)?,
            "beta^12 mod P",
            "Q(sqrt -q)",
            vec!["beta_q^6 = -q^3", "p = 3 mod 4", "N(gamma_q) = beta_q^(12 h_K)"],
        ),
        CaseName::BO | CaseName::BOPrime => {
            if !field.is_imaginary_quadratic() {
                return Err(Error::IncompatibleCase {
                    case: case.to_string(),
                    reason: format!("{field} has no imaginary quadratic subfield to contain L^q"),
                });
            }
            if case == CaseName::BO {
                (
                    ATauFamily { identity: 12, conjugation: Some(0) },
                    "beta^12 mod P",
                    "imaginary quadratic, contained in K, p split in L^q",
                    vec![
                        "N_{K/L^q}(q) = beta_q O_L",
                        "a_tau = 12 exactly on the subgroup Gal(K/L^q)",
                        "N(gamma_q) = beta_q^(12 h_K)",
                    ],
                )
            } else {
                (
                    ATauFamily { identity: 0, conjugation: Some(12) },
                    "beta^12 mod P",
                    "imaginary quadratic, contained in K, p split in L^q",
                    vec![
                        "N_{K/L^q}(q) = conj(beta_q) O_L",
                        "a_tau = 12 exactly off the subgroup Gal(K/L^q)",
                        "N(gamma_q) = beta_q^(12 h_K)",
                    ],
                )
            }
        }
    };
    Ok(CaseDescriptor {
        case,
        reduction: case.place_type(),
        family,
        mu_value: mu.to_string(),
        lq: lq.to_string(),
        constraints: constraints.into_iter().map(String::from).collect(),
        frobenius: None,
    })
}

/// Cases compatible with a reduction type, with diagnostics for empty answers.
pub fn candidate_cases(
    field: &FieldDescriptor,
    t: PlaceType,
    fd: Option<&FrobeniusData>,
) -> Result<(Vec<CaseDescriptor>, Vec<String>)> {
    if t.is_good() != fd.is_some() {
        return Err(Error::InvalidInput("Frobenius data must be given exactly for good reduction types".into()));
    }
    let mut diagnostics = Vec::new();
    let cases = match t {
        PlaceType::PotentiallyMultiplicative => vec![case_row(CaseName::M0, field)?, case_row(CaseName::M1, field)?],
        PlaceType::GoodSupersingular => {
            let fd = fd.unwrap();
            let mut row = case_row(CaseName::BS, field)?;
            let q3 = BigInt::from(fd.q).pow(3);
            row.constraints[0] = format!("beta_q^6 = -q^3 = -{q3}");
            row.frobenius = Some(fd.clone());
            vec![row]
        }
        PlaceType::GoodOrdinary => {
            let fd = fd.unwrap();
            if !field.is_imaginary_quadratic() {
                diagnostics.push(format!(
                    "good ordinary reduction at q = {} needs L^q = {} inside K = {field}; no case applies",
                    fd.q, fd.lq
                ));
                Vec::new()
            } else if &fd.lq != field {
                diagnostics.push(format!("L^q = {} is not contained in K = {field}; no case applies", fd.lq));
                Vec::new()
            } else {
                [CaseName::BO, CaseName::BOPrime]
                    .into_iter()
                    .map(|c| {
                        case_row(c, field).map(|mut row| {
                            row.frobenius = Some(fd.clone());
                            row
                        })
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        }
    };
    Ok((cases, diagnostics))
}

/// Roots `beta` of `X^2 - T X + q` expressed in `K`, when they lie there.
fn frobenius_roots_in(field: &FieldDescriptor, fd: &FrobeniusData) -> Option<[FieldElement; 2]> {
    let m = field.radicand()?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let t = BigRational::from_integer(BigInt::from(fd.trace)) * &half;
    if fd.disc == 0 {
        let b = FieldElement::from_rational(t, m);
        return Some([b.clone(), b]);
    }
    if m == 0 || field.is_real_quadratic() {
        return None;
    }
    // disc = f^2 * m' ; roots lie in K iff m' = m
    let dm = fd.disc / m;
    if fd.disc % m != 0 || dm < 0 {
        return None;
    }
    let f = num_integer::Roots::sqrt(&dm);
    if f * f != dm {
        return None;
    }
    let b = BigRational::from_integer(BigInt::from(f)) * &half;
    Some([FieldElement::new(t.clone(), b.clone(), m), FieldElement::new(t, -b, m)])
}

/// `beta^n` for a root of `X^2 - T X + q` in `L^q`, returned as `(a, b)` with
/// `beta^n = a + b * sqrt(disc)`; both conjugates give `(a, +-b)`.
fn frobenius_root_power(fd: &FrobeniusData, n: u32) -> (BigRational, BigRational) {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let x = crate::QuadElement::new(
        BigRational::from_integer(BigInt::from(fd.trace)) * &half,
        if fd.disc == 0 { BigRational::zero() } else { half },
        fd.disc,
    );
    let p = x.pow(n);
    (p.a, p.b)
}

/// Checks the identity `N(gamma_q) = target` of the given case at a place
/// above a split prime `q >= 5`, where `gamma_q` generates `q^(h_K)` with
/// small height. Cases whose reduction type differs from the place's type
/// return `false`.
pub fn verify_case_identity(
    curve: &WeierstrassModel,
    field: &FieldDescriptor,
    place: &DegreeOnePlace,
    case: &CaseDescriptor,
    prec: u32,
) -> Result<bool> {
    if matches!(field, FieldDescriptor::Supplied(_)) {
        return Err(Error::Unsupported("case identities over supplied fields".into()));
    }
    let t = curve.classify_place(field, place)?;
    if t != case.case.place_type() {
        return Ok(false);
    }
    let h = field.class_number();
    let gamma = small_generator(field, &PrimeIdeal::from_place(place), h, prec)?;
    let value = twisted_norm(&gamma, &case.family)?;
    let m = field.radicand().unwrap_or(0);
    let h32 = u32::try_from(h).map_err(|_| Error::Overflow("class number".into()))?;
    match case.case {
        CaseName::M0 => Ok(value.is_one()),
        CaseName::M1 => {
            let target = BigRational::from_integer(BigInt::from(place.q).pow(12 * h32));
            Ok(value == FieldElement::from_rational(target, m))
        }
        CaseName::BS | CaseName::BO | CaseName::BOPrime => {
            let fd = curve.trace_of_frobenius(field, place)?;
            if case.case == CaseName::BS && fd.lq != (FieldDescriptor::Quadratic { m: -(place.q as i64) }) {
                return Ok(false);
            }
            if let Some(roots) = frobenius_roots_in(field, &fd) {
                return Ok(roots.iter().any(|b| b.pow(12 * h32) == value));
            }
            // L^q is not inside K: both sides must be the same rational number
            let (a, b) = frobenius_root_power(&fd, 12 * h32);
            Ok(b.is_zero() && value.is_scalar() && value.a == a)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_rows() {
        let r = exponent_row(4, 2).unwrap();
        assert_eq!(r.a, 6);
        assert_eq!(r.p_condition, Some(Congruence { residue: 3, modulus: 4 }));
        assert_eq!(r.j_condition, Some(1728));
        assert_eq!(r.reduction, Some(Reduction::Supersingular));
        let r = exponent_row(1, 0).unwrap();
        assert_eq!((r.a, r.p_condition, r.j_condition, r.reduction), (0, None, None, None));
        let r = exponent_row(3, 1).unwrap();
        assert_eq!(r.a, 4);
        assert_eq!(r.p_condition, Some(Congruence { residue: 2, modulus: 3 }));
        assert_eq!(r.j_condition, Some(0));
        for bad in [(4, 1), (4, 3), (6, 1), (5, 0), (2, 1)] {
            assert!(matches!(exponent_row(bad.0, bad.1), Err(Error::InvalidExponentPair { .. })));
        }
    }

    #[test]
    fn twisted_norms_in_gaussian_field() {
        let a = FieldElement::from_ints(1, 1, -1);
        let gi = FieldDescriptor::quadratic(-1).unwrap();
        let six = ATauFamily::uniform(&gi, 6).unwrap();
        assert_eq!(twisted_norm(&a, &six).unwrap(), FieldElement::from_ints(64, 0, -1));
        let bo = ATauFamily { identity: 12, conjugation: Some(0) };
        assert_eq!(twisted_norm(&a, &bo).unwrap(), FieldElement::from_ints(-64, 0, -1));
        let zero = ATauFamily::uniform(&gi, 0).unwrap();
        assert!(twisted_norm(&a, &zero).unwrap().is_one());
    }

    #[test]
    fn case_rows() {
        let q = FieldDescriptor::Rational;
        assert_eq!(case_row(CaseName::M1, &q).unwrap().family.values(), vec![12]);
        assert_eq!(case_row(CaseName::BS, &q).unwrap().constraints[0], "beta_q^6 = -q^3");
        assert!(matches!(case_row(CaseName::BO, &q), Err(Error::IncompatibleCase { .. })));
        let gi = FieldDescriptor::quadratic(-1).unwrap();
        assert_eq!(case_row(CaseName::BOPrime, &gi).unwrap().family.values(), vec![0, 12]);
        assert_eq!("BO'".parse::<CaseName>().unwrap(), CaseName::BOPrime);
    }

    #[test]
    fn candidates_by_type() {
        let q = FieldDescriptor::Rational;
        let (c, _) = candidate_cases(&q, PlaceType::PotentiallyMultiplicative, None).unwrap();
        assert_eq!(c.iter().map(|d| d.case).collect::<Vec<_>>(), vec![CaseName::M0, CaseName::M1]);
        let fd = FrobeniusData::new(5, 0).unwrap();
        let (c, _) = candidate_cases(&q, PlaceType::GoodSupersingular, Some(&fd)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].constraints[0], "beta_q^6 = -q^3 = -125");
        let fd = FrobeniusData::new(5, 2).unwrap();
        let (c, diag) = candidate_cases(&q, PlaceType::GoodOrdinary, Some(&fd)).unwrap();
        assert!(c.is_empty());
        assert_eq!(diag.len(), 1);
        assert!(candidate_cases(&q, PlaceType::GoodOrdinary, None).is_err());
    }

    #[test]
    fn supersingular_identity_over_q() {
        let q = FieldDescriptor::Rational;
        let e = WeierstrassModel::from_ints([0, 0, 0, 0, 1]).unwrap();
        let p5 = q.place(5, None).unwrap();
        let bs = case_row(CaseName::BS, &q).unwrap();
        assert!(verify_case_identity(&e, &q, &p5, &bs, 64).unwrap());
        for c in [CaseName::M0, CaseName::M1] {
            assert!(!verify_case_identity(&e, &q, &p5, &case_row(c, &q).unwrap(), 64).unwrap());
        }
    }

    #[test]
    fn ordinary_identity_over_gaussian_field() {
        // y^2 = x^3 - x has CM by Z[i]; ordinary at split primes
        let gi = FieldDescriptor::quadratic(-1).unwrap();
        let e = WeierstrassModel::short(FieldElement::from_ints(-1, 0, -1), FieldElement::zero(-1)).unwrap();
        for place in gi.degree_one_places(13).unwrap() {
            assert_eq!(e.classify_place(&gi, &place).unwrap(), PlaceType::GoodOrdinary);
            let fd = e.trace_of_frobenius(&gi, &place).unwrap();
            assert_eq!(fd.lq, gi);
            for c in [CaseName::BO, CaseName::BOPrime] {
                assert!(verify_case_identity(&e, &gi, &place, &case_row(c, &gi).unwrap(), 64).unwrap());
            }
            assert!(!verify_case_identity(&e, &gi, &place, &case_row(CaseName::BS, &gi).unwrap(), 64).unwrap());
        }
    }
}
