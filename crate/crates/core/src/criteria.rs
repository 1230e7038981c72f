//! Witness search over small split places, irreducibility certificates, and
//! the split-ideal set with its class-coverage check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith;
use crate::bounds::{b_of_q, c_of_n, jk_bound};
use crate::ellcurve::{PlaceType, WeierstrassModel};
use crate::error::{Error, Result};
use crate::numfield::{reduced_definite_forms, Form};
use crate::numfield::{ideal_class_of, ser_bigint, DegreeOnePlace, FieldDescriptor};

pub const SCHEMA_VERSION: u32 = 1;

pub const CLAIM: &str = "φ_{E,p} irreducible for all primes p > bound with p ≥ 5 and p unramified in K";

/// Split primes up to this norm are listed explicitly in a [`JkSet`]; the
/// rest is enumerated on demand.
pub const JK_LIST_LIMIT: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Criterion {
    #[serde(rename = "TheoremI-1")]
    PairOfTypes,
    #[serde(rename = "TheoremI-2")]
    Multiplicative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub place: DegreeOnePlace,
    pub label: String,
    pub place_type: PlaceType,
}

impl Witness {
    fn new(place: &DegreeOnePlace, t: PlaceType) -> Self {
        Witness { place: place.clone(), label: place.label(), place_type: t }
    }
}

/// Outcome of classifying one place; `error` is set when the type is unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub place: DegreeOnePlace,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub place_type: Option<PlaceType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrreducibilityCertificate {
    pub schema_version: u32,
    pub field: FieldDescriptor,
    pub curve: WeierstrassModel,
    pub criterion: Criterion,
    pub witnesses: Vec<Witness>,
    #[serde(serialize_with = "ser_bigint")]
    pub bound: BigInt,
    /// `C(K, M)` for the pair criterion, echoed next to the sharpened bound.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_bigint")]
    pub family_bound: Option<BigInt>,
    pub max_prime: u64,
    pub precision_bits: u32,
    pub claim: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome")]
pub enum CertifyOutcome {
    #[serde(rename = "certificate")]
    Certificate(IrreducibilityCertificate),
    #[serde(rename = "NoCriterion")]
    NoCriterion { schema_version: u32, max_prime: u64, classifications: Vec<Classification> },
}

impl CertifyOutcome {
    pub fn certificate(&self) -> Option<&IrreducibilityCertificate> {
        match self {
            CertifyOutcome::Certificate(c) => Some(c),
            CertifyOutcome::NoCriterion { .. } => None,
        }
    }
}

fn ser_opt_bigint<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => s.serialize_str(&n.to_string()),
        None => s.serialize_none(),
    }
}

/// Result of classifying every degree-one place above the split primes in `[5, M]`.
#[derive(Clone, Debug, Default)]
pub struct Scan {
    pub classifications: Vec<Classification>,
    pub diagnostics: Vec<String>,
}

impl Scan {
    fn typed(&self) -> impl Iterator<Item = (&DegreeOnePlace, PlaceType)> {
        self.classifications.iter().filter_map(|c| c.place_type.map(|t| (&c.place, t)))
    }

    /// First place paired with the first later place of a different type.
    pub fn first_pair(&self) -> Option<(Witness, Witness)> {
        let mut it = self.typed();
        let (p0, t0) = it.next()?;
        it.find(|&(_, t)| t != t0).map(|(p1, t1)| (Witness::new(p0, t0), Witness::new(p1, t1)))
    }

    pub fn first_multiplicative(&self) -> Option<Witness> {
        self.typed()
            .find(|&(_, t)| t == PlaceType::PotentiallyMultiplicative)
            .map(|(p, t)| Witness::new(p, t))
    }
}

/// Classify the places above split primes `5 <= q <= m`, in ascending order.
/// `jobs > 1` classifies concurrently; the output order is unaffected.
pub fn scan_places(curve: &WeierstrassModel, field: &FieldDescriptor, m: u64, jobs: usize) -> Result<Scan> {
    if m < 5 {
        return Err(Error::InvalidInput(format!("max prime must be at least 5, got {m}")));
    }
    let mut places = Vec::new();
    for q in field.split_primes_up_to(m).into_iter().filter(|&q| q >= 5) {
        places.extend(field.degree_one_places(q)?);
    }
    let classify = |p: &DegreeOnePlace| (p.clone(), curve.classify_place(field, p));
    let results: Vec<(DegreeOnePlace, Result<PlaceType>)> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        pool.install(|| places.par_iter().map(classify).collect())
    } else {
        places.iter().map(classify).collect()
    };
    let mut scan = Scan::default();
    for (place, r) in results {
        let label = place.label();
        match r {
            Ok(t) => scan.classifications.push(Classification { place, label, place_type: Some(t), error: None }),
            Err(e) => {
                let msg = format!("skipped place {label}: {e}");
                log::warn!("{msg}");
                scan.diagnostics.push(msg);
                scan.classifications.push(Classification { place, label, place_type: None, error: Some(e.to_string()) });
            }
        }
    }
    Ok(scan)
}

/// First pair of places of differing type above split primes in `[5, m]`.
pub fn family_e_membership(
    curve: &WeierstrassModel,
    field: &FieldDescriptor,
    m: u64,
) -> Result<(Option<(Witness, Witness)>, Vec<String>)> {
    let scan = scan_places(curve, field, m, 1)?;
    Ok((scan.first_pair(), scan.diagnostics))
}

/// Whether `j` has negative valuation at some place above the split prime `q`.
pub fn family_eprime_membership(curve: &WeierstrassModel, field: &FieldDescriptor, q: u64) -> Result<bool> {
    if q < 5 {
        return Err(Error::InvalidInput(format!("q must be at least 5, got {q}")));
    }
    if !field.totally_split(q)? {
        return Err(Error::NotSplit { q });
    }
    let j = curve.j_invariant();
    if j.is_zero() {
        return Ok(false);
    }
    for p in field.degree_one_places(q)? {
        if field.valuation_at(&j, &p)? < 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub precision: u32,
    pub jobs: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { precision: crate::DEFAULT_PRECISION, jobs: 1 }
    }
}

/// Certificate from the scan up to `m`: a pair of differing types first,
/// then the smallest multiplicative place, otherwise no criterion applies.
pub fn certify(
    curve: &WeierstrassModel,
    field: &FieldDescriptor,
    m: u64,
    opts: CertifyOptions,
) -> Result<(CertifyOutcome, Vec<String>)> {
    let scan = scan_places(curve, field, m, opts.jobs)?;
    let base = |criterion, witnesses, bound, family_bound, precision_bits| IrreducibilityCertificate {
        schema_version: SCHEMA_VERSION,
        field: field.clone(),
        curve: curve.clone(),
        criterion,
        witnesses,
        bound,
        family_bound,
        max_prime: m,
        precision_bits,
        claim: CLAIM.to_string(),
    };
    let outcome = if let Some((w1, w2)) = scan.first_pair() {
        let top = w1.place.norm().max(w2.place.norm());
        let (bound, p1) = c_of_n(field, &BigInt::from(top), opts.precision)?;
        let (family, p2) = c_of_n(field, &BigInt::from(m), opts.precision)?;
        CertifyOutcome::Certificate(base(Criterion::PairOfTypes, vec![w1, w2], bound, Some(family), p1.max(p2)))
    } else if let Some(w) = scan.first_multiplicative() {
        let (bound, p) = b_of_q(field, w.place.norm(), opts.precision)?;
        CertifyOutcome::Certificate(base(Criterion::Multiplicative, vec![w], bound, None, p))
    } else {
        CertifyOutcome::NoCriterion {
            schema_version: SCHEMA_VERSION,
            max_prime: m,
            classifications: scan.classifications,
        }
    };
    Ok((outcome, scan.diagnostics))
}

/// Degree-one places above split primes of norm at most `2 |disc|^(A h)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JkSet {
    pub field: FieldDescriptor,
    #[serde(rename = "A", serialize_with = "ser_rational")]
    pub a: BigRational,
    #[serde(serialize_with = "ser_bigint")]
    pub bound: BigInt,
    /// Places with norm up to `min(bound, listed_up_to)`.
    pub places: Vec<DegreeOnePlace>,
    pub listed_up_to: u64,
    /// Whether `places` is the whole set.
    pub complete: bool,
}

fn ser_rational<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl JkSet {
    /// A set holding exactly the given places (for truncated experiments).
    pub fn from_places(field: &FieldDescriptor, a: BigRational, bound: BigInt, places: Vec<DegreeOnePlace>) -> Self {
        let listed_up_to = places.iter().map(|p| p.q).max().unwrap_or(0);
        JkSet { field: field.clone(), a, bound, places, listed_up_to, complete: true }
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.places.iter().map(|p| p.q).collect();
        v.dedup();
        v
    }

    /// Every member in ascending order, continuing past the listed places
    /// when the set is incomplete.
    pub fn iter(&self) -> Box<dyn Iterator<Item = DegreeOnePlace> + '_> {
        let listed = self.places.iter().cloned();
        if self.complete {
            return Box::new(listed);
        }
        let cap = self.bound.to_u64().unwrap_or(u64::MAX);
        let field = &self.field;
        let tail = arith::primes_from(self.listed_up_to + 1)
            .take_while(move |&q| q <= cap)
            .filter(move |&q| field.totally_split(q).unwrap_or(false))
            .flat_map(move |q| field.degree_one_places(q).unwrap_or_default());
        Box::new(listed.chain(tail))
    }
}

pub fn jk_set(field: &FieldDescriptor, a: &BigRational) -> Result<JkSet> {
    let inv = field.invariants(crate::DEFAULT_PRECISION)?;
    let bound = jk_bound(&inv, a)?;
    let limit = bound.to_u64().map_or(JK_LIST_LIMIT, |b| b.min(JK_LIST_LIMIT));
    let mut places = Vec::new();
    for q in field.split_primes_up_to(limit) {
        places.extend(field.degree_one_places(q)?);
    }
    let complete = bound <= BigInt::from(JK_LIST_LIMIT);
    Ok(JkSet { field: field.clone(), a: a.clone(), bound, places, listed_up_to: limit, complete })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub covered: bool,
    pub class_number: u64,
    /// Reduced form of each class reached, with the first member of the set in it.
    pub witnesses: BTreeMap<String, String>,
}

/// Whether the members of `set` meet every ideal class of an imaginary
/// quadratic field. Enumeration stops once all classes are reached.
pub fn check_class_coverage(field: &FieldDescriptor, set: &JkSet) -> Result<Coverage> {
    if !field.is_imaginary_quadratic() {
        return Err(Error::Unsupported("class coverage needs an imaginary quadratic field".into()));
    }
    let disc = field.discriminant().to_i64().ok_or_else(|| Error::Overflow("discriminant".into()))?;
    let classes: Vec<Form> = reduced_definite_forms(disc);
    let h = classes.len() as u64;
    let mut seen: BTreeMap<Form, DegreeOnePlace> = BTreeMap::new();
    for p in set.iter() {
        if seen.len() as u64 == h {
            break;
        }
        let f = ideal_class_of(field, &p)?;
        seen.entry(f).or_insert(p);
    }
    Ok(Coverage {
        covered: seen.len() as u64 == h,
        class_number: h,
        witnesses: seen.into_iter().map(|(f, p)| (f.to_string(), p.label())).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn curve(c: [i64; 5]) -> WeierstrassModel {
        WeierstrassModel::from_ints(c).unwrap()
    }

    fn quad(m: i64) -> FieldDescriptor {
        FieldDescriptor::quadratic(m).unwrap()
    }

    fn c_q(n: u64) -> BigInt {
        let n = BigInt::from(n);
        (n.pow(12) + n.pow(6)).pow(2)
    }

    #[test]
    fn pair_for_x3_x_1() {
        let (w, _) = family_e_membership(&curve([0, 0, 0, 1, 1]), &FieldDescriptor::Rational, 31).unwrap();
        let (a, b) = w.unwrap();
        assert_eq!((a.place.q, a.place_type), (5, PlaceType::GoodOrdinary));
        // a_17 = 0: supersingular at 17 before the multiplicative place at 31
        assert_eq!((b.place.q, b.place_type), (17, PlaceType::GoodSupersingular));
        let s = scan_places(&curve([0, 0, 0, 1, 1]), &FieldDescriptor::Rational, 31, 1).unwrap();
        assert_eq!(s.first_multiplicative().unwrap().place.q, 31);
    }

    #[test]
    fn pair_for_x3_x() {
        let e = curve([0, 0, 0, 1, 0]);
        let (w, _) = family_e_membership(&e, &FieldDescriptor::Rational, 7).unwrap();
        let (a, b) = w.unwrap();
        assert_eq!((a.place.q, a.place_type), (5, PlaceType::GoodOrdinary));
        assert_eq!((b.place.q, b.place_type), (7, PlaceType::GoodSupersingular));
        assert!(family_e_membership(&e, &FieldDescriptor::Rational, 5).unwrap().0.is_none());
    }

    #[test]
    fn eprime() {
        let e = curve([0, 0, 0, 1, 1]);
        assert!(family_eprime_membership(&e, &FieldDescriptor::Rational, 31).unwrap());
        assert!(!family_eprime_membership(&e, &FieldDescriptor::Rational, 5).unwrap());
        assert!(!family_eprime_membership(&curve([0, 0, 0, 0, 1]), &FieldDescriptor::Rational, 7).unwrap());
        assert!(family_eprime_membership(&e, &FieldDescriptor::Rational, 3).is_err());
        assert!(family_eprime_membership(&e, &quad(-1), 7).is_err());
    }

    #[test]
    fn certificates_over_q() {
        let q = FieldDescriptor::Rational;
        let (o, _) = certify(&curve([0, 0, 0, 1, 1]), &q, 31, CertifyOptions::default()).unwrap();
        let c = o.certificate().unwrap();
        assert_eq!(c.criterion, Criterion::PairOfTypes);
        assert_eq!(c.bound, c_q(17));
        assert_eq!(c.family_bound, Some(c_q(31)));

        let (o, _) = certify(&curve([0, 0, 0, 1, 0]), &q, 7, CertifyOptions::default()).unwrap();
        assert_eq!(o.certificate().unwrap().bound, c_q(7));

        let (o, _) = certify(&curve([0, 0, 0, 1, 0]), &q, 5, CertifyOptions::default()).unwrap();
        assert!(matches!(o, CertifyOutcome::NoCriterion { ref classifications, .. } if classifications.len() == 1));
    }

    #[test]
    fn sharpened_bound_below_family_bound() {
        let (o, _) = certify(&curve([0, 0, 0, 1, 1]), &FieldDescriptor::Rational, 43, CertifyOptions::default()).unwrap();
        let c = o.certificate().unwrap();
        assert_eq!(c.bound, c_q(17));
        assert_eq!(c.family_bound, Some(c_q(43)));
    }

    #[test]
    fn multiplicative_fallback() {
        // 11a1 is multiplicative at 11 and ordinary or supersingular elsewhere;
        // scanning only 11 leaves a single typed place.
        let e = curve([0, -1, 1, -10, -20]);
        let s = scan_places(&e, &FieldDescriptor::Rational, 11, 1).unwrap();
        let m = s.first_multiplicative().unwrap();
        assert_eq!(m.place.q, 11);
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        let e = curve([0, 0, 0, -1, 1]);
        let f = quad(-5);
        let a = scan_places(&e, &f, 200, 1).unwrap();
        let b = scan_places(&e, &f, 200, 4).unwrap();
        assert_eq!(a.classifications, b.classifications);
        assert_eq!(a.first_pair(), b.first_pair());
    }

    #[test]
    fn jk_sets() {
        let one = BigRational::one();
        let s = jk_set(&quad(-1), &one).unwrap();
        assert_eq!(s.bound, BigInt::from(8));
        assert_eq!(s.primes(), vec![5]);
        assert!(check_class_coverage(&quad(-1), &s).unwrap().covered);

        let s = jk_set(&FieldDescriptor::Rational, &one).unwrap();
        assert_eq!(s.primes(), vec![2]);
        assert!(check_class_coverage(&FieldDescriptor::Rational, &s).is_err());

        let f = quad(-5);
        let s = jk_set(&f, &one).unwrap();
        assert_eq!(s.bound, BigInt::from(800));
        assert!(s.primes().iter().all(|&q| arith::kronecker(&BigInt::from(-20), q) == 1));
        let cov = check_class_coverage(&f, &s).unwrap();
        assert!(cov.covered);
        assert_eq!(cov.witnesses.len(), 2);
        assert_eq!(cov.witnesses["(2,2,3)"], "(3, s=1)");
    }

    #[test]
    fn truncated_set_misses_principal_class() {
        let f = quad(-5);
        let s = JkSet::from_places(&f, BigRational::one(), BigInt::from(800), f.degree_one_places(3).unwrap());
        assert!(!check_class_coverage(&f, &s).unwrap().covered);
        let s = JkSet::from_places(&f, BigRational::one(), BigInt::from(800), f.degree_one_places(29).unwrap());
        assert_eq!(check_class_coverage(&f, &s).unwrap().witnesses.keys().collect::<Vec<_>>(), vec!["(1,0,5)"]);
    }
}
