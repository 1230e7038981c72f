//! Text syntax for fields, curves and rational parameters.
//!
//! Fields: `Q`, `Q(sqrt:-5)`, `custom:{d:4,disc:256,h:1,R:[lo,hi],poly:[1,0,0,0,1]}`
//! with an optional `r:` entry. Curves: `[a1,a2,a3,a4,a6]`, each entry a sum of
//! terms `p/q` and `p/q*s` where `s` is the quadratic generator.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ellcurve::WeierstrassModel;
use crate::error::{Error, Result};
use crate::exactnum::Enclosure;
use crate::numfield::{FieldDescriptor, SuppliedField};
use crate::{FieldElement, DEFAULT_PRECISION};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn strip_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn parse_int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s).map_err(|_| perr(format!("bad integer '{s}'")))
}

/// A rational written as an integer, `p/q` or a decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = strip_ws(s);
    if let Some((p, q)) = s.split_once('/') {
        let q = parse_int(q)?;
        if q.is_zero() {
            return Err(perr(format!("zero denominator in '{s}'")));
        }
        return Ok(BigRational::new(parse_int(p)?, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(perr(format!("bad decimal '{s}'")));
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let ip = if ip.is_empty() { BigInt::zero() } else { parse_int(ip)? };
        let scale = BigInt::from(10).pow(fp.len() as u32);
        let v = BigRational::new(ip * &scale + parse_int(fp)?, scale);
        return Ok(if neg { -v } else { v });
    }
    Ok(BigRational::from_integer(parse_int(&s)?))
}

pub fn parse_field(text: &str) -> Result<FieldDescriptor> {
    let s = strip_ws(text);
    if s == "Q" {
        return Ok(FieldDescriptor::Rational);
    }
    if let Some(inner) = s.strip_prefix("Q(sqrt:").and_then(|r| r.strip_suffix(')')) {
        let m: i64 = inner.parse().map_err(|_| perr(format!("bad radicand '{inner}'")))?;
        return FieldDescriptor::quadratic(m);
    }
    if let Some(body) = s.strip_prefix("custom:{").and_then(|r| r.strip_suffix('}')) {
        return parse_custom(body);
    }
    Err(perr(format!("unrecognised field '{text}'")))
}

/// Top-level `key:value` entries, commas inside brackets kept.
fn entries(body: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut push = |item: &str| -> Result<()> {
        let (k, v) = item.split_once(':').ok_or_else(|| perr(format!("expected key:value, got '{item}'")))?;
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(perr(format!("duplicate key '{k}'")));
        }
        Ok(())
    };
    for (i, c) in body.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                push(&body[start..i])?;
                start = i + 1;
            }
            _ => {}
        }
    }
    if !body[start..].is_empty() {
        push(&body[start..])?;
    }
    Ok(out)
}

fn bracketed(v: &str) -> Result<Vec<&str>> {
    let inner = v.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(|| perr(format!("expected [..], got '{v}'")))?;
    Ok(if inner.is_empty() { vec![] } else { inner.split(',').collect() })
}

fn parse_custom(body: &str) -> Result<FieldDescriptor> {
    let mut e = entries(body)?;
    let mut take = |k: &str| e.remove(k).ok_or_else(|| perr(format!("custom field needs '{k}'")));
    let degree: u32 = take("d")?.parse().map_err(|_| perr("bad degree"))?;
    let discriminant = parse_int(&take("disc")?)?;
    let class_number: u64 = take("h")?.parse().map_err(|_| perr("bad class number"))?;
    let reg = take("R")?;
    let poly = bracketed(&take("poly")?)?.into_iter().map(parse_int).collect::<Result<Vec<_>>>()?;
    let r = e.remove("r");
    if let Some(k) = e.keys().next() {
        return Err(perr(format!("unknown key '{k}'")));
    }
    if degree == 0 || class_number == 0 {
        return Err(Error::InvalidField("degree and class number must be positive".into()));
    }
    if poly.len() != degree as usize + 1 || !poly.last().is_some_and(|c| c.is_one()) {
        return Err(Error::InvalidField(format!("poly must be monic of degree {degree}")));
    }
    if discriminant.is_zero() {
        return Err(Error::InvalidField("zero discriminant".into()));
    }
    let rb = bracketed(&reg)?;
    if rb.len() != 2 {
        return Err(perr("R must be [lo,hi]"));
    }
    let (lo, hi) = (parse_rational(rb[0])?, parse_rational(rb[1])?);
    if lo > hi || hi.is_negative() {
        return Err(Error::InvalidField(format!("bad regulator interval [{lo}, {hi}]")));
    }
    let unit_rank = match r {
        Some(r) => r.parse().map_err(|_| perr("bad unit rank"))?,
        None => infer_unit_rank(degree, &discriminant)?,
    };
    if unit_rank >= degree {
        return Err(Error::InvalidField(format!("unit rank {unit_rank} too large for degree {degree}")));
    }
    Ok(FieldDescriptor::Supplied(Box::new(SuppliedField {
        degree,
        discriminant,
        class_number,
        regulator: Enclosure::from_rational_bounds(&lo, &hi, DEFAULT_PRECISION),
        unit_rank,
        poly,
    })))
}

/// A Galois field is totally real or totally complex; the discriminant sign
/// `(-1)^(r2)` decides unless `d/2` is even.
fn infer_unit_rank(d: u32, disc: &BigInt) -> Result<u32> {
    if d % 2 == 1 {
        return Ok(d - 1);
    }
    let half_odd = (d / 2) % 2 == 1;
    match (disc.is_negative(), half_odd) {
        (true, true) => Ok(d / 2 - 1),
        (false, true) => Ok(d - 1),
        (true, false) => Err(Error::InvalidField(format!("negative discriminant impossible for a Galois field of degree {d}"))),
        (false, false) => Err(Error::InvalidField(format!(
            "signature ambiguous for degree {d} with positive discriminant; give r explicitly"
        ))),
    }
}

/// One coordinate pair from `p/q`, `p/q*s`, `s`, `-s` and sums of those.
pub fn parse_element(text: &str, field: &FieldDescriptor) -> Result<FieldElement> {
    let s = strip_ws(text);
    if s.is_empty() {
        return Err(perr("empty coefficient"));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > 0 && !s[..i].ends_with(['/', '*']) {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for t in terms {
        let t = t.strip_prefix('+').unwrap_or(t);
        if let Some(coef) = t.strip_suffix('s') {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            b += match coef {
                "" => BigRational::one(),
                "-" => -BigRational::one(),
                c => parse_rational(c)?,
            };
        } else {
            a += parse_rational(t)?;
        }
    }
    let m = match field.radicand() {
        Some(m) => m,
        None => return Err(Error::Unsupported("curves over supplied fields".into())),
    };
    if !b.is_zero() && m == 0 {
        return Err(perr(format!("'{text}' uses s over Q")));
    }
    Ok(FieldElement::new(a, b, m))
}

pub fn parse_curve(text: &str, field: &FieldDescriptor) -> Result<WeierstrassModel> {
    let s = strip_ws(text);
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| perr(format!("curve must be [a1,a2,a3,a4,a6], got '{text}'")))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 5 {
        return Err(perr(format!("curve needs 5 coefficients, got {}", parts.len())));
    }
    let c = parts.into_iter().map(|p| parse_element(p, field)).collect::<Result<Vec<_>>>()?;
    let c: [FieldElement; 5] = c.try_into().expect("five coefficients");
    WeierstrassModel::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn fields() {
        assert_eq!(parse_field("Q").unwrap(), FieldDescriptor::Rational);
        assert_eq!(parse_field("Q(sqrt:-5)").unwrap(), FieldDescriptor::quadratic(-5).unwrap());
        assert!(parse_field("Q(sqrt:4)").unwrap_err().to_string().contains("m not squarefree"));
        assert!(parse_field("K").is_err());
    }

    #[test]
    fn custom_round_trip() {
        let f = parse_field("custom:{d:4,disc:256,h:1,R:[0,0],r:1,poly:[1,0,0,0,1]}").unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(parse_field(&f.to_string()).unwrap(), f);
        let inv = f.invariants(64).unwrap();
        assert_eq!(inv.unit_rank, 1);
    }

    #[test]
    fn custom_unit_rank_inference() {
        let f = parse_field("custom:{d:3,disc:49,h:1,R:[0.52,0.53],poly:[1,-2,-1,1]}").unwrap();
        assert_eq!(f.invariants(64).unwrap().unit_rank, 2);
        let f = parse_field("custom:{d:2,disc:-4,h:1,R:[1,1],poly:[1,0,1]}").unwrap();
        assert_eq!(f.invariants(64).unwrap().unit_rank, 0);
        assert!(parse_field("custom:{d:4,disc:256,h:1,R:[0,0],poly:[1,0,0,0,1]}").is_err());
        assert!(parse_field("custom:{d:2,disc:5,h:1,R:[0,1],poly:[1,1]}").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn elements() {
        let f = FieldDescriptor::quadratic(-1).unwrap();
        let x = parse_element("1/2-3/4*s", &f).unwrap();
        assert_eq!((x.a.clone(), x.b.clone()), (rat(1, 2), rat(-3, 4)));
        let x = parse_element("-s", &f).unwrap();
        assert_eq!((x.a.clone(), x.b.clone()), (rat(0, 1), rat(-1, 1)));
        assert!(parse_element("s", &FieldDescriptor::Rational).is_err());
    }

    #[test]
    fn curves() {
        let e = parse_curve("[0,0,0,1,1]", &FieldDescriptor::Rational).unwrap();
        assert_eq!(e, WeierstrassModel::from_ints([0, 0, 0, 1, 1]).unwrap());
        assert!(parse_curve("[0,0,0,0,0]", &FieldDescriptor::Rational).is_err());
        assert!(parse_curve("[0,0,1]", &FieldDescriptor::Rational).is_err());
        let f = FieldDescriptor::quadratic(-5).unwrap();
        let e = parse_curve("[0, 0, 0, 1+s, -1/3]", &f).unwrap();
        assert_eq!(e.a4.b, rat(1, 1));
    }
}
