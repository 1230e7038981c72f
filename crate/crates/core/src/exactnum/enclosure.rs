use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Working precision used when none is specified.
pub const DEFAULT_PRECISION: u32 = 128;

/// Extra bits carried inside ln/exp so the final outward rounding dominates.
const GUARD_BITS: u32 = 32;

/// Closed interval `[lo, hi]` with dyadic endpoints.
///
/// Every operation rounds `lo` down and `hi` up to `prec` significant bits, so
/// the result always contains the exact value of the operation applied to any
/// point of the operands.
#[derive(Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Enclosure {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "enclosure endpoints out of order: {lo:?} > {hi:?}");
        Enclosure { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up), prec }
    }

    pub fn point(d: Dyadic, prec: u32) -> Self {
        Enclosure::new(d.clone(), d, prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        Enclosure::point(Dyadic::from_int(n), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Enclosure::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Enclosure::point(Dyadic::one(), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Enclosure {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
            prec,
        }
    }

    /// Hull of two rationals, in either order.
    pub fn from_rational_bounds(a: &BigRational, b: &BigRational, prec: u32) -> Self {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Enclosure {
            lo: Dyadic::from_rational(lo, prec, Round::Down),
            hi: Dyadic::from_rational(hi, prec, Round::Up),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Enclosure::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.cmp_rational(q).is_le() && self.hi.cmp_rational(q).is_ge()
    }

    pub fn contains_dyadic(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    /// True when `other` lies inside `self`.
    pub fn contains(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Certified `self <= other` for every pair of points.
    pub fn certainly_le(&self, other: &Enclosure) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_lt(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = Dyadic::max(&self.lo, &other.lo);
        let hi = Dyadic::min(&self.hi, &other.hi);
        (lo <= hi).then(|| Enclosure { lo, hi, prec: self.prec.max(other.prec) })
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: Dyadic::min(&self.lo, &other.lo),
            hi: Dyadic::max(&self.hi, &other.hi),
            prec: self.prec.max(other.prec),
        }
    }

    fn join_prec(&self, other: &Enclosure) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(self.lo.add(&other.lo), self.hi.add(&other.hi), self.join_prec(other))
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let prods = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = prods.iter().min().unwrap().clone();
        let hi = prods.iter().max().unwrap().clone();
        Enclosure::new(lo, hi, self.join_prec(other))
    }

    pub fn mul_int(&self, n: impl Into<BigInt>) -> Enclosure {
        self.mul(&Enclosure::from_int(n, self.prec))
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Enclosure {
        Enclosure { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k), prec: self.prec }
    }

    pub fn recip(&self) -> Result<Enclosure> {
        if !(self.lo.is_positive() || self.hi.is_negative()) {
            return Err(Error::Domain("reciprocal of an enclosure containing zero".into()));
        }
        let one = Dyadic::one();
        let p = self.prec;
        Ok(Enclosure { lo: one.div(&self.hi, p, Round::Down), hi: one.div(&self.lo, p, Round::Up), prec: p })
    }

    pub fn div(&self, other: &Enclosure) -> Result<Enclosure> {
        if !(other.lo.is_positive() || other.hi.is_negative()) {
            return Err(Error::Domain("division by an enclosure containing zero".into()));
        }
        let p = self.join_prec(other);
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let d = a.div(b, p, Round::Down);
                let u = a.div(b, p, Round::Up);
                lo = Some(match lo { Some(x) if x <= d => x, _ => d });
                hi = Some(match hi { Some(x) if x >= u => x, _ => u });
            }
        }
        Ok(Enclosure { lo: lo.unwrap(), hi: hi.unwrap(), prec: p })
    }

    pub fn div_int(&self, n: impl Into<BigInt>) -> Result<Enclosure> {
        self.div(&Enclosure::from_int(n, self.prec))
    }

    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Enclosure { lo: Dyadic::zero(), hi: Dyadic::max(&self.lo.abs(), &self.hi), prec: self.prec }
        }
    }

    pub fn max(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: Dyadic::max(&self.lo, &other.lo),
            hi: Dyadic::max(&self.hi, &other.hi),
            prec: self.join_prec(other),
        }
    }

    pub fn min(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: Dyadic::min(&self.lo, &other.lo),
            hi: Dyadic::min(&self.hi, &other.hi),
            prec: self.join_prec(other),
        }
    }

    pub fn square(&self) -> Enclosure {
        let a = self.abs();
        Enclosure::new(a.lo.mul(&a.lo), a.hi.mul(&a.hi), self.prec)
    }

    /// Integer power by repeated squaring.
    pub fn powu(&self, n: u64) -> Enclosure {
        if n == 0 {
            return Enclosure::one(self.prec);
        }
        // Odd powers are monotone; even powers go through |x|.
        let base = if n % 2 == 0 { self.abs() } else { self.clone() };
        let mut result = Enclosure::one(self.prec);
        let mut b = base;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        result
    }

    pub fn powi(&self, n: i64) -> Result<Enclosure> {
        if n >= 0 {
            Ok(self.powu(n as u64))
        } else {
            self.powu(n.unsigned_abs()).recip()
        }
    }

    pub fn sqrt(&self) -> Result<Enclosure> {
        if self.lo.is_negative() {
            return Err(Error::Domain("sqrt of a negative enclosure".into()));
        }
        Ok(Enclosure {
            lo: sqrt_dyadic(&self.lo, self.prec, Round::Down),
            hi: sqrt_dyadic(&self.hi, self.prec, Round::Up),
            prec: self.prec,
        })
    }

    /// Natural logarithm; requires `lo > 0`.
    pub fn ln(&self) -> Result<Enclosure> {
        if !self.lo.is_positive() {
            return Err(Error::Domain("ln of a nonpositive enclosure".into()));
        }
        let lo = ln_point(&self.lo, self.prec).lo;
        let hi = ln_point(&self.hi, self.prec).hi;
        Ok(Enclosure::new(lo, hi, self.prec))
    }

    /// Exponential. Fails only if the result exponent would not fit in an `i64`.
    pub fn exp(&self) -> Result<Enclosure> {
        let lo = exp_point(&self.lo, self.prec)?.lo;
        let hi = exp_point(&self.hi, self.prec)?.hi;
        Ok(Enclosure::new(lo, hi, self.prec))
    }

    pub fn to_f64(&self) -> f64 {
        let l = self.lo.to_f64();
        let h = self.hi.to_f64();
        l + (h - l) / 2.0
    }

    /// Smallest integer that is at least `hi`.
    pub fn ceil_upper(&self) -> BigInt {
        self.hi.ceil()
    }

    pub fn floor_lower(&self) -> BigInt {
        self.lo.floor()
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]@{}", self.lo.to_f64(), self.hi.to_f64(), self.prec)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", decimal_string(&self.lo, Round::Down, 20), decimal_string(&self.hi, Round::Up, 20))
    }
}

impl Serialize for Enclosure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Enclosure", 3)?;
        st.serialize_field("lo", &decimal_string(&self.lo, Round::Down, 30))?;
        st.serialize_field("hi", &decimal_string(&self.hi, Round::Up, 30))?;
        st.serialize_field("precision_bits", &self.prec)?;
        st.end()
    }
}

/// Decimal rendering of a dyadic with `digits` fractional digits, rounded in
/// direction `dir` so that printed bounds stay outward.
pub fn decimal_string(d: &Dyadic, dir: Round, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = d.to_rational() * BigRational::from_integer(scale.clone());
    let n = match dir {
        Round::Down => scaled.floor().to_integer(),
        Round::Up => scaled.ceil().to_integer(),
    };
    let neg = n.is_negative();
    let mag = n.abs();
    let int_part = &mag / &scale;
    let frac_part = &mag % &scale;
    let mut frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    while frac.ends_with('0') {
        frac.pop();
    }
    let sign = if neg { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

fn sqrt_dyadic(d: &Dyadic, prec: u32, dir: Round) -> Dyadic {
    if d.is_zero() {
        return Dyadic::zero();
    }
    // d = m * 2^e with e even and m carrying about 2*prec bits.
    let target = 2 * (prec as i64 + 2);
    let mut e = d.exponent();
    let mut m = d.mantissa().clone();
    let bits = m.bits() as i64;
    let mut shift = (target - bits).max(0);
    if (e - shift) % 2 != 0 {
        shift += 1;
    }
    m <<= shift as u64;
    e -= shift;
    let r = m.sqrt();
    let r = if dir == Round::Up && &r * &r != m { r + 1 } else { r };
    Dyadic::new(r, e / 2).round(prec, dir)
}

fn ln2_cache() -> &'static Mutex<HashMap<u32, Enclosure>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Enclosure>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enclosure of ln 2 at working precision `w`.
pub fn ln2(w: u32) -> Enclosure {
    if let Some(e) = ln2_cache().lock().unwrap().get(&w) {
        return e.clone();
    }
    let third = Enclosure::from_rational(&BigRational::new(1.into(), 3.into()), w);
    let v = atanh_series(&third, w).mul_int(2);
    ln2_cache().lock().unwrap().insert(w, v.clone());
    v
}

/// `atanh(z) = sum z^(2i+1)/(2i+1)` for |z| <= 1/2, with the geometric tail
/// bound `|z|^(2N+1) / ((2N+1)(1 - z^2))` folded into the result.
fn atanh_series(z: &Enclosure, w: u32) -> Enclosure {
    if z.lo().is_zero() && z.hi().is_zero() {
        return Enclosure::zero(w);
    }
    let z2 = z.square();
    let mut power = z.clone(); // z^(2i+1)
    let mut sum = Enclosure::zero(w);
    let eps = Dyadic::new(BigInt::one(), -(w as i64) - 4);
    let mut i: u64 = 0;
    loop {
        let term = power.div_int(2 * i + 1).expect("nonzero divisor");
        sum = sum.add(&term);
        power = power.mul(&z2);
        i += 1;
        let pmax = Dyadic::max(&power.lo().abs(), &power.hi().abs());
        if pmax < eps {
            break;
        }
    }
    // Tail from index i on: |z|^(2i+1)/(2i+1) * 1/(1 - z^2) <= 2 * pmax for |z| <= 1/2.
    let pmax = Dyadic::max(&power.lo().abs(), &power.hi().abs()).mul_pow2(1);
    let tail = Enclosure::new(pmax.neg(), pmax, w);
    sum.add(&tail)
}

fn ln_point(x: &Dyadic, prec: u32) -> Enclosure {
    let w = prec + GUARD_BITS;
    // x = m * 2^k with m in [1, 2); move to [sqrt(2)/2, sqrt(2)) to keep |z| small.
    let bits = x.mantissa().bits() as i64;
    let mut k = x.exponent() + bits - 1;
    let mut m = Dyadic::new(x.mantissa().clone(), -(bits - 1));
    // m > 1.4142 ~ 181/128 (the cut point only needs to be near sqrt 2)
    if m > Dyadic::new(BigInt::from(181), -7) {
        m = m.mul_pow2(-1);
        k += 1;
    }
    let me = Enclosure::point(m, w);
    let one = Enclosure::one(w);
    let z = me.sub(&one).div(&me.add(&one)).expect("m + 1 > 0");
    let mut r = atanh_series(&z, w).mul_int(2);
    if k != 0 {
        r = r.add(&ln2(w).mul_int(k));
    }
    r.with_precision(prec)
}

fn exp_point(x: &Dyadic, prec: u32) -> Result<Enclosure> {
    if x.is_zero() {
        return Ok(Enclosure::one(prec));
    }
    let xf = x.to_f64();
    if !xf.is_finite() || xf.abs() > 6.0e18 {
        return Err(Error::Overflow(format!("exp argument {xf:e} out of range")));
    }
    const HALVINGS: u32 = 12;
    let w = prec + GUARD_BITS + HALVINGS;
    let l2 = ln2(w);
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    let r = Enclosure::point(x.clone(), w).sub(&l2.mul_int(k)).mul_pow2(-(HALVINGS as i64));
    // Taylor series of exp(r) with |r| tiny.
    let rmax = Dyadic::max(&r.lo().abs(), &r.hi().abs());
    let eps = Dyadic::new(BigInt::one(), -(w as i64) - 4);
    let mut term = Enclosure::one(w);
    let mut sum = Enclosure::one(w);
    let mut n: u64 = 1;
    loop {
        term = term.mul(&r).div_int(n).expect("nonzero divisor");
        sum = sum.add(&term);
        n += 1;
        let tmax = Dyadic::max(&term.lo().abs(), &term.hi().abs());
        if tmax < eps || tmax.is_zero() {
            break;
        }
    }
    // Remaining terms are bounded by 2 |r|^n / n! <= 2 * |last term| * |r|.
    let last = Dyadic::max(&term.lo().abs(), &term.hi().abs());
    let tail = last.mul(&rmax).mul_pow2(1);
    let mut e = sum.add(&Enclosure::new(tail.neg(), tail, w));
    for _ in 0..HALVINGS {
        e = e.square();
    }
    Ok(e.mul_pow2(k).with_precision(prec))
}

/// Evaluates `f` at increasing precision until the certified ceiling agrees
/// at two consecutive precisions. Returns the ceiling and the precision used.
pub fn refine_ceil<F>(start_prec: u32, mut f: F) -> Result<(BigInt, u32)>
where
    F: FnMut(u32) -> Result<Enclosure>,
{
    const MAX_PREC: u32 = 1 << 20;
    let mut p = start_prec.max(16);
    let mut current = f(p)?;
    loop {
        if current.is_point() {
            return Ok((current.ceil_upper(), p));
        }
        let next_p = p.saturating_mul(2);
        let next = f(next_p)?;
        let narrowed = current.intersect(&next).unwrap_or_else(|| next.clone());
        if narrowed.ceil_upper() == current.ceil_upper() {
            return Ok((narrowed.ceil_upper(), next_p));
        }
        if next_p >= MAX_PREC {
            return Ok((narrowed.ceil_upper(), next_p));
        }
        current = narrowed;
        p = next_p;
    }
}
