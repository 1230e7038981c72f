use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for a single inexact step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// A dyadic rational `mant * 2^exp`, kept with an odd mantissa (or zero).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn bit_len(x: &BigInt) -> u64 {
    x.magnitude().bits()
}

/// `floor(x / 2^k)` or `ceil(x / 2^k)` for `k >= 0`.
fn shift_right_rounded(x: &BigInt, k: u64, dir: Round) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    let d = BigInt::one() << k;
    match dir {
        Round::Down => x.div_floor(&d),
        Round::Up => -((-x).div_floor(&d)),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Number of significant bits of the mantissa.
    pub fn precision(&self) -> u64 {
        bit_len(&self.mant)
    }

    /// Exponent of the leading bit: `2^msb <= |self| < 2^(msb+1)`.
    pub fn msb(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + bit_len(&self.mant) as i64 - 1)
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Rounds to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let prec = prec.max(2) as u64;
        let bits = bit_len(&self.mant);
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        Dyadic::new(shift_right_rounded(&self.mant, shift, dir), self.exp + shift as i64)
    }

    /// Directed rounding of `num / den` to `prec` significant bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Dyadic {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Dyadic::zero();
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        // If den is a power of two the quotient is exact.
        if den.magnitude().count_ones() == 1 {
            let tz = den.trailing_zeros().unwrap_or(0) as i64;
            return Dyadic::new(num, -tz).round(prec, dir);
        }
        let k = prec as i64 + 2 + bit_len(&den) as i64 - bit_len(&num) as i64;
        let (n, d) = if k >= 0 {
            (num << k as u64, den)
        } else {
            (num, den << (-k) as u64)
        };
        let q = match dir {
            Round::Down => n.div_floor(&d),
            Round::Up => -((-n).div_floor(&d)),
        };
        Dyadic::new(q, -k).round(prec, dir)
    }

    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_ratio(q.numer(), q.denom(), prec, dir)
    }

    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        let e = self.exp - other.exp;
        let (n, d) = if e >= 0 {
            (&self.mant << e as u64, other.mant.clone())
        } else {
            (self.mant.clone(), &other.mant << (-e) as u64)
        };
        Dyadic::from_ratio(&n, &d, prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shift_right_rounded(&self.mant, (-self.exp) as u64, Round::Down)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shift_right_rounded(&self.mant, (-self.exp) as u64, Round::Up)
        }
    }

    /// Approximate value, for diagnostics and for choosing reduction steps only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = bit_len(&self.mant);
        let keep = bits.min(60);
        let m = shift_right_rounded(&self.mant, bits - keep, Round::Down)
            .to_f64()
            .unwrap_or(0.0);
        let e = self.exp + (bits - keep) as i64;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        // mant * 2^exp  vs  num / den
        let (l, r) = if self.exp >= 0 {
            ((&self.mant << self.exp as u64) * q.denom(), q.numer().clone())
        } else {
            (&self.mant * q.denom(), q.numer() << (-self.exp) as u64)
        };
        l.cmp(&r)
    }

    pub fn min(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a <= b { a.clone() } else { b.clone() }
    }

    pub fn max(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a >= b { a.clone() } else { b.clone() }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp >= 0 {
            write!(f, "{}", &self.mant << self.exp as u64)
        } else {
            write!(f, "{}/2^{}", self.mant, -self.exp)
        }
    }
}
