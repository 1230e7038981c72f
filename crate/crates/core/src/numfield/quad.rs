use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, Zero};

/// An element `a + b*sqrt(m)` of `Q(sqrt m)` (or of a ring inside it), generic
/// over the coordinate type.
///
/// `m == 0` denotes the rational field itself; `b` is then always zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadElement<T> {
    pub a: T,
    pub b: T,
    pub m: i64,
}

impl<T: Clone + Num + Neg<Output = T>> QuadElement<T> {
    pub fn new(a: T, b: T, m: i64) -> Self {
        if m == 0 {
            assert!(b.is_zero(), "rational field element with an irrational part");
        }
        QuadElement { a, b, m }
    }

    pub fn from_scalar(a: T, m: i64) -> Self {
        QuadElement { a, b: T::zero(), m }
    }

    /// `sqrt(m)` itself.
    pub fn generator(m: i64) -> Self {
        assert!(m != 0, "the rational field has no quadratic generator");
        QuadElement { a: T::zero(), b: T::one(), m }
    }

    pub fn zero(m: i64) -> Self {
        Self::from_scalar(T::zero(), m)
    }

    pub fn one(m: i64) -> Self {
        Self::from_scalar(T::one(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_scalar(&self) -> bool {
        self.b.is_zero()
    }

    /// Image under the nontrivial automorphism `sqrt m -> -sqrt m`.
    pub fn conj(&self) -> Self {
        QuadElement { a: self.a.clone(), b: -self.b.clone(), m: self.m }
    }

    pub fn norm(&self) -> T {
        if self.m == 0 {
            return self.a.clone();
        }
        self.a.clone() * self.a.clone() - scale_i64(self.b.clone() * self.b.clone(), self.m)
    }

    pub fn trace(&self) -> T {
        if self.m == 0 {
            return self.a.clone();
        }
        self.a.clone() + self.a.clone()
    }

    fn common_m(&self, other: &Self) -> i64 {
        if self.m == other.m {
            self.m
        } else if other.b.is_zero() {
            self.m
        } else if self.b.is_zero() {
            other.m
        } else {
            panic!("mixing elements of Q(sqrt {}) and Q(sqrt {})", self.m, other.m)
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = Self::one(self.m);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Re-tags the element as living in `Q(sqrt m)`; only valid for scalars or equal `m`.
    pub fn in_field(mut self, m: i64) -> Self {
        assert!(self.m == m || self.b.is_zero(), "cannot move an irrational element to another field");
        self.m = m;
        self
    }
}

impl<T: Clone + Num + Neg<Output = T>> Add for &QuadElement<T> {
    type Output = QuadElement<T>;
    fn add(self, rhs: Self) -> QuadElement<T> {
        let m = self.common_m(rhs);
        QuadElement { a: self.a.clone() + rhs.a.clone(), b: self.b.clone() + rhs.b.clone(), m }
    }
}

impl<T: Clone + Num + Neg<Output = T>> Sub for &QuadElement<T> {
    type Output = QuadElement<T>;
    fn sub(self, rhs: Self) -> QuadElement<T> {
        let m = self.common_m(rhs);
        QuadElement { a: self.a.clone() - rhs.a.clone(), b: self.b.clone() - rhs.b.clone(), m }
    }
}

impl<T: Clone + Num + Neg<Output = T>> Mul for &QuadElement<T> {
    type Output = QuadElement<T>;
    fn mul(self, rhs: Self) -> QuadElement<T> {
        let m = self.common_m(rhs);
        let bb = self.b.clone() * rhs.b.clone();
        let a = self.a.clone() * rhs.a.clone() + scale_i64(bb, m);
        let b = self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.a.clone();
        QuadElement { a, b, m }
    }
}

impl<T: Clone + Num + Neg<Output = T>> Neg for &QuadElement<T> {
    type Output = QuadElement<T>;
    fn neg(self) -> QuadElement<T> {
        QuadElement { a: -self.a.clone(), b: -self.b.clone(), m: self.m }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<T: Clone + Num + Neg<Output = T>> $tr for QuadElement<T> {
            type Output = QuadElement<T>;
            fn $f(self, rhs: Self) -> QuadElement<T> {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Clone + Num + Neg<Output = T>> Neg for QuadElement<T> {
    type Output = QuadElement<T>;
    fn neg(self) -> QuadElement<T> {
        -&self
    }
}

/// `x * k` for a machine integer `k`, by binary expansion.
fn scale_i64<T: Clone + Num + Neg<Output = T>>(x: T, k: i64) -> T {
    let mut acc = T::zero();
    let mut add = x;
    let mut n = k.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc + add.clone();
        }
        n >>= 1;
        if n > 0 {
            add = add.clone() + add;
        }
    }
    if k < 0 {
        -acc
    } else {
        acc
    }
}

impl QuadElement<BigRational> {
    pub fn from_ints(a: i64, b: i64, m: i64) -> Self {
        QuadElement::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()), m)
    }

    pub fn from_rational(q: BigRational, m: i64) -> Self {
        QuadElement::from_scalar(q, m)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.m == 0 {
            return Some(QuadElement { a: self.a.recip(), b: self.b.clone(), m: 0 });
        }
        let n = self.norm();
        let c = self.conj();
        Some(QuadElement { a: c.a / n.clone(), b: c.b / n, m: self.m })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self * &i)
    }

    /// Least common denominator of the two coordinates.
    pub fn denominator(&self) -> BigInt {
        num_integer::Integer::lcm(self.a.denom(), self.b.denom())
    }

    /// Integer coordinates `(A, B)` with `self = (A + B sqrt m) / denominator()`.
    pub fn scaled_numerators(&self) -> (BigInt, BigInt, BigInt) {
        let d = self.denominator();
        let a = (&self.a * BigRational::from_integer(d.clone())).to_integer();
        let b = (&self.b * BigRational::from_integer(d.clone())).to_integer();
        (a, b, d)
    }

    /// Whether the element is an algebraic integer of `Q(sqrt m)`.
    pub fn is_algebraic_integer(&self) -> bool {
        self.trace().is_integer() && self.norm().is_integer()
    }

    pub fn powi(&self, e: i32) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            self.inv().map(|i| i.pow(e.unsigned_abs()))
        }
    }

    /// Exact sign of a real element (requires `m >= 0`).
    pub fn real_sign(&self) -> i32 {
        assert!(self.m >= 0, "sign of an element of an imaginary field");
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if self.m == 0 || sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // a and b*sqrt m have opposite signs: compare a^2 with m b^2
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigRational::from_integer(self.m.into());
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }

    /// Absolute value of a real element, exactly.
    pub fn real_abs(&self) -> Self {
        if self.real_sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }
}

fn sign_of(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl From<&QuadElement<BigInt>> for QuadElement<BigRational> {
    fn from(x: &QuadElement<BigInt>) -> Self {
        QuadElement {
            a: BigRational::from_integer(x.a.clone()),
            b: BigRational::from_integer(x.b.clone()),
            m: x.m,
        }
    }
}

impl<T: fmt::Display + Zero + PartialEq> fmt::Display for QuadElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            write!(f, "{}*s", self.b)
        } else {
            let bs = self.b.to_string();
            if bs.starts_with('-') {
                write!(f, "{}{}*s", self.a, bs)
            } else {
                write!(f, "{}+{}*s", self.a, bs)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = QuadElement<BigRational>;
    type Z = QuadElement<BigInt>;

    #[test]
    fn gaussian_arithmetic() {
        let x = Z::new(1.into(), 1.into(), -1);
        let sq = &x * &x;
        assert_eq!(sq, Z::new(0.into(), 2.into(), -1));
        assert_eq!(x.pow(12), Z::new((-64).into(), 0.into(), -1));
        assert_eq!(x.norm(), BigInt::from(2));
    }

    #[test]
    fn inverse_and_division() {
        let x = Q::from_ints(2, 1, -1);
        let inv = x.inv().unwrap();
        assert!((&x * &inv).is_one());
        assert_eq!(x.div(&x).unwrap(), Q::one(-1));
        assert!(Q::zero(-1).inv().is_none());
    }

    #[test]
    fn exact_real_sign() {
        assert_eq!(Q::from_ints(1, -1, 2).real_sign(), -1); // 1 - sqrt 2
        assert_eq!(Q::from_ints(3, -2, 2).real_sign(), 1); // 3 - 2 sqrt 2 > 0
        assert_eq!(Q::from_ints(-3, 2, 2).real_sign(), -1);
        assert_eq!(Q::from_ints(0, 0, 2).real_sign(), 0);
    }

    #[test]
    fn display_round_trip_syntax() {
        assert_eq!(Q::from_ints(1, -1, -5).to_string(), "1-1*s");
        assert_eq!(Q::from_ints(0, 3, -5).to_string(), "3*s");
        assert_eq!(Q::from_ints(7, 0, 0).to_string(), "7");
    }
}
