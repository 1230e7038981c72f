//! Primitive binary quadratic forms `a x^2 + b x y + c y^2` and their reduction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// 2x2 integer matrix `[[p, q], [r, s]]`, acting on column vectors `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub s: BigInt,
}

impl Mat2 {
    pub fn identity() -> Self {
        Mat2 { p: BigInt::one(), q: BigInt::zero(), r: BigInt::zero(), s: BigInt::one() }
    }

    fn from_i(p: BigInt, q: BigInt, r: BigInt, s: BigInt) -> Self {
        Mat2 { p, q, r, s }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            p: &self.p * &o.p + &self.q * &o.r,
            q: &self.p * &o.q + &self.q * &o.s,
            r: &self.r * &o.p + &self.s * &o.r,
            s: &self.r * &o.q + &self.s * &o.s,
        }
    }

    pub fn det(&self) -> BigInt {
        &self.p * &self.s - &self.q * &self.r
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Form {
    #[serde(serialize_with = "crate::numfield::ser_bigint")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::numfield::ser_bigint")]
    pub b: BigInt,
    #[serde(serialize_with = "crate::numfield::ser_bigint")]
    pub c: BigInt,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl Form {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Form { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    /// The form `f(M (x, y))`.
    pub fn transform(&self, m: &Mat2) -> Form {
        let a = self.eval(&m.p, &m.r);
        let c = self.eval(&m.q, &m.s);
        let b = BigInt::from(2) * &self.a * &m.p * &m.q
            + &self.b * (&m.p * &m.s + &m.q * &m.r)
            + BigInt::from(2) * &self.c * &m.r * &m.s;
        Form { a, b, c }
    }

    /// Reduced positive definite form: `|b| <= a <= c`, with `b >= 0` when
    /// `|b| == a` or `a == c`.
    pub fn is_reduced_definite(&self) -> bool {
        let ab = self.b.abs();
        if ab > self.a || self.a > self.c {
            return false;
        }
        if (ab == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }

    /// Gauss reduction of a positive definite form. Returns the reduced form
    /// and the `SL2(Z)` matrix `M` with `reduced = self ∘ M`.
    pub fn reduce_definite(&self) -> (Form, Mat2) {
        assert!(self.discriminant().is_negative() && self.a.is_positive(), "not positive definite");
        let mut f = self.clone();
        let mut m = Mat2::identity();
        loop {
            // normalize b into (-a, a]
            let two_a = BigInt::from(2) * &f.a;
            if !(-&f.a < f.b && f.b <= f.a) {
                let t = (&f.a - &f.b).div_floor(&two_a);
                let step = Mat2::from_i(BigInt::one(), t.clone(), BigInt::zero(), BigInt::one());
                f = Form { c: &f.a * &t * &t + &f.b * &t + &f.c, b: &f.b + &two_a * &t, a: f.a.clone() };
                m = m.mul(&step);
            }
            if f.a > f.c || (f.a == f.c && f.b.is_negative()) {
                let step = Mat2::from_i(BigInt::zero(), -BigInt::one(), BigInt::one(), BigInt::zero());
                f = Form { a: f.c.clone(), b: -f.b.clone(), c: f.a.clone() };
                m = m.mul(&step);
                continue;
            }
            break;
        }
        debug_assert!(f.is_reduced_definite());
        (f, m)
    }

    /// Reduced indefinite form (non-square discriminant `D > 0`):
    /// `0 < b < sqrt D` and `sqrt D - b < 2|a| < sqrt D + b`.
    pub fn is_reduced_indefinite(&self) -> bool {
        let d = self.discriminant();
        if !self.b.is_positive() || &self.b * &self.b >= d {
            return false;
        }
        let two_a = BigInt::from(2) * self.a.abs();
        // sqrt D < 2|a| + b
        let lower = &two_a + &self.b;
        if &lower * &lower <= d {
            return false;
        }
        // 2|a| - b < sqrt D
        let upper = &two_a - &self.b;
        upper <= BigInt::zero() || &upper * &upper < d
    }

    /// One step of the indefinite reduction operator
    /// `rho(a, b, c) = (c, r, (r^2 - D) / 4c)`, with its transition matrix.
    pub fn rho(&self) -> (Form, Mat2) {
        let d = self.discriminant();
        assert!(!self.c.is_zero(), "rho needs c != 0");
        let ac = self.c.abs();
        let two_c = BigInt::from(2) * &ac;
        let r = if &ac * &ac > d {
            let mut r0 = (-&self.b).mod_floor(&two_c);
            if r0 > ac {
                r0 -= &two_c;
            }
            r0
        } else {
            let s = d.sqrt();
            &s - (&s + &self.b).mod_floor(&two_c)
        };
        let t = (&self.b + &r) / (BigInt::from(2) * &self.c);
        let next = Form {
            a: self.c.clone(),
            b: r.clone(),
            c: (&r * &r - &d) / (BigInt::from(4) * &self.c),
        };
        (next, Mat2::from_i(BigInt::zero(), -BigInt::one(), BigInt::one(), t))
    }
}

/// All reduced primitive positive definite forms of a negative discriminant.
pub fn reduced_definite_forms(disc: i64) -> Vec<Form> {
    assert!(disc < 0 && (disc % 4 == 0 || disc.rem_euclid(4) == 1));
    let n = -disc;
    let mut out = Vec::new();
    let mut a: i64 = 1;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = Form::new(a, b, c);
            if f.is_reduced_definite() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    out
}

/// All reduced primitive indefinite forms of a positive non-square discriminant.
pub fn reduced_indefinite_forms(disc: i64) -> Vec<Form> {
    assert!(disc > 0);
    let d = BigInt::from(disc);
    let mut out = Vec::new();
    let mut b: i64 = 1;
    while b * b < disc {
        if (b - disc).rem_euclid(2) == 0 {
            let prod = (disc - b * b) / 4; // = -a c
            let mut k = 1;
            while k * k <= prod {
                if prod % k == 0 {
                    for a0 in [k, prod / k] {
                        for a in [a0, -a0] {
                            let c = -prod / a;
                            let f = Form::new(a, b, c);
                            if f.discriminant() == d && f.is_reduced_indefinite() && f.is_primitive() {
                                out.push(f);
                            }
                        }
                    }
                }
                k += 1;
            }
        }
        b += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// Cycles of reduced indefinite forms under `rho`, each listed from its
/// smallest member.
pub fn indefinite_cycles(disc: i64) -> Vec<Vec<Form>> {
    let forms = reduced_indefinite_forms(disc);
    let mut seen = std::collections::BTreeSet::new();
    let mut cycles = Vec::new();
    for f in &forms {
        if seen.contains(f) {
            continue;
        }
        let mut cycle = vec![f.clone()];
        seen.insert(f.clone());
        let mut g = f.rho().0;
        while &g != f {
            seen.insert(g.clone());
            cycle.push(g.clone());
            g = g.rho().0;
        }
        cycles.push(cycle);
    }
    cycles
}

/// Reduces an indefinite form and returns the reduced form reached together
/// with the accumulated transition matrix.
pub fn reduce_indefinite(f: &Form) -> (Form, Mat2) {
    let mut g = f.clone();
    let mut m = Mat2::identity();
    let mut steps = 0;
    while !g.is_reduced_indefinite() {
        let (n, t) = g.rho();
        g = n;
        m = m.mul(&t);
        steps += 1;
        assert!(steps < 10_000, "indefinite reduction did not terminate");
    }
    (g, m)
}
