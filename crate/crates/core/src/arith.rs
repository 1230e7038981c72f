//! Small-integer number theory: primality, modular arithmetic, Kronecker
//! symbols and polynomials over prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime `p`; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let a = a % p;
    assert!(a != 0, "zero has no inverse mod {p}");
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sieve of Eratosthenes, ascending primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes in ascending order starting at `from`, without an upper limit.
pub fn primes_from(from: u64) -> impl Iterator<Item = u64> {
    (from.max(2)..).filter(|&n| is_prime(n))
}

/// Residue of `n` modulo `m` in `[0, m)`.
pub fn big_mod(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}

/// Reduction of a rational modulo a prime; `None` if the denominator vanishes.
pub fn rational_mod(q: &BigRational, p: u64) -> Option<u64> {
    let d = big_mod(q.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mul_mod(big_mod(q.numer(), p), inv_mod(d, p), p))
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(a: &BigInt, n: u64) -> i32 {
    assert!(n % 2 == 1, "jacobi needs odd modulus");
    let mut a = big_mod(a, n);
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol (a/n) for n >= 1.
pub fn kronecker(a: &BigInt, n: u64) -> i32 {
    assert!(n >= 1);
    let mut n = n;
    let mut result = 1;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a.is_even() {
            return 0;
        }
        let r = big_mod(a, 8);
        if (r == 3 || r == 5) && tz % 2 == 1 {
            result = -result;
        }
        n >>= tz;
    }
    if n == 1 {
        return result;
    }
    result * jacobi(a, n)
}

/// Legendre symbol of a residue modulo an odd prime, via Euler's criterion.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo an odd prime, by Tonelli-Shanks.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n.unsigned_abs();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return false;
            }
        }
        d += 1;
    }
    true
}

/// Squarefree part of a nonzero integer, keeping its sign.
pub fn squarefree_part(n: &BigInt) -> BigInt {
    assert!(!n.is_zero());
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &d;
        }
        d += 1;
    }
    out * m * sign
}

/// Lifts a simple root `r` of the monic integer polynomial `x^2 - t x + n`
/// modulo `p` to a root modulo `p^k` (Newton/Hensel iteration).
pub fn hensel_lift_quadratic(t: &BigInt, n: &BigInt, r: u64, p: u64, k: u32) -> BigInt {
    let modulus = BigInt::from(p).pow(k);
    let mut x = BigInt::from(r);
    let mut cur = BigInt::from(p);
    while cur < modulus {
        cur = (&cur * &cur).min(modulus.clone());
        let f = &x * &x - t * &x + n;
        let df = BigInt::from(2) * &x - t;
        let inv = mod_inverse_big(&df, &cur).expect("simple root");
        x = (x - f * inv).mod_floor(&cur);
    }
    x.mod_floor(&modulus)
}

/// Inverse of `a` modulo `m` for big integers.
pub fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Dense polynomials over F_p, coefficients low to high, trimmed.
pub mod polymod {
    use super::{inv_mod, mul_mod};

    pub type Poly = Vec<u64>;

    pub fn trim(mut f: Poly) -> Poly {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn degree(f: &Poly) -> Option<usize> {
        if f.is_empty() { None } else { Some(f.len() - 1) }
    }

    pub fn sub(f: &Poly, g: &Poly, p: u64) -> Poly {
        let n = f.len().max(g.len());
        let mut out = vec![0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            *o = (a + p - b) % p;
        }
        trim(out)
    }

    pub fn mul(f: &Poly, g: &Poly, p: u64) -> Poly {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; f.len() + g.len() - 1];
        for (i, &a) in f.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in g.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        trim(out)
    }

    pub fn rem(f: &Poly, g: &Poly, p: u64) -> Poly {
        let dg = degree(g).expect("division by zero polynomial");
        let lead_inv = inv_mod(g[dg], p);
        let mut r = trim(f.clone());
        while let Some(dr) = degree(&r) {
            if dr < dg {
                break;
            }
            let c = mul_mod(r[dr], lead_inv, p);
            let shift = dr - dg;
            for (i, &b) in g.iter().enumerate() {
                r[i + shift] = (r[i + shift] + p - mul_mod(c, b, p)) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(f: &Poly, g: &Poly, p: u64) -> Poly {
        let mut a = trim(f.clone());
        let mut b = trim(g.clone());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if let Some(d) = degree(&a) {
            let inv = inv_mod(a[d], p);
            a.iter_mut().for_each(|c| *c = mul_mod(*c, inv, p));
        }
        a
    }

    pub fn derivative(f: &Poly, p: u64) -> Poly {
        trim(f.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % p, p)).collect())
    }

    /// `x^e mod f`.
    pub fn pow_x_mod(e: u64, f: &Poly, p: u64) -> Poly {
        let mut result: Poly = vec![1];
        let mut base = rem(&vec![0, 1], f, p);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = rem(&mul(&result, &base, p), f, p);
            }
            base = rem(&mul(&base, &base, p), f, p);
            e >>= 1;
        }
        rem(&result, f, p)
    }

    pub fn eval(f: &Poly, x: u64, p: u64) -> u64 {
        f.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
    }
}
