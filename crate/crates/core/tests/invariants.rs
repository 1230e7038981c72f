use modp_irred::bounds::{b_of_q, c_of_n, torsion_bound};
use modp_irred::criteria::{certify, check_class_coverage, jk_set, CertifyOptions, CertifyOutcome, Criterion};
use modp_irred::ellcurve::{trace_short, WeierstrassModel};
use modp_irred::exactnum::refine_ceil;
use modp_irred::parse::{parse_element, parse_field, parse_rational};
use modp_irred::{Enclosure, FieldDescriptor, FieldElement};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn squarefree(m: i64) -> bool {
    let n = m.unsigned_abs();
    (2..).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
}

fn radicand(lo: i64, hi: i64) -> impl Strategy<Value = i64> {
    (lo..=hi).prop_filter("squarefree, not 0 or 1", |&m| m != 0 && m != 1 && squarefree(m))
}

fn small_prime(lo: u64, hi: u64) -> impl Strategy<Value = u64> {
    (lo..=hi).prop_filter("prime", |&q| q > 1 && (2..q).take_while(|p| p * p <= q).all(|p| q % p != 0))
}

fn element(m: i64, a: i64, b: i64, d: i64) -> FieldElement {
    FieldElement::new(rat(a, d), rat(b, d), m)
}

fn disc(m: i64) -> i64 {
    if m.rem_euclid(4) == 1 {
        m
    } else {
        4 * m
    }
}

fn vq(mut n: BigInt, q: u64) -> i64 {
    let q = BigInt::from(q);
    let mut v = 0;
    while !n.is_zero() && (&n % &q).is_zero() {
        n /= &q;
        v += 1;
    }
    v
}

fn enc(q: &BigRational) -> Enclosure {
    Enclosure::from_rational(q, 128)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enclosure_arithmetic_contains_exact(
        (a, b, c, d) in (-1000i64..1000, 1i64..300, -1000i64..1000, 1i64..300)
    ) {
        let (x, y) = (rat(a, b), rat(c, d));
        prop_assert!(enc(&x).add(&enc(&y)).contains_rational(&(&x + &y)));
        prop_assert!(enc(&x).sub(&enc(&y)).contains_rational(&(&x - &y)));
        prop_assert!(enc(&x).mul(&enc(&y)).contains_rational(&(&x * &y)));
        if !y.is_zero() {
            prop_assert!(enc(&x).div(&enc(&y)).unwrap().contains_rational(&(&x / &y)));
        }
        prop_assert!(enc(&x).square().sqrt().unwrap().contains_rational(&x.abs()));
        prop_assert!(enc(&x).powu(5).contains_rational(&num_traits::pow(x.clone(), 5)));
    }

    #[test]
    fn ln_exp_round_trip_and_refinement((a, b) in (1i64..100_000, 1i64..1000)) {
        let x = rat(a, b);
        for prec in [64u32, 128, 256] {
            let e = Enclosure::from_rational(&x, prec);
            let back = e.ln().unwrap().exp().unwrap();
            prop_assert!(back.contains_rational(&x), "prec {prec}: {back}");
        }
        let lo = Enclosure::from_rational(&x, 64).ln().unwrap();
        let hi = Enclosure::from_rational(&x, 256).ln().unwrap();
        prop_assert!(lo.overlaps(&hi));
        prop_assert!(hi.width().to_rational() <= lo.width().to_rational());
    }

    #[test]
    fn ceilings_are_stable_under_precision((a, b, k) in (1i64..10_000, 1i64..100, 1i64..40)) {
        let x = rat(a, b);
        let f = |p: u32| Enclosure::from_rational(&x, p).ln().map(|l| l.mul_int(k).exp())?;
        let (c1, _) = refine_ceil(32, f).unwrap();
        let (c2, _) = refine_ceil(512, f).unwrap();
        prop_assert_eq!(c1, c2);
    }

    #[test]
    fn field_and_element_text_round_trips(m in radicand(-300, 300), (a, b, d) in (-50i64..50, -50i64..50, 1i64..12)) {
        let f = FieldDescriptor::quadratic(m).unwrap();
        prop_assert_eq!(parse_field(&f.to_string()).unwrap(), f.clone());
        let x = element(m, a, b, d);
        prop_assert_eq!(parse_element(&x.to_string(), &f).unwrap(), x);
        let q = rat(a, d);
        prop_assert_eq!(parse_rational(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn splitting_matches_square_roots(m in radicand(-200, 200), q in small_prime(2, 400)) {
        let f = FieldDescriptor::quadratic(m).unwrap();
        let d = disc(m);
        let want = if q == 2 {
            d % 2 != 0 && d.rem_euclid(8) == 1
        } else {
            let r = d.rem_euclid(q as i64) as u64;
            r != 0 && (1..q).any(|x| x * x % q == r)
        };
        prop_assert_eq!(f.totally_split(q).unwrap(), want);
        if want {
            prop_assert_eq!(f.degree_one_places(q).unwrap().len(), 2);
        }
    }

    #[test]
    fn norm_is_multiplicative_and_valuations_add(
        m in radicand(-100, 100),
        (a, b, c, d) in (-30i64..30, -30i64..30, -30i64..30, -30i64..30),
    ) {
        prop_assume!((a, b) != (0, 0) && (c, d) != (0, 0));
        let f = FieldDescriptor::quadratic(m).unwrap();
        let (x, y) = (element(m, a, b, 1), element(m, c, d, 1));
        let xy = &x * &y;
        prop_assert_eq!(xy.norm(), x.norm() * y.norm());
        for q in f.split_primes_up_to(60).into_iter().filter(|&q| q > 2) {
            let mut total = 0;
            for p in f.degree_one_places(q).unwrap() {
                let (vx, vy) = (f.valuation_at(&x, &p).unwrap(), f.valuation_at(&y, &p).unwrap());
                prop_assert_eq!(f.valuation_at(&xy, &p).unwrap(), vx + vy);
                total += vx;
            }
            // the places above q see the q-part of the norm
            let n = x.norm();
            prop_assert_eq!(total, vq(n.numer().clone(), q) - vq(n.denom().clone(), q));
        }
    }

    #[test]
    fn height_respects_inversion_and_powers(
        m in radicand(-60, 60),
        (a, b, d) in (-40i64..40, -40i64..40, 1i64..9),
    ) {
        prop_assume!((a, b) != (0, 0));
        let f = FieldDescriptor::quadratic(m).unwrap();
        let x = element(m, a, b, d);
        let h = f.height_power(&x, 160).unwrap();
        prop_assert!(h.overlaps(&f.height_power(&x.inv().unwrap(), 160).unwrap()));
        prop_assert!(h.square().overlaps(&f.height_power(&x.pow(2), 160).unwrap()));
        prop_assert!(Enclosure::one(160).certainly_le(&h) || h.contains_rational(&BigRational::one()));
    }

    #[test]
    fn j_invariant_matches_c4_cubed_over_discriminant(c in prop::array::uniform5(-20i64..20)) {
        let [a1, a2, a3, a4, a6] = c.map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        let c4: BigInt = &b2 * &b2 - 24 * &b4;
        let delta: BigInt = -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6;
        match WeierstrassModel::from_ints(c) {
            Err(_) => prop_assert!(delta.is_zero()),
            Ok(e) => {
                let j = e.j_invariant();
                prop_assert!(j.b.is_zero());
                prop_assert_eq!(j.a, BigRational::new(c4.pow(3), delta));
            }
        }
    }

    #[test]
    fn twisting_preserves_j(
        m in radicand(-30, 30),
        (a, b, c, d) in (-9i64..9, -9i64..9, -9i64..9, -9i64..9),
        (t, u) in (-6i64..6, -6i64..6),
    ) {
        prop_assume!((t, u) != (0, 0));
        let Ok(e) = WeierstrassModel::short(element(m, a, b, 1), element(m, c, d, 1)) else {
            return Ok(());
        };
        let tw = e.quadratic_twist(&element(m, t, u, 1)).unwrap();
        let (j0, j1) = (e.j_invariant(), tw.j_invariant());
        prop_assert_eq!((j0.a, j0.b), (j1.a, j1.b));
    }

    #[test]
    fn traces_match_point_counts((a, b) in (0u64..200, 0u64..200), q in small_prime(5, 150)) {
        let (a, b) = (a % q, b % q);
        prop_assume!((4 * a * a % q * a + 27 * b * b) % q != 0);
        let mut squares = vec![0u64; q as usize];
        for y in 0..q {
            squares[(y * y % q) as usize] += 1;
        }
        let points: u64 = 1 + (0..q).map(|x| squares[((x * x % q * x + a * x + b) % q) as usize]).sum::<u64>();
        let t = trace_short(a, b, q);
        prop_assert_eq!(t, q as i64 + 1 - points as i64);
        prop_assert!(t * t <= 4 * q as i64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bounds_grow_with_n(m in radicand(-40, 40), (n, k) in (1i64..200, 1i64..200)) {
        let f = FieldDescriptor::quadratic(m).unwrap();
        let (lo, _) = c_of_n(&f, &BigInt::from(n), 64).unwrap();
        let (hi, _) = c_of_n(&f, &BigInt::from(n + k), 64).unwrap();
        prop_assert!(lo < hi);
    }

    #[test]
    fn rational_bounds_are_exact(n in 1i64..500) {
        let n = BigInt::from(n);
        let want = (n.pow(12) + n.pow(6)).pow(2);
        prop_assert_eq!(c_of_n(&FieldDescriptor::Rational, &n, 64).unwrap().0, want);
    }

    #[test]
    fn coverage_grows_with_a(m in radicand(-120, -1), (k1, k2) in (1i64..9, 1i64..9)) {
        let f = FieldDescriptor::quadratic(m).unwrap();
        let (a1, a2) = (rat(k1.min(k2), 4), rat(k1.max(k2), 4));
        let (s1, s2) = (jk_set(&f, &a1).unwrap(), jk_set(&f, &a2).unwrap());
        prop_assert!(s1.bound <= s2.bound);
        prop_assert!(s1.places.iter().all(|p| s2.places.contains(p)) || !s1.complete);
        let (c1, c2) = (check_class_coverage(&f, &s1).unwrap(), check_class_coverage(&f, &s2).unwrap());
        prop_assert!(!c1.covered || c2.covered);
        prop_assert!(c1.witnesses.keys().all(|k| c2.witnesses.contains_key(k)));
    }

    #[test]
    fn certificate_bound_is_dominated_by_family_bound(
        m in prop_oneof![Just(0i64), Just(-1), Just(-5), Just(2)],
        (a, b) in (-30i64..30, -30i64..30),
        max_prime in 5u64..80,
    ) {
        let f = if m == 0 { FieldDescriptor::Rational } else { FieldDescriptor::quadratic(m).unwrap() };
        let Ok(e) = WeierstrassModel::short(element(m, a, 0, 1), element(m, b, 0, 1)) else {
            return Ok(());
        };
        let Ok((outcome, _)) = certify(&e, &f, max_prime, CertifyOptions::default()) else {
            return Ok(());
        };
        if let CertifyOutcome::Certificate(c) = outcome {
            prop_assert!(c.witnesses.iter().all(|w| w.place.q <= max_prime));
            if let Some(family) = &c.family_bound {
                prop_assert!(c.bound <= *family);
            }
        }
    }
}

#[test]
fn multiplicative_certificates_use_the_torsion_floor() {
    let q = 5u64;
    let mut found = 0;
    'search: for a in -12i64..12 {
        for b in -12i64..12 {
            let (ab, bb) = (BigInt::from(a), BigInt::from(b));
            let delta: BigInt = -16 * (4 * ab.pow(3) + 27 * bb.pow(2));
            let c4: BigInt = -48 * ab;
            if delta.is_zero() || vq(delta, q) == 0 || vq(c4, q) > 0 {
                continue;
            }
            let e = WeierstrassModel::from_ints([0, 0, 0, a, b]).unwrap();
            let (outcome, _) = certify(&e, &FieldDescriptor::Rational, q, CertifyOptions::default()).unwrap();
            let c = outcome.certificate().expect("multiplicative place certifies");
            assert_eq!(c.criterion, Criterion::Multiplicative);
            assert_eq!(c.witnesses[0].place.q, q);
            let n = BigInt::from(q);
            let want = (n.pow(12) + n.pow(6)).pow(2).max(BigInt::from(532_900));
            assert_eq!(c.bound, want);
            assert_eq!(b_of_q(&FieldDescriptor::Rational, q, 64).unwrap().0, want);
            found += 1;
            if found == 5 {
                break 'search;
            }
        }
    }
    assert_eq!(found, 5);
    let inv = FieldDescriptor::Rational.invariants(64).unwrap();
    assert_eq!(torsion_bound(&inv).unwrap(), BigInt::from(730).pow(2));
}
