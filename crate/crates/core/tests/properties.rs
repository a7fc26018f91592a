use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use zseries::classify::{classify_general, classify_quadratic_at, QuadInput, VerdictKind};
use zseries::oracle::{brute_roots_mod, brute_square_mod, verify_factorization};
use zseries::padics::{is_square_zp, lift_roots_mod_pk, root_certificate, valuation};
use zseries::series::{invert_unit, mul_trunc, normalize_head};
use zseries::{Rule, TruncSeries};

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11])
}

fn coprime_to(p: u64, lo: i64, hi: i64) -> impl Strategy<Value = i64> {
    (lo..=hi).prop_filter("coprime to p", move |v| v.rem_euclid(p as i64) != 0)
}

fn quad_input() -> impl Strategy<Value = QuadInput> {
    prime().prop_flat_map(|p| {
        (
            Just(p),
            1..=8u32,
            prop::option::weighted(0.85, 1..=8u32),
            coprime_to(p, -50, 50),
            coprime_to(p, -50, 50),
        )
            .prop_map(|(p, n, m, beta, alpha)| QuadInput::new(p, n, m, big(beta), big(alpha)))
    })
}

fn series(max_len: usize) -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec(-60i64..=60, 1..=max_len).prop_map(|c| TruncSeries::from_i64(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn verdict_matches_discriminant_square_class(q in quad_input()) {
        let v = classify_quadratic_at(&q, 12).unwrap();
        let square = is_square_zp(&q.discriminant(), q.p).unwrap().is_square;
        prop_assert_eq!(v.kind == VerdictKind::Reducible, square);
        prop_assert_eq!(v.zp_reducible, Some(square));
    }

    #[test]
    fn reducible_verdicts_carry_verified_factors(q in quad_input(), order in 2usize..24) {
        let v = classify_quadratic_at(&q, order).unwrap();
        if v.kind == VerdictKind::Reducible {
            let pair = v.factors.unwrap();
            prop_assert_eq!(v.verified_order, Some(order));
            let f = q.series(order).unwrap();
            prop_assert_eq!(&mul_trunc(&pair.a, &pair.b, order).unwrap(), &f);
            let report = verify_factorization(&f, &pair.a, &pair.b).unwrap();
            prop_assert!(report.passed);
        } else {
            prop_assert!(v.factors.is_none());
        }
    }

    #[test]
    fn valuation_reconstructs(d in (-100_000i64..100_000).prop_filter("nonzero", |d| *d != 0), p in prime()) {
        let v = valuation(&big(d), p).unwrap();
        prop_assert_eq!(num_traits::pow(BigInt::from(p), v.t as usize) * &v.u, big(d));
        prop_assert!(!(&v.u % BigInt::from(p)).is_zero());
    }

    #[test]
    fn square_class_agrees_with_scan(d in -2000i64..2000, p in prime()) {
        let k = match p { 2 => 12, 3 => 8, 5 => 6, 7 => 5, _ => 4 };
        let class = is_square_zp(&big(d), p).unwrap();
        let compatible = class.valuation.is_some_and(|t| t + 3 <= k);
        prop_assume!(compatible);
        prop_assert_eq!(brute_square_mod(&big(d), p, k).unwrap(), class.is_square);
    }

    #[test]
    fn lifted_roots_equal_scan(a in -20i64..20, b in -20i64..20, c in -20i64..20, p in prime(), k in 1u32..5) {
        let modulus = p.pow(k) as i64;
        prop_assume!(![a, b, c].iter().all(|v| v.rem_euclid(modulus) == 0));
        let fast = lift_roots_mod_pk(&big(a), &big(b), &big(c), p, k).unwrap();
        let brute: Vec<BigInt> = brute_roots_mod(&big(a), &big(b), &big(c), p, k)
            .unwrap().into_iter().map(BigInt::from).collect();
        prop_assert_eq!(fast, brute);
    }

    #[test]
    fn root_certificates_check(beta in -30i64..30, alpha in -30i64..30, p in prime(), k in 1u32..6) {
        if let Some(c) = root_certificate(&big(beta), &big(alpha), p, k).unwrap() {
            prop_assert!(c.check(&big(beta), &big(alpha), p));
        } else {
            let roots = brute_roots_mod(&big(1), &big(-beta), &big(alpha), p, k).unwrap();
            prop_assert!(roots.is_empty());
        }
    }

    #[test]
    fn unit_inverse_multiplies_to_one(mut c in prop::collection::vec(-20i64..=20, 1..10), sign in prop::bool::ANY, n in 0usize..12) {
        c[0] = if sign { 1 } else { -1 };
        let a = TruncSeries::from_poly(&c.iter().map(|&x| big(x)).collect::<Vec<_>>(), n.max(c.len() - 1)).unwrap();
        let inv = invert_unit(&a, n).unwrap();
        prop_assert_eq!(mul_trunc(&a, &inv, n).unwrap(), TruncSeries::one(n));
    }

    #[test]
    fn head_normalization_conditions(p in prime(), t in 1usize..8, extra in prop::collection::vec(-25i64..=25, 10)) {
        let a1 = extra[0];
        prop_assume!(a1.rem_euclid(p as i64) != 0);
        let mut c = vec![p as i64];
        c.extend_from_slice(&extra[..=t]);
        let a = TruncSeries::from_i64(&c);
        let h = normalize_head(&a, p, t).unwrap();
        let q = mul_trunc(&h.unit, &a, t).unwrap();
        prop_assert!(h.unit.constant_term().is_one());
        prop_assert_eq!(q.constant_term(), &BigInt::from(p));
        prop_assert!(((&q.coeffs()[1] - big(a1)) % BigInt::from(p)).is_zero());
        prop_assert!(q.coeffs()[2..].iter().all(Zero::is_zero));
    }

    #[test]
    fn general_verdicts_are_sound(f in series(8), hint in prop::option::of(prime())) {
        let v = classify_general(&f, hint).unwrap();
        match v.kind {
            VerdictKind::Reducible => {
                let pair = v.factors.unwrap();
                let r = verify_factorization(&f, &pair.a, &pair.b).unwrap();
                prop_assert!(r.passed, "{:?}", r);
            }
            VerdictKind::Unit => prop_assert!(f.is_unit()),
            VerdictKind::ZeroSeries => prop_assert!(f.is_zero()),
            VerdictKind::Unknown => prop_assert!(v.assumption.is_some()),
            VerdictKind::Irreducible => {}
        }
    }

    #[test]
    fn linear_coprime_rule_tracks_f1(p in prime(), n in 2u32..5, f1 in -40i64..40, rest in prop::collection::vec(-40i64..40, 1..5)) {
        let mut c = vec![(p as i64).pow(n), f1];
        c.extend(rest);
        let fires = classify_general(&TruncSeries::from_i64(&c), Some(p)).unwrap().rule == Rule::LinearCoprime;
        prop_assert_eq!(fires, f1.rem_euclid(p as i64) != 0);
        c[1] = f1 * p as i64;
        let flipped = classify_general(&TruncSeries::from_i64(&c), Some(p)).unwrap();
        prop_assert_ne!(flipped.rule, Rule::LinearCoprime);
    }
}
