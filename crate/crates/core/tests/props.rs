use proptest::prelude::*;

use mfbv::arith::{self, gcd};
use mfbv::chars::{self, CharacterGroup};
use mfbv::disc::Samples;
use mfbv::multfn::MultFn;
use mfbv::smooth::{self, SmoothFilter};
use mfbv::C64;

fn close(a: C64, b: C64) -> bool {
    (a - b).norm() < 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplicative_on_coprime(seed in 0u64..1000, m in 1u64..3000, n in 1u64..3000) {
        prop_assume!(gcd(m, n) == 1);
        for f in [MultFn::random_phase(seed), MultFn::random_sign(seed), MultFn::mobius()] {
            let lhs = f.eval(m * n).unwrap();
            let rhs = f.eval(m).unwrap() * f.eval(n).unwrap();
            prop_assert!(close(lhs, rhs), "{}: f({}) != f({})f({})", f.name(), m * n, m, n);
        }
    }

    #[test]
    fn factorization_roundtrip(n in 1u64..10_000_000) {
        let fac = arith::factorize(n).unwrap();
        let prod: u64 = fac.factors.iter().map(|&(p, k)| p.pow(k)).product();
        prop_assert_eq!(prod, n);
        prop_assert!(fac.factors.iter().all(|&(p, _)| arith::is_prime_u64(p)));
        let phi = (1..=n.min(2000)).filter(|&a| gcd(a, n) == 1).count() as u64;
        if n <= 2000 {
            prop_assert_eq!(fac.phi, phi);
        }
    }

    #[test]
    fn characters_are_multiplicative(q in 1u64..400, i in 0u64..1000, m in 0u64..400, n in 0u64..400) {
        let group = CharacterGroup::new(q).unwrap();
        let chi = group.character(i % group.len()).unwrap();
        prop_assert!(close(chi.value(m * n), chi.value(m) * chi.value(n)));
        prop_assert!(close(chi.value(m + q), chi.value(m)));
        prop_assert_eq!(chi.value(m).norm() > 0.5, gcd(m, q) == 1);
    }

    #[test]
    fn character_row_sums(q in 2u64..300, i in 0u64..1000) {
        let group = CharacterGroup::new(q).unwrap();
        let chi = group.character(i % group.len()).unwrap();
        let s: C64 = chi.values().into_iter().sum();
        let want = if chi.is_principal() { group.len() as f64 } else { 0.0 };
        prop_assert!((s - want).norm() < 1e-9);
    }

    #[test]
    fn induce_then_primitive(r in 1u64..40, mult in 1u64..8, i in 0usize..1000) {
        let prims = chars::primitive_characters(r).unwrap();
        prop_assume!(!prims.is_empty());
        let psi = &prims[i % prims.len()];
        let chi = chars::induce(psi, r * mult).unwrap();
        let (c, back) = chars::conductor_and_primitive(&chi).unwrap();
        prop_assert_eq!(c, r);
        prop_assert_eq!(&back, psi);
    }

    #[test]
    fn psi_monotone(x in 1u64..200_000, dx in 0u64..5000, y in 2u64..2000, dy in 0u64..100) {
        let base = smooth::psi_exact(x as f64, y as f64, SmoothFilter::All).unwrap().value;
        prop_assert!(smooth::psi_exact((x + dx) as f64, y as f64, SmoothFilter::All).unwrap().value >= base);
        prop_assert!(smooth::psi_exact(x as f64, (y + dy) as f64, SmoothFilter::All).unwrap().value >= base);
        prop_assert!(base <= x);
    }

    #[test]
    fn psi_progressions_partition(x in 1u64..50_000, y in 2u64..500, q in 1u64..30) {
        let total = smooth::psi_exact(x as f64, y as f64, SmoothFilter::All).unwrap().value;
        let parts: u64 = (0..q)
            .map(|a| smooth::psi_exact(x as f64, y as f64, SmoothFilter::Progression { q, a }).unwrap().value)
            .sum();
        prop_assert_eq!(parts, total);
        let coprime = smooth::psi_exact(x as f64, y as f64, SmoothFilter::CoprimeTo(q)).unwrap().value;
        let units: u64 = (0..q)
            .filter(|&a| gcd(a, q) == 1)
            .map(|a| smooth::psi_exact(x as f64, y as f64, SmoothFilter::Progression { q, a }).unwrap().value)
            .sum();
        prop_assert_eq!(coprime, units);
    }

    #[test]
    fn progression_sums_partition(seed in 0u64..500, x in 1u64..20_000, q in 1u64..60) {
        let s = Samples::new(&MultFn::random_phase(seed), x).unwrap();
        let buckets = s.progression_sums(q, x).unwrap();
        prop_assert_eq!(buckets.len() as u64, q);
        let total: C64 = s.values()[1..=x as usize].iter().sum();
        let parts: C64 = buckets.iter().sum();
        prop_assert!((total - parts).norm() < 1e-8 * (x as f64));
    }

    #[test]
    fn dickman_decreasing(u in 0.0f64..8.0, du in 0.001f64..2.0) {
        let a = smooth::dickman_rho(u).unwrap();
        let b = smooth::dickman_rho(u + du).unwrap();
        prop_assert!(b < a || (u <= 1.0 && u + du <= 1.0 && b == a));
        prop_assert!(b > 0.0 && a <= 1.0);
    }
}
