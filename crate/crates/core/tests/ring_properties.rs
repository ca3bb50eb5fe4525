use std::sync::LazyLock;

use proptest::prelude::*;

use orientcalc::coeffring::{rational, GradedRing, Generator, PowerSeries, Ring, RingElement};
use orientcalc::random;

static RING: LazyLock<Ring> = LazyLock::new(|| {
    GradedRing::new(
        vec![Generator::new("x", 1), Generator::nilpotent("y", 1, 3), Generator::new("z", 2), Generator::new("b", -1)],
        5,
    )
    .unwrap()
});

fn elements(seed: u64, n: usize) -> Vec<RingElement> {
    let mut rng = random::rng(seed);
    (0..n).map(|_| random::element(&mut rng, &RING, &["x", "y", "z", "b"], 4).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn commutative_ring_axioms(seed in any::<u64>()) {
        let v = elements(seed, 3);
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert!((a - a).is_zero());
        prop_assert_eq!(a * &RING.one(), a.clone());
    }

    #[test]
    fn truncation_respects_cap_and_nilpotency(seed in any::<u64>()) {
        let v = elements(seed, 2);
        let p = &v[0] * &v[1];
        let y = RING.index_of("y").unwrap();
        for (m, _) in p.terms() {
            prop_assert!(m.pos_degree() <= RING.degree_cap());
            prop_assert!(m.exponents()[y] < 3);
        }
    }

    #[test]
    fn powers_agree_with_repeated_products(seed in any::<u64>(), k in 0u32..5) {
        let a = &elements(seed, 1)[0];
        let mut acc = RING.one();
        for _ in 0..k {
            acc = &acc * a;
        }
        prop_assert_eq!(a.pow(k), acc);
    }

    #[test]
    fn canonical_text_is_stable(seed in any::<u64>()) {
        let a = &elements(seed, 1)[0];
        let b = a.embed(&RING).unwrap();
        prop_assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn series_reversion_and_reciprocal(coeffs in proptest::collection::vec(-4i64..=4, 1..6)) {
        let q = GradedRing::new(vec![], 6).unwrap();
        let mut c = vec![rational(0, 1), rational(1, 1)];
        c.extend(coeffs.iter().map(|&n| rational(n, 2)));
        c.truncate(7);
        let f = PowerSeries::from_rationals(&q, &c, 6);
        let g = f.reversion().unwrap();
        prop_assert_eq!(f.compose(&g).unwrap(), PowerSeries::variable(&q, 6));
        prop_assert_eq!(g.compose(&f).unwrap(), PowerSeries::variable(&q, 6));
        let u = f.shift_down().unwrap();
        prop_assert_eq!(u.mul(&u.reciprocal().unwrap()).unwrap(), PowerSeries::one(&q, u.precision()));
    }
}
