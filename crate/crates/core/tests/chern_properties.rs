use std::sync::LazyLock;

use proptest::prelude::*;

use orientcalc::chern::{nilpotence_check, projective_freeness_check, thom_mul_check, whitney_check};
use orientcalc::coeffring::{Generator, Ring};
use orientcalc::fgl::{beta_ring, FormalGroupLaw, OrientationMorphism};
use orientcalc::random;
use orientcalc::rr::{chern_character, todd_multiplicativity_check, ToddTransformation};

const NAMES: [&str; 3] = ["x1", "x2", "x3"];

static RINGS: LazyLock<Vec<Ring>> = LazyLock::new(|| {
    let b = beta_ring(5).unwrap();
    let laws = [b.clone(), FormalGroupLaw::universal(5).unwrap().ring().clone()];
    laws.iter().map(|r| r.extend(NAMES.iter().map(|n| Generator::new(*n, 1)).collect()).unwrap()).collect()
});

static TODD: LazyLock<Vec<ToddTransformation>> = LazyLock::new(|| {
    let uni = FormalGroupLaw::universal(4).unwrap();
    vec![
        ToddTransformation::new(chern_character(4).unwrap()).unwrap(),
        ToddTransformation::new(OrientationMorphism::identity(&uni)).unwrap(),
        ToddTransformation::new(random::morphism(&mut random::rng(11), &uni).unwrap()).unwrap(),
    ]
});

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn whitney_sum_formula(seed in any::<u64>(), which in 0usize..2) {
        let mut rng = random::rng(seed);
        let ring = &RINGS[which];
        let v = random::virtual_bundle(&mut rng, ring, &NAMES, 3, 2).unwrap();
        let w = random::virtual_bundle(&mut rng, ring, &NAMES, 3, 2).unwrap();
        let r = whitney_check(&v, &w);
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn chern_classes_vanish_above_rank(seed in any::<u64>(), which in 0usize..2) {
        let mut rng = random::rng(seed);
        let v = random::virtual_bundle(&mut rng, &RINGS[which], &NAMES, 3, 2).unwrap();
        let r = nilpotence_check(&v);
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn projective_bundle_is_free(seed in any::<u64>(), rank in 1usize..4) {
        let mut rng = random::rng(seed);
        let ring = &RINGS[0];
        let e = random::bundle(&mut rng, ring, &NAMES, rank).unwrap();
        let total = ring.extend(vec![Generator::new("c", 1)]).unwrap();
        let samples = (0..3)
            .map(|_| {
                (
                    random::element(&mut rng, &total, &["c", "x1"], 2).unwrap(),
                    random::element(&mut rng, &total, &["c", "x2", "x3"], 2).unwrap(),
                )
            })
            .collect::<Vec<_>>();
        let r = projective_freeness_check(&e, &samples, "c");
        prop_assert!(r.passed(), "{}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn thom_classes_multiply(seed in any::<u64>(), a in 0usize..3, b in 0usize..3) {
        let mut rng = random::rng(seed);
        let ring = &RINGS[1];
        let v = random::bundle(&mut rng, ring, &NAMES, a).unwrap();
        let w = random::bundle(&mut rng, ring, &NAMES, b).unwrap();
        let r = thom_mul_check(&v, &w);
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn todd_class_is_multiplicative(seed in any::<u64>(), which in 0usize..3) {
        let t = &TODD[which];
        let ring = t.morphism().source().ring().extend(vec![Generator::new("l1", 1), Generator::new("l2", 1)]).unwrap();
        let mut rng = random::rng(seed);
        let v = random::virtual_bundle(&mut rng, &ring, &["l1", "l2"], 2, 2).unwrap();
        let w = random::virtual_bundle(&mut rng, &ring, &["l1", "l2"], 2, 2).unwrap();
        let r = todd_multiplicativity_check(t, &v, &w);
        prop_assert!(r.passed(), "{}", r);
    }
}
