//! Seeded random instances for property checks and the built-in suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chern::VirtualBundle;
use crate::coeffring::{rational, Coefficient, PowerSeries, Ring, RingElement};
use crate::fgl::lazard::monomials_of_weight;
use crate::fgl::{FormalGroupLaw, OrientationMorphism};
use crate::Result;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small nonzero rational `p/q` with `|p| <= 5`, `q <= 3`.
pub fn coefficient(rng: &mut Rng64) -> Coefficient {
    let mut p = rng.gen_range(-5i64..=5);
    if p == 0 {
        p = 1;
    }
    rational(p, rng.gen_range(1i64..=3))
}

/// A sum of up to `terms` random monomials in the named generators, each
/// surviving truncation in `ring`.
pub fn element(rng: &mut Rng64, ring: &Ring, names: &[&str], terms: usize) -> Result<RingElement> {
    let idx: Vec<usize> = names.iter().map(|n| ring.generator(n).map(|_| ring.index_of(n).unwrap())).collect::<Result<_>>()?;
    let mut out = ring.zero();
    for _ in 0..terms {
        let mut exps = vec![0u32; ring.generators().len()];
        for &i in &idx {
            exps[i] = rng.gen_range(0..=2);
        }
        out = out + RingElement::from_exponents(ring, exps, coefficient(rng));
    }
    Ok(out)
}

/// A nilpotent class of positive degree: a random linear form in the named
/// generators plus, sometimes, a quadratic correction.
pub fn root(rng: &mut Rng64, ring: &Ring, names: &[&str]) -> Result<RingElement> {
    let mut out = ring.zero();
    for n in names {
        if rng.gen_bool(0.7) {
            out = out + ring.generator(n)?.scalar_mul(&rational(rng.gen_range(-2i64..=2), 1))?;
        }
    }
    if out.is_zero() {
        out = ring.generator(names.choose(rng).expect("at least one generator"))?;
    }
    if rng.gen_bool(0.3) {
        let a = ring.generator(names.choose(rng).expect("nonempty"))?;
        let b = ring.generator(names.choose(rng).expect("nonempty"))?;
        out = out + (&a * &b).scalar_mul(&coefficient(rng))?;
    }
    Ok(out)
}

/// An effective bundle of the given rank with random roots.
pub fn bundle(rng: &mut Rng64, ring: &Ring, names: &[&str], rank: usize) -> Result<VirtualBundle> {
    let roots = (0..rank).map(|_| root(rng, ring, names)).collect::<Result<Vec<_>>>()?;
    VirtualBundle::split(ring, roots)
}

/// A virtual bundle with up to `max_plus` positive and `max_minus` negative
/// roots.
pub fn virtual_bundle(rng: &mut Rng64, ring: &Ring, names: &[&str], max_plus: usize, max_minus: usize) -> Result<VirtualBundle> {
    let p = rng.gen_range(0..=max_plus);
    let m = rng.gen_range(0..=max_minus);
    let plus = (0..p).map(|_| root(rng, ring, names)).collect::<Result<Vec<_>>>()?;
    let minus = (0..m).map(|_| root(rng, ring, names)).collect::<Result<Vec<_>>>()?;
    VirtualBundle::new(ring, plus, minus)
}

/// `t + sum_(i>=2) alpha_i t^i` through `t^precision`. Over a graded
/// coefficient ring `alpha_i` is homogeneous of degree `1 - i` in the
/// negative-degree generators; over the rationals it is a plain constant.
pub fn orientation_series(rng: &mut Rng64, coeffs: &Ring, precision: usize) -> Result<PowerSeries> {
    let neg: Vec<(usize, u32)> = coeffs
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.degree < 0)
        .map(|(i, g)| (i, g.degree.unsigned_abs()))
        .collect();
    let weights: Vec<u32> = neg.iter().map(|&(_, w)| w).collect();
    let mut c = vec![coeffs.zero(), coeffs.one()];
    for i in 2..=precision {
        let alpha = if neg.is_empty() {
            if rng.gen_bool(0.8) {
                coeffs.constant(coefficient(rng))
            } else {
                coeffs.zero()
            }
        } else {
            let mut a = coeffs.zero();
            for m in monomials_of_weight(&weights, i as u32 - 1) {
                if rng.gen_bool(0.6) {
                    let mut exps = vec![0u32; coeffs.generators().len()];
                    for (k, &(g, _)) in neg.iter().enumerate() {
                        exps[g] = m[k];
                    }
                    a = a + RingElement::from_exponents(coeffs, exps, coefficient(rng));
                }
            }
            a
        };
        c.push(alpha);
    }
    PowerSeries::new(coeffs, c, precision)
}

/// A random admissible morphism onto `target`: its source law is the
/// transport of `target` along a random orientation series.
pub fn morphism(rng: &mut Rng64, target: &FormalGroupLaw) -> Result<OrientationMorphism> {
    let psi = orientation_series(rng, target.ring(), target.cap() as usize)?;
    OrientationMorphism::twisted_source(target, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{Generator, GradedRing};

    #[test]
    fn seeded_and_deterministic() {
        let r = GradedRing::new(vec![Generator::new("x", 1), Generator::new("y", 1)], 4).unwrap();
        let a = element(&mut rng(7), &r, &["x", "y"], 4).unwrap();
        let b = element(&mut rng(7), &r, &["x", "y"], 4).unwrap();
        assert_eq!(a, b);
        let v = bundle(&mut rng(3), &r, &["x", "y"], 2).unwrap();
        assert_eq!(v.rank(), 2);
        assert!(v.plus_roots().iter().all(RingElement::is_nilpotent));
    }

    #[test]
    fn random_morphisms_are_admissible() {
        let g = FormalGroupLaw::universal(4).unwrap();
        let mut r = rng(11);
        for _ in 0..3 {
            let m = morphism(&mut r, &g).unwrap();
            assert!(m.compatibility_defect().unwrap().is_none());
            assert!(m.psi().coeffs().iter().enumerate().skip(1).all(|(i, a)| a.is_homogeneous(1 - i as i64) || a.is_zero()));
        }
    }
}
