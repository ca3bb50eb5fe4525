use std::collections::BTreeMap;
use std::fmt;

use super::{FglKind, FormalGroupLaw};
use crate::coeffring::{same_ring, PowerSeries, RingElement};
use crate::{Error, Result};

/// A series `psi(t) = t + sum a_i t^i` carrying Chern classes of the target
/// theory to the source theory: `c = psi(d)`. Compatibility with the group
/// laws reads `psi(G(x, y)) = F(psi(x), psi(y))`, with `F` the source law
/// and `G` the target law.
#[derive(Clone, Debug)]
pub struct OrientationMorphism {
    source: FormalGroupLaw,
    target: FormalGroupLaw,
    psi: PowerSeries,
}

impl OrientationMorphism {
    pub fn new(source: &FormalGroupLaw, target: &FormalGroupLaw, psi: PowerSeries) -> Result<Self> {
        check_shape(&psi)?;
        if !same_ring(source.ring(), target.ring()) || !same_ring(psi.ring(), source.ring()) {
            return Err(Error::RingMismatch);
        }
        let m = OrientationMorphism { source: source.clone(), target: target.clone(), psi };
        if let Some(w) = m.compatibility_defect()? {
            return Err(Error::IncompatibleMorphism(w.to_string()));
        }
        Ok(m)
    }

    pub(crate) fn unchecked(source: &FormalGroupLaw, target: &FormalGroupLaw, psi: PowerSeries) -> Self {
        OrientationMorphism { source: source.clone(), target: target.clone(), psi }
    }

    pub fn identity(law: &FormalGroupLaw) -> Self {
        let psi = PowerSeries::variable(law.ring(), law.cap() as usize);
        OrientationMorphism { source: law.clone(), target: law.clone(), psi }
    }

    pub fn source(&self) -> &FormalGroupLaw {
        &self.source
    }

    pub fn target(&self) -> &FormalGroupLaw {
        &self.target
    }

    pub fn psi(&self) -> &PowerSeries {
        &self.psi
    }

    pub fn is_identity(&self) -> bool {
        self.psi.coeffs().iter().skip(2).all(RingElement::is_zero)
    }

    /// `psi(u)` for a nilpotent class `u`.
    pub fn apply(&self, u: &RingElement) -> Result<RingElement> {
        if !u.is_nilpotent() {
            return Err(Error::NotNilpotent(u.to_string()));
        }
        self.psi.evaluate(u)
    }

    /// Leading part of `psi(G(x, y)) - F(psi(x), psi(y))`, if nonzero.
    pub fn compatibility_defect(&self) -> Result<Option<RingElement>> {
        let cap = self.source.cap().min(self.target.cap());
        let ring = self.source.scratch_ring(&["x", "y"])?.with_cap(cap)?;
        let x = ring.generator("x")?;
        let y = ring.generator("y")?;
        let lhs = self.psi.evaluate(&self.target.formal_sum(&x, &y)?)?;
        let rhs = self.source.formal_sum(&self.psi.evaluate(&x)?, &self.psi.evaluate(&y)?)?;
        let d = lhs - rhs;
        Ok(if d.is_zero() { None } else { Some(d.leading_part()) })
    }

    /// `self: F -> G` followed by `other: G -> H`; the series is
    /// `psi_self(psi_other(t))`.
    pub fn compose(&self, other: &OrientationMorphism) -> Result<Self> {
        if self.target != other.source {
            return Err(Error::IncompatibleMorphism("target of the first is not the source of the second".into()));
        }
        let n = self.psi.precision().min(other.psi.precision());
        let psi = self.psi.with_precision(n).compose(&other.psi.with_precision(n))?;
        OrientationMorphism::new(&self.source, &other.target, psi)
    }

    /// The source law that makes `psi` a morphism onto `target`:
    /// `F(x, y) = psi(G(psi^-1(x), psi^-1(y)))`.
    pub fn twisted_source(target: &FormalGroupLaw, psi: PowerSeries) -> Result<Self> {
        check_shape(&psi)?;
        if !same_ring(psi.ring(), target.ring()) {
            return Err(Error::RingMismatch);
        }
        let cap = target.cap();
        let psi = psi.with_precision(cap as usize);
        let inv = psi.reversion()?;
        let ring = target.scratch_ring(&["x", "y"])?;
        let x = ring.generator("x")?;
        let y = ring.generator("y")?;
        let f = psi.evaluate(&target.formal_sum(&inv.evaluate(&x)?, &inv.evaluate(&y)?)?)?;
        let (xi, yi) = (ring.index_of("x").unwrap(), ring.index_of("y").unwrap());
        let mut table = BTreeMap::new();
        for i in 1..cap {
            let fx = f.coefficient_of(xi, i);
            for j in 1..=(cap - i) {
                let a = fx.coefficient_of(yi, j).embed(target.ring())?;
                if !a.is_zero() {
                    table.insert((i, j), a);
                }
            }
        }
        let mut source = FormalGroupLaw::custom(target.ring(), table)?;
        source.kind = FglKind::Custom;
        OrientationMorphism::new(&source, target, psi)
    }
}

fn check_shape(psi: &PowerSeries) -> Result<()> {
    let ok = psi.precision() >= 1 && psi.coeff(0).is_zero() && psi.coeff(1).is_one();
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidSeries(format!("orientation series must be t + O(t^2), got {psi}")))
    }
}

impl fmt::Display for OrientationMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} via {}", self.source.kind(), self.target.kind(), self.psi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{GradedRing, Ring};
    use crate::fgl::beta_ring;

    fn q(cap: u32) -> Ring {
        GradedRing::new(vec![], cap).unwrap()
    }

    #[test]
    fn identity_is_valid() {
        let r = q(5);
        let add = FormalGroupLaw::additive(&r);
        let m = OrientationMorphism::new(&add, &add, PowerSeries::variable(&r, 5)).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn chern_character_is_valid() {
        let r = q(6);
        let mult = FormalGroupLaw::multiplicative(&r, &r.one()).unwrap();
        let add = FormalGroupLaw::additive(&r);
        let psi = PowerSeries::one_minus_exp_neg(&r, 6);
        assert!(OrientationMorphism::new(&mult, &add, psi).is_ok());
    }

    #[test]
    fn mismatched_laws_give_degree_two_witness() {
        let r = q(4);
        let mult = FormalGroupLaw::multiplicative(&r, &r.one()).unwrap();
        let add = FormalGroupLaw::additive(&r);
        let err = OrientationMorphism::new(&add, &mult, PowerSeries::variable(&r, 4)).unwrap_err();
        assert_eq!(err, Error::IncompatibleMorphism("-x*y".into()));
    }

    #[test]
    fn bad_shape_rejected() {
        let r = q(4);
        let add = FormalGroupLaw::additive(&r);
        let psi = PowerSeries::variable(&r, 4).scale(&r.int(2)).unwrap();
        assert!(matches!(OrientationMorphism::new(&add, &add, psi), Err(Error::InvalidSeries(_))));
    }

    #[test]
    fn twisted_source_over_beta() {
        let r = beta_ring(5).unwrap();
        let add = FormalGroupLaw::additive(&r);
        let b = r.generator("beta").unwrap();
        // psi(t) = t - beta t^2
        let mut coeffs = vec![r.zero(), r.one(), -&b];
        coeffs.resize(6, r.zero());
        let psi = PowerSeries::new(&r, coeffs, 5).unwrap();
        let m = OrientationMorphism::twisted_source(&add, psi).unwrap();
        assert!(m.source().check_axioms().unwrap().passed());
        assert!(!m.source().coefficient(1, 1).is_zero());
    }

    #[test]
    fn composition_of_morphisms() {
        let r = q(5);
        let add = FormalGroupLaw::additive(&r);
        let mut c = vec![r.zero(), r.one(), r.int(3), r.int(-1)];
        c.resize(6, r.zero());
        let m2 = OrientationMorphism::twisted_source(&add, PowerSeries::new(&r, c, 5).unwrap()).unwrap();
        let mid = m2.source().clone();
        let mut c = vec![r.zero(), r.one(), r.int(1)];
        c.resize(6, r.zero());
        let m1 = OrientationMorphism::twisted_source(&mid, PowerSeries::new(&r, c, 5).unwrap()).unwrap();
        let comp = m1.compose(&m2).unwrap();
        assert_eq!(comp.target(), &add);
    }
}
