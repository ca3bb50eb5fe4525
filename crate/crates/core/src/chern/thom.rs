use std::fmt;

use crate::coeffring::{same_ring, Ring, RingElement};
use crate::{Error, Result};

use super::VirtualBundle;

/// Cohomology of the Thom space of `v`: free of rank one over the base with
/// basis `t_v`, of degree `rank(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThomModule {
    base: Ring,
    bundle: VirtualBundle,
}

impl ThomModule {
    pub fn new(base: &Ring, bundle: &VirtualBundle) -> Result<Self> {
        if !same_ring(base, bundle.ring()) {
            return Err(Error::RingMismatch);
        }
        Ok(ThomModule { base: base.clone(), bundle: bundle.reduced() })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn bundle(&self) -> &VirtualBundle {
        &self.bundle
    }

    pub fn degree(&self) -> i64 {
        self.bundle.rank()
    }

    pub fn generator(&self) -> ThomElement {
        ThomElement { coeff: self.base.one(), bundle: self.bundle.clone() }
    }

    pub fn element(&self, coeff: &RingElement) -> Result<ThomElement> {
        if !same_ring(coeff.ring(), &self.base) {
            return Err(Error::RingMismatch);
        }
        Ok(ThomElement { coeff: coeff.clone(), bundle: self.bundle.clone() })
    }
}

/// `coeff * t_v`.
#[derive(Clone, PartialEq)]
pub struct ThomElement {
    coeff: RingElement,
    bundle: VirtualBundle,
}

impl ThomElement {
    /// `t_0 = 1`.
    pub fn unit(base: &Ring) -> Self {
        ThomElement { coeff: base.one(), bundle: VirtualBundle::zero(base) }
    }

    pub fn coeff(&self) -> &RingElement {
        &self.coeff
    }

    pub fn bundle(&self) -> &VirtualBundle {
        &self.bundle
    }

    pub fn degree(&self) -> i64 {
        self.bundle.rank()
    }

    /// True for `1 * t_0`.
    pub fn is_unit(&self) -> bool {
        self.coeff.is_one() && self.bundle.reduced().plus_roots().is_empty() && self.bundle.reduced().minus_roots().is_empty()
    }

    pub fn scale(&self, a: &RingElement) -> Result<Self> {
        Ok(ThomElement { coeff: self.coeff.checked_mul(a)?, bundle: self.bundle.clone() })
    }
}

/// `(a t_v)(b t_w) = ab t_(v+w)`.
pub fn thom_mul(a: &ThomElement, b: &ThomElement) -> Result<ThomElement> {
    let coeff = a.coeff.checked_mul(&b.coeff)?;
    let bundle = a.bundle.direct_sum(&b.bundle)?.reduced();
    Ok(ThomElement { coeff, bundle })
}

impl fmt::Display for ThomElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.bundle.reduced();
        if r.plus_roots().is_empty() && r.minus_roots().is_empty() {
            return write!(f, "{}", self.coeff);
        }
        if self.coeff.num_terms() > 1 {
            write!(f, "({})*t{}", self.coeff, r)
        } else {
            write!(f, "{}*t{}", self.coeff, r)
        }
    }
}

impl fmt::Debug for ThomElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ThomElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{Generator, GradedRing};

    #[test]
    fn products_of_thom_generators() {
        let r = GradedRing::new(vec![Generator::new("x", 1), Generator::new("y", 1)], 5).unwrap();
        let (x, y) = (r.generator("x").unwrap(), r.generator("y").unwrap());
        let v = VirtualBundle::line(&x).unwrap();
        let w = VirtualBundle::line(&y).unwrap();
        let tv = ThomModule::new(&r, &v).unwrap();
        let tw = ThomModule::new(&r, &w).unwrap();
        let tneg = ThomModule::new(&r, &v.negate()).unwrap();

        assert!(thom_mul(&tv.generator(), &tneg.generator()).unwrap().is_unit());
        let one = ThomElement::unit(&r);
        assert_eq!(thom_mul(&one, &tv.generator()).unwrap(), tv.generator());
        let p = thom_mul(&tv.element(&x).unwrap(), &tw.element(&y).unwrap()).unwrap();
        assert_eq!(p.coeff(), &(&x * &y));
        assert_eq!(p.bundle(), &v.direct_sum(&w).unwrap());
        assert_eq!(p.degree(), 2);
        assert_eq!(p.to_string(), "x*y*t[x, y]");
    }
}
