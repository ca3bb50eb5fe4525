use std::fmt;

use crate::coeffring::{same_ring, Generator, Ring, RingElement};
use crate::{Error, Result};

use super::VirtualBundle;

/// Cohomology of the projective bundle `P(E)` over a base: the base ring
/// with one more degree-one generator `c = c_1(O(-1))`, modulo
/// `sum_i c_i(E) (-c)^(n-i) = 0`. Normal forms have `c`-degree below `n`.
#[derive(Clone)]
pub struct ProjectiveBundleRing {
    base: Ring,
    total: Ring,
    var: String,
    var_idx: usize,
    bundle: VirtualBundle,
    /// `relation[k]` is the base coefficient of `c^k`.
    relation: Vec<RingElement>,
}

impl ProjectiveBundleRing {
    pub fn new(bundle: &VirtualBundle, var: &str) -> Result<Self> {
        let base = bundle.ring().clone();
        let total = base.extend(vec![Generator::new(var, 1)])?;
        Self::with_total(bundle, var, &total)
    }

    /// Same, over an existing total ring containing the base generators and
    /// `var`; lets several projective bundles share one ring.
    pub fn with_total(bundle: &VirtualBundle, var: &str, total: &Ring) -> Result<Self> {
        let roots = bundle.effective_roots()?;
        let n = roots.len();
        if n == 0 {
            return Err(Error::InvalidArgument("projective bundle of a rank-0 bundle".into()));
        }
        let var_idx = total.index_of(var).ok_or_else(|| Error::UnknownGenerator(var.to_string()))?;
        let chern = bundle.total_chern()?;
        let relation = (0..=n)
            .map(|k| {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                chern.coefficient(n - k).scale(&crate::coeffring::integer(sign))
            })
            .collect();
        Ok(ProjectiveBundleRing {
            base: bundle.ring().clone(),
            total: total.clone(),
            var: var.to_string(),
            var_idx,
            bundle: VirtualBundle::split(bundle.ring(), roots)?,
            relation,
        })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn total(&self) -> &Ring {
        &self.total
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn bundle(&self) -> &VirtualBundle {
        &self.bundle
    }

    /// Rank of `E`; the fibres are `P^(n-1)`.
    pub fn rank(&self) -> usize {
        self.relation.len() - 1
    }

    pub fn hyperplane(&self) -> RingElement {
        self.total.generator_at(self.var_idx)
    }

    /// The defining relation as an element of the total ring.
    pub fn relation(&self) -> Result<RingElement> {
        self.from_coordinates(&self.relation)
    }

    /// Base coefficients of `c^0, c^1, ...` of an unreduced element.
    fn expand(&self, u: &RingElement) -> Result<Vec<RingElement>> {
        if !same_ring(u.ring(), &self.total) {
            return Err(Error::RingMismatch);
        }
        let m = u.max_exponent(self.var_idx);
        (0..=m).map(|k| u.coefficient_of(self.var_idx, k).embed(&self.base)).collect()
    }

    pub fn from_coordinates(&self, coords: &[RingElement]) -> Result<RingElement> {
        let c = self.hyperplane();
        let mut out = self.total.zero();
        let mut power = self.total.one();
        for a in coords {
            out = out + &a.embed(&self.total)? * &power;
            power = &power * &c;
        }
        Ok(out)
    }

    /// Coordinates of the normal form in the basis `1, c, ..., c^(n-1)`.
    pub fn coordinates(&self, u: &RingElement) -> Result<Vec<RingElement>> {
        let mut a = self.expand(u)?;
        let n = self.rank();
        let lead_sign = crate::coeffring::integer(if n % 2 == 0 { 1 } else { -1 });
        for k in (n..a.len()).rev() {
            if a[k].is_zero() {
                continue;
            }
            let q = a[k].scale(&lead_sign);
            for j in 0..=n {
                let idx = k - n + j;
                a[idx] = &a[idx] - &(&q * &self.relation[j]);
            }
        }
        a.resize(n, self.base.zero());
        Ok(a)
    }

    pub fn reduce(&self, u: &RingElement) -> Result<RingElement> {
        self.from_coordinates(&self.coordinates(u)?)
    }

    /// Restriction to a sub-projective bundle sharing this total ring.
    pub fn restrict(&self, sub: &ProjectiveBundleRing, u: &RingElement) -> Result<RingElement> {
        if !same_ring(&self.total, &sub.total) || self.var != sub.var {
            return Err(Error::RingMismatch);
        }
        self.bundle.quotient(&sub.bundle)?;
        sub.reduce(u)
    }
}

impl fmt::Debug for ProjectiveBundleRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjectiveBundleRing(P({}), {})", self.bundle, self.var)
    }
}

/// `th(E) = sum_i c_i(E) (-c)^(r-i)` in `P(E + 1)`.
pub fn thom_class(e: &VirtualBundle, p: &ProjectiveBundleRing) -> Result<RingElement> {
    let mut expected = e.effective_roots()?;
    expected.push(e.ring().zero());
    if !same_ring(e.ring(), &p.base) || VirtualBundle::split(e.ring(), expected)? != p.bundle {
        return Err(Error::RingMismatch);
    }
    thom_polynomial(e, &p.hyperplane())
}

/// `sum_i c_i(E) (-c)^(r-i)` for an effective `E` whose ring embeds in the
/// ring of `c`.
pub fn thom_polynomial(e: &VirtualBundle, c: &RingElement) -> Result<RingElement> {
    let r = e.effective_roots()?.len();
    let total = c.ring();
    let chern = e.total_chern()?;
    let minus_c = -c;
    let mut th = total.zero();
    for i in 0..=r {
        th = th + &chern.coefficient(i).embed(total)? * &minus_c.pow((r - i) as u32);
    }
    Ok(th)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::GradedRing;

    fn base(names: &[&str], cap: u32) -> Ring {
        GradedRing::new(names.iter().map(|n| Generator::new(*n, 1)).collect(), cap).unwrap()
    }

    #[test]
    fn point_and_line() {
        let b = base(&[], 5);
        let p0 = ProjectiveBundleRing::new(&VirtualBundle::trivial(&b, 1), "c").unwrap();
        assert!(p0.reduce(&p0.hyperplane()).unwrap().is_zero());
        let p1 = ProjectiveBundleRing::new(&VirtualBundle::trivial(&b, 2), "c").unwrap();
        let c = p1.hyperplane();
        assert!(p1.reduce(&(&c * &c)).unwrap().is_zero());
        assert_eq!(p1.reduce(&c).unwrap(), c);
    }

    #[test]
    fn twisted_line_relation() {
        let b = base(&["x"], 6);
        let x = b.generator("x").unwrap();
        let e = VirtualBundle::split(&b, vec![x.clone(), b.zero()]).unwrap();
        let p = ProjectiveBundleRing::new(&e, "c").unwrap();
        assert_eq!(p.relation().unwrap().to_string(), "-x*c + c^2");
        let c = p.hyperplane();
        let xc = &x.embed(p.total()).unwrap() * &c;
        assert_eq!(p.reduce(&(&c * &c)).unwrap(), xc);
        // c^3 two ways: c * (c^2) and (c^2) * c after partial reduction
        let c3 = p.reduce(&c.pow(3)).unwrap();
        let alt = p.reduce(&(&p.reduce(&(&c * &c)).unwrap() * &c)).unwrap();
        assert_eq!(c3, alt);
        let xt = x.embed(p.total()).unwrap();
        assert_eq!(c3, &(&xt * &xt) * &c);
    }

    #[test]
    fn thom_class_examples() {
        let b = base(&["x", "x1", "x2"], 6);
        let triv = VirtualBundle::trivial(&b, 1);
        let p = ProjectiveBundleRing::new(&triv.direct_sum(&VirtualBundle::trivial(&b, 1)).unwrap(), "c").unwrap();
        assert_eq!(thom_class(&triv, &p).unwrap().to_string(), "-c");

        let l = VirtualBundle::line(&b.generator("x").unwrap()).unwrap();
        let p = ProjectiveBundleRing::new(&l.direct_sum(&VirtualBundle::trivial(&b, 1)).unwrap(), "c").unwrap();
        assert_eq!(thom_class(&l, &p).unwrap().to_string(), "x - c");

        let e = VirtualBundle::split(&b, vec![b.generator("x1").unwrap(), b.generator("x2").unwrap()]).unwrap();
        let p = ProjectiveBundleRing::new(&e.direct_sum(&VirtualBundle::trivial(&b, 1)).unwrap(), "c").unwrap();
        let th = thom_class(&e, &p).unwrap();
        let c = p.hyperplane();
        let x1 = b.generator("x1").unwrap().embed(p.total()).unwrap();
        let x2 = b.generator("x2").unwrap().embed(p.total()).unwrap();
        assert_eq!(th, (&c - &x1) * (&c - &x2));
        // vanishes on P(E)
        let sub = ProjectiveBundleRing::with_total(&e, "c", p.total()).unwrap();
        assert!(p.restrict(&sub, &th).unwrap().is_zero());
    }

    #[test]
    fn rejects_virtual_bundle() {
        let b = base(&["x"], 4);
        let v = VirtualBundle::line(&b.generator("x").unwrap()).unwrap().negate();
        assert!(matches!(ProjectiveBundleRing::new(&v, "c"), Err(Error::NonEffectiveBundle)));
    }
}
