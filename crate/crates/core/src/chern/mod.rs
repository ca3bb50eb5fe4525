//! Chern-class calculus on bundles given by their Chern roots.
//!
//! A [`VirtualBundle`] is a formal difference of two root lists. Its total
//! Chern class is `prod (1 + r t)` over the positive roots times the inverse
//! of the same product over the negative roots.

mod projective;
mod thom;

use std::fmt;

use crate::coeffring::{same_ring, PowerSeries, Ring, RingElement};
use crate::fgl::FormalGroupLaw;
use crate::report::Report;
use crate::{Error, Result};

pub use projective::{thom_class, thom_polynomial, ProjectiveBundleRing};
pub use thom::{thom_mul, ThomElement, ThomModule};

#[derive(Clone)]
pub struct VirtualBundle {
    ring: Ring,
    plus: Vec<RingElement>,
    minus: Vec<RingElement>,
}

impl VirtualBundle {
    pub fn new(ring: &Ring, plus: Vec<RingElement>, minus: Vec<RingElement>) -> Result<Self> {
        for r in plus.iter().chain(&minus) {
            if !same_ring(r.ring(), ring) {
                return Err(Error::RingMismatch);
            }
            if !r.is_zero() && !r.is_nilpotent() {
                return Err(Error::InvalidRoot(r.to_string()));
            }
        }
        Ok(VirtualBundle { ring: ring.clone(), plus, minus })
    }

    pub fn zero(ring: &Ring) -> Self {
        VirtualBundle { ring: ring.clone(), plus: Vec::new(), minus: Vec::new() }
    }

    pub fn line(root: &RingElement) -> Result<Self> {
        Self::new(root.ring(), vec![root.clone()], Vec::new())
    }

    /// Direct sum of line bundles with the given roots.
    pub fn split(ring: &Ring, roots: Vec<RingElement>) -> Result<Self> {
        Self::new(ring, roots, Vec::new())
    }

    pub fn trivial(ring: &Ring, rank: usize) -> Self {
        VirtualBundle { ring: ring.clone(), plus: vec![ring.zero(); rank], minus: Vec::new() }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn plus_roots(&self) -> &[RingElement] {
        &self.plus
    }

    pub fn minus_roots(&self) -> &[RingElement] {
        &self.minus
    }

    pub fn rank(&self) -> i64 {
        self.plus.len() as i64 - self.minus.len() as i64
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut plus = self.plus.clone();
        plus.extend(other.plus.iter().cloned());
        let mut minus = self.minus.clone();
        minus.extend(other.minus.iter().cloned());
        Ok(VirtualBundle { ring: self.ring.clone(), plus, minus })
    }

    pub fn negate(&self) -> Self {
        VirtualBundle { ring: self.ring.clone(), plus: self.minus.clone(), minus: self.plus.clone() }
    }

    /// Cancels roots that occur on both sides and sorts both lists.
    pub fn reduced(&self) -> Self {
        let mut plus = sorted(&self.plus);
        let mut minus = Vec::new();
        for r in sorted(&self.minus) {
            match plus.iter().position(|p| *p == r) {
                Some(i) => {
                    plus.remove(i);
                }
                None => minus.push(r),
            }
        }
        VirtualBundle { ring: self.ring.clone(), plus, minus }
    }

    pub fn is_effective(&self) -> bool {
        self.reduced().minus.is_empty()
    }

    /// Roots of an effective bundle after cancellation.
    pub fn effective_roots(&self) -> Result<Vec<RingElement>> {
        let r = self.reduced();
        if !r.minus.is_empty() {
            return Err(Error::NonEffectiveBundle);
        }
        Ok(r.plus)
    }

    /// `self - sub` when the roots of `sub` form a sub-multiset of those of
    /// `self`.
    pub fn quotient(&self, sub: &Self) -> Result<Self> {
        let mut rest = self.effective_roots()?;
        for r in sub.effective_roots()? {
            match rest.iter().position(|p| *p == r) {
                Some(i) => {
                    rest.remove(i);
                }
                None => return Err(Error::NotSubBundle(sub.to_string(), self.to_string())),
            }
        }
        Ok(VirtualBundle { ring: self.ring.clone(), plus: rest, minus: Vec::new() })
    }

    /// Dual bundle: each root replaced by its formal inverse.
    pub fn dual(&self, law: &FormalGroupLaw) -> Result<Self> {
        let inv = |rs: &[RingElement]| rs.iter().map(|r| law.formal_inverse(r)).collect::<Result<Vec<_>>>();
        Ok(VirtualBundle { ring: self.ring.clone(), plus: inv(&self.plus)?, minus: inv(&self.minus)? })
    }

    /// Tensor product through pairwise formal sums of roots.
    pub fn tensor(&self, law: &FormalGroupLaw, other: &Self) -> Result<Self> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (a_side, a_sign) in [(&self.plus, true), (&self.minus, false)] {
            for (b_side, b_sign) in [(&other.plus, true), (&other.minus, false)] {
                for a in a_side {
                    for b in b_side {
                        let s = law.formal_sum(a, b)?;
                        if a_sign == b_sign {
                            plus.push(s);
                        } else {
                            minus.push(s);
                        }
                    }
                }
            }
        }
        Ok(VirtualBundle { ring: self.ring.clone(), plus, minus })
    }

    /// Base change: applies a substitution to every root.
    pub fn substitute(&self, assignment: &[(&str, RingElement)], target: &Ring) -> Result<Self> {
        let sub = |rs: &[RingElement]| rs.iter().map(|r| r.substitute(assignment, target)).collect::<Result<Vec<_>>>();
        Self::new(target, sub(&self.plus)?, sub(&self.minus)?)
    }

    pub fn embed(&self, target: &Ring) -> Result<Self> {
        self.substitute(&[], target)
    }

    pub fn total_chern(&self) -> Result<TotalChern> {
        let n = (self.ring.degree_cap() as usize).max(self.plus.len());
        let one_plus = |r: &RingElement| {
            let mut c = vec![self.ring.one(), r.clone()];
            c.truncate(n + 1);
            PowerSeries::new(&self.ring, c, n)
        };
        let mut pos = PowerSeries::one(&self.ring, n);
        for r in &self.plus {
            pos = pos.mul(&one_plus(r)?)?;
        }
        let mut neg = PowerSeries::one(&self.ring, n);
        for r in &self.minus {
            neg = neg.mul(&one_plus(r)?)?;
        }
        Ok(TotalChern { series: pos.mul(&neg.reciprocal()?)? })
    }

    /// `c_i`, zero outside the computed range.
    pub fn chern_class(&self, i: usize) -> Result<RingElement> {
        let c = self.total_chern()?;
        Ok(c.coefficient(i))
    }
}

fn sorted(rs: &[RingElement]) -> Vec<RingElement> {
    let mut v = rs.to_vec();
    v.sort_by(RingElement::canonical_cmp);
    v
}

impl PartialEq for VirtualBundle {
    fn eq(&self, other: &Self) -> bool {
        if !same_ring(&self.ring, &other.ring) {
            return false;
        }
        let (a, b) = (self.reduced(), other.reduced());
        a.plus == b.plus && a.minus == b.minus
    }
}

impl fmt::Display for VirtualBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |rs: &[RingElement]| rs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "[{}]", list(&self.plus))?;
        if !self.minus.is_empty() {
            write!(f, " - [{}]", list(&self.minus))?;
        }
        Ok(())
    }
}

impl fmt::Debug for VirtualBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VirtualBundle({self})")
    }
}

/// Total Chern class `sum c_i t^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct TotalChern {
    series: PowerSeries,
}

impl TotalChern {
    pub fn coefficient(&self, i: usize) -> RingElement {
        if i > self.series.precision() {
            return self.series.ring().zero();
        }
        self.series.coeff(i).clone()
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(TotalChern { series: self.series.mul(&other.series)? })
    }

    /// First coefficient where the two classes differ.
    pub fn first_difference(&self, other: &Self) -> Result<Option<RingElement>> {
        let n = self.series.precision().max(other.series.precision());
        for i in 0..=n {
            let d = self.coefficient(i).checked_sub(&other.coefficient(i))?;
            if !d.is_zero() {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for TotalChern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.series.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if c.num_terms() == 1 => (true, rest.to_string()),
                _ => (false, text),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let body = if c.num_terms() > 1 && k > 0 { format!("({body})") } else { body };
            match k {
                0 => f.write_str(&body)?,
                _ => {
                    if body != "1" {
                        write!(f, "{body}*")?;
                    }
                    f.write_str("t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TotalChern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TotalChern({self})")
    }
}

/// `c_t(v + w) = c_t(v) c_t(w)`.
pub fn whitney_check(v: &VirtualBundle, w: &VirtualBundle) -> Report {
    let cap = v.ring().degree_cap();
    Report::timed("whitney", cap, || {
        let lhs = v.direct_sum(w)?.total_chern()?;
        let rhs = v.total_chern()?.mul(&w.total_chern()?)?;
        lhs.first_difference(&rhs)
    })
}

/// `c_i(v) = 0` above the rank of an effective `v`, and `c_t(v) c_t(-v) = 1`.
pub fn nilpotence_check(v: &VirtualBundle) -> Report {
    let cap = v.ring().degree_cap();
    Report::timed("nilpotence", cap, || {
        let c = v.total_chern()?;
        if v.is_effective() {
            let r = v.rank() as usize;
            for i in r + 1..=c.series().precision() {
                if !c.coefficient(i).is_zero() {
                    return Ok(Some(c.coefficient(i)));
                }
            }
        }
        let one = TotalChern { series: PowerSeries::one(v.ring(), c.series().precision()) };
        c.mul(&v.negate().total_chern()?)?.first_difference(&one)
    })
}

/// Freeness of the cohomology of `P(E)` on `1, c, ..., c^(n-1)`: the basis is
/// reduced, the relation reduces to zero, and reduction is a ring map.
pub fn projective_freeness_check(e: &VirtualBundle, samples: &[(RingElement, RingElement)], var: &str) -> Report {
    let cap = e.ring().degree_cap();
    Report::timed("pb_freeness", cap, || {
        let p = ProjectiveBundleRing::new(e, var)?;
        let c = p.hyperplane();
        for k in 0..p.rank() {
            let ck = c.pow(k as u32);
            if !ck.is_zero() {
                if let Some(d) = crate::report::defect(&p.reduce(&ck)?, &ck)? {
                    return Ok(Some(d));
                }
            }
        }
        let rel = p.reduce(&p.relation()?)?;
        if !rel.is_zero() {
            return Ok(Some(rel));
        }
        for (a, b) in samples {
            let (a, b) = (a.embed(p.total())?, b.embed(p.total())?);
            let lhs = p.reduce(&(&a * &b))?;
            let rhs = p.reduce(&(&p.reduce(&a)? * &p.reduce(&b)?))?;
            if let Some(d) = crate::report::defect(&lhs, &rhs)? {
                return Ok(Some(d));
            }
        }
        Ok(None)
    })
}

/// `t_v t_w = t_(v+w)` and `t_v t_(-v) = 1` in the Thom modules, together with
/// `th(v) th(w) = th(v + w)` for the Thom polynomials of effective bundles.
pub fn thom_mul_check(v: &VirtualBundle, w: &VirtualBundle) -> Report {
    let cap = v.ring().degree_cap();
    Report::timed("thom_mul", cap, || {
        let ring = v.ring();
        let tv = ThomModule::new(ring, v)?.generator();
        let tw = ThomModule::new(ring, w)?.generator();
        let sum = v.direct_sum(w)?;
        let product = thom_mul(&tv, &tw)?;
        if product != ThomModule::new(ring, &sum)?.generator() {
            return Err(Error::Consistency(format!("t_v t_w = {product}, expected generator of {sum}")));
        }
        let inverse = thom_mul(&tv, &ThomModule::new(ring, &v.negate())?.generator())?;
        if !inverse.is_unit() {
            return Err(Error::Consistency(format!("t_v t_-v = {inverse}")));
        }
        if v.is_effective() && w.is_effective() {
            let var = crate::gysin::fresh_name(ring, "c");
            let total = ring.extend(vec![crate::coeffring::Generator::new(var.as_str(), 1)])?;
            let c = total.generator(&var)?;
            let lhs = &thom_polynomial(v, &c)? * &thom_polynomial(w, &c)?;
            return crate::report::defect(&lhs, &thom_polynomial(&sum, &c)?);
        }
        Ok(None)
    })
}

/// `c_1(L_1 (x) L_2) = F(c_1(L_1), c_1(L_2))`.
pub fn c1_tensor(law: &FormalGroupLaw, x1: &RingElement, x2: &RingElement) -> Result<RingElement> {
    law.formal_sum(x1, x2)
}

/// Top Chern class `c_e(v)`, `e` the rank.
pub fn euler_class(v: &VirtualBundle) -> Result<RingElement> {
    let e = v.rank();
    if e < 0 {
        return Err(Error::NegativeRank(e));
    }
    v.chern_class(e as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{Generator, GradedRing};

    fn ring(names: &[&str], nilp: u32, cap: u32) -> Ring {
        GradedRing::new(names.iter().map(|n| Generator::nilpotent(*n, 1, nilp)).collect(), cap).unwrap()
    }

    #[test]
    fn total_chern_examples() {
        let r = ring(&["x", "x1", "x2"], 3, 6);
        let x = r.generator("x").unwrap();
        assert_eq!(VirtualBundle::line(&x).unwrap().total_chern().unwrap().to_string(), "1 + x*t");
        let v = VirtualBundle::split(&r, vec![r.generator("x1").unwrap(), r.generator("x2").unwrap()]).unwrap();
        assert_eq!(v.total_chern().unwrap().to_string(), "1 + (x1 + x2)*t + x1*x2*t^2");
        let neg = VirtualBundle::line(&x).unwrap().negate();
        assert_eq!(neg.total_chern().unwrap().to_string(), "1 - x*t + x^2*t^2");
    }

    #[test]
    fn whitney_examples() {
        let r = ring(&["x1", "x2"], 3, 6);
        let v = VirtualBundle::line(&r.generator("x1").unwrap()).unwrap();
        let w = VirtualBundle::line(&r.generator("x2").unwrap()).unwrap();
        assert!(whitney_check(&v, &w).passed());
        assert!(whitney_check(&v, &VirtualBundle::zero(&r)).passed());
        let cancel = v.direct_sum(&v.negate()).unwrap();
        assert_eq!(cancel.total_chern().unwrap().to_string(), "1");
        assert!(cancel.reduced().plus_roots().is_empty());
    }

    #[test]
    fn euler_examples() {
        let r = ring(&["x1", "x2"], 3, 6);
        let (x1, x2) = (r.generator("x1").unwrap(), r.generator("x2").unwrap());
        assert_eq!(euler_class(&VirtualBundle::line(&x1).unwrap()).unwrap(), x1);
        assert!(euler_class(&VirtualBundle::zero(&r)).unwrap().is_one());
        let v = VirtualBundle::split(&r, vec![x1.clone(), x2.clone()]).unwrap();
        assert_eq!(euler_class(&v).unwrap(), &x1 * &x2);
        assert_eq!(euler_class(&v.negate()), Err(Error::NegativeRank(-2)));
    }

    #[test]
    fn tensor_and_dual() {
        let r = ring(&["x1", "x2"], 2, 6);
        let (x1, x2) = (r.generator("x1").unwrap(), r.generator("x2").unwrap());
        let mult = FormalGroupLaw::multiplicative(&r, &r.one()).unwrap();
        assert_eq!(c1_tensor(&mult, &x1, &x2).unwrap().to_string(), "x1 + x2 - x1*x2");
        assert_eq!(c1_tensor(&mult, &x1, &r.zero()).unwrap(), x1);
        let l = VirtualBundle::line(&x1).unwrap();
        let d = l.dual(&mult).unwrap();
        let t = l.tensor(&mult, &d).unwrap();
        assert!(t.plus_roots()[0].is_zero());
    }

    #[test]
    fn quotient_requires_sub_multiset() {
        let r = ring(&["x1", "x2"], 3, 6);
        let (x1, x2) = (r.generator("x1").unwrap(), r.generator("x2").unwrap());
        let f = VirtualBundle::split(&r, vec![x1.clone(), x2.clone()]).unwrap();
        let g = VirtualBundle::line(&x1).unwrap();
        assert_eq!(f.quotient(&g).unwrap(), VirtualBundle::line(&x2).unwrap());
        assert!(matches!(g.quotient(&f), Err(Error::NotSubBundle(_, _))));
    }

    #[test]
    fn roots_must_be_nilpotent() {
        let r = GradedRing::new(vec![Generator::new("a", -1)], 4).unwrap();
        let a = r.generator("a").unwrap();
        assert!(matches!(VirtualBundle::line(&a), Err(Error::InvalidRoot(_))));
    }
}
