use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{format_coefficient, same_ring, Coefficient, Ring};
use crate::{Error, Result};

/// Exponent vector together with its cached degrees.
///
/// Term order: degree carried by positive-degree generators, then total
/// degree, then lexicographic with earlier generators first (`x^2`, `x*y`,
/// `y^2`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pos_degree: u32,
    degree: i64,
    exps: Box<[u32]>,
}

impl Monomial {
    pub(super) fn new(pos_degree: u32, degree: i64, exps: Box<[u32]>) -> Self {
        Monomial { pos_degree, degree, exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Degree contributed by positive-degree generators; this is what the
    /// ring's cap bounds.
    pub fn pos_degree(&self) -> u32 {
        self.pos_degree
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|e| *e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pos_degree
            .cmp(&other.pos_degree)
            .then(self.degree.cmp(&other.degree))
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of a [`super::GradedRing`] in canonical form: no zero
/// coefficients, no truncated monomials.
#[derive(Clone)]
pub struct RingElement {
    ring: Ring,
    terms: BTreeMap<Monomial, BigRational>,
}

impl RingElement {
    pub fn zero(ring: &Ring) -> Self {
        RingElement { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, q: Coefficient) -> Self {
        let mut out = Self::zero(ring);
        if !q.is_zero() {
            let m = ring.monomial(vec![0; ring.generators().len()]).expect("unit monomial");
            out.terms.insert(m, q);
        }
        out
    }

    pub(crate) fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut out = Self::zero(ring);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    /// Builds `q * prod(gen_i ^ e_i)`; truncated monomials give zero.
    pub fn from_exponents(ring: &Ring, exps: Vec<u32>, q: Coefficient) -> Self {
        match ring.monomial(exps) {
            Some(m) => Self::from_terms(ring, [(m, q)]),
            None => Self::zero(ring),
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let cap = self.ring.degree_cap();
        let gens = self.ring.generators();
        let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.pos_degree + m2.pos_degree > cap {
                    continue;
                }
                let mut killed = false;
                let exps: Box<[u32]> = m1
                    .exps
                    .iter()
                    .zip(m2.exps.iter())
                    .zip(gens)
                    .map(|((a, b), g)| {
                        let e = a + b;
                        if matches!(g.nilpotency, Some(k) if e >= k) {
                            killed = true;
                        }
                        e
                    })
                    .collect();
                if killed {
                    continue;
                }
                let m = Monomial::new(m1.pos_degree + m2.pos_degree, m1.degree + m2.degree, exps);
                let c = c1 * c2;
                match acc.entry(m) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += c;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(RingElement { ring: self.ring.clone(), terms: acc })
    }

    /// Multiplication by an exact scalar. Fails in an integer-only ring when
    /// the scalar is not an integer.
    pub fn scalar_mul(&self, q: &Coefficient) -> Result<Self> {
        self.ring.check_division(q)?;
        Ok(self.scale(q))
    }

    pub(crate) fn scale(&self, q: &Coefficient) -> Self {
        if q.is_zero() {
            return Self::zero(&self.ring);
        }
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: i64) -> Self {
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Distinct total degrees present, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self.terms.keys().map(|m| m.degree).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn is_homogeneous(&self, d: i64) -> bool {
        self.terms.keys().all(|m| m.degree == d)
    }

    /// The terms of lowest positive-degree weight; used as the witness of a
    /// failed identity.
    pub fn leading_part(&self) -> Self {
        let Some(first) = self.terms.keys().next() else {
            return self.clone();
        };
        let w = first.pos_degree;
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().take_while(|(m, _)| m.pos_degree == w).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// True when every term contains a generator whose powers vanish, so
    /// that geometric series in this element terminate.
    pub fn is_nilpotent(&self) -> bool {
        let gens = self.ring.generators();
        self.terms.keys().all(|m| m.exps.iter().zip(gens).any(|(e, g)| *e > 0 && g.truncates()))
    }

    pub fn max_exponent(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[idx]).max().unwrap_or(0)
    }

    /// Coefficient of `gen^k`, as an element of the same ring free of `gen`.
    pub fn coefficient_of(&self, idx: usize, k: u32) -> Self {
        let gen_deg = i64::from(self.ring.generators()[idx].degree);
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.exps[idx] != k {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[idx] = 0;
            let shift = gen_deg * i64::from(k);
            let pos = if gen_deg > 0 { m.pos_degree - shift as u32 } else { m.pos_degree };
            out.terms.insert(Monomial::new(pos, m.degree - shift, exps), c.clone());
        }
        out
    }

    /// Divides by a generator; every term must contain it.
    pub fn divide_by_generator(&self, idx: usize) -> Result<Self> {
        let g = &self.ring.generators()[idx];
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.exps[idx] == 0 {
                return Err(Error::NotDivisible(self.to_string(), g.name.clone()));
            }
            let mut exps = m.exps.clone();
            exps[idx] -= 1;
            let d = i64::from(g.degree);
            let pos = if d > 0 { m.pos_degree - d as u32 } else { m.pos_degree };
            out.terms.insert(Monomial::new(pos, m.degree - d, exps), c.clone());
        }
        Ok(out)
    }

    /// Ring homomorphism into `target`: generators named in `assignment` are
    /// replaced by the given values; every other generator maps to the
    /// generator of the same name in `target`.
    pub fn substitute(&self, assignment: &[(&str, RingElement)], target: &Ring) -> Result<Self> {
        if assignment.is_empty() {
            return self.embed(target);
        }
        let gens = self.ring.generators();
        let mut images: Vec<Option<RingElement>> = vec![None; gens.len()];
        for (name, value) in assignment {
            let idx = self.ring.index_of(name).ok_or_else(|| Error::UnknownGenerator((*name).to_string()))?;
            if !same_ring(value.ring(), target) {
                return Err(Error::RingMismatch);
            }
            if target.is_strict_degree() && !value.is_homogeneous(i64::from(gens[idx].degree)) {
                return Err(Error::DegreeMismatch { name: (*name).to_string(), degree: gens[idx].degree });
            }
            images[idx] = Some(value.clone());
        }
        let used: Vec<bool> = (0..gens.len()).map(|i| self.terms.keys().any(|m| m.exps[i] > 0)).collect();
        for (i, g) in gens.iter().enumerate() {
            if images[i].is_none() && used[i] {
                images[i] = Some(target.generator(&g.name)?);
            }
        }
        let mut powers: Vec<Vec<RingElement>> = images
            .into_iter()
            .map(|img| match img {
                Some(v) => vec![target.one(), v],
                None => Vec::new(),
            })
            .collect();
        let mut out = RingElement::zero(target);
        for (m, c) in &self.terms {
            let mut t = RingElement::constant(target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = &mut powers[i];
                while p.len() <= e as usize {
                    let next = &p[p.len() - 1] * &p[1];
                    p.push(next);
                }
                t = &t * &p[e as usize];
                if t.is_zero() {
                    break;
                }
            }
            for (m2, c2) in t.terms {
                out.add_term(m2, c2);
            }
        }
        Ok(out)
    }

    /// Re-expresses this element in `target`, matching generators by name.
    pub fn embed(&self, target: &Ring) -> Result<Self> {
        if same_ring(&self.ring, target) {
            return Ok(RingElement { ring: target.clone(), terms: self.terms.clone() });
        }
        let gens = self.ring.generators();
        let mut map = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            match target.index_of(&g.name) {
                Some(j) => map.push(Some(j)),
                None if self.terms.keys().any(|m| m.exps[i] > 0) => {
                    return Err(Error::UnknownGenerator(g.name.clone()))
                }
                None => map.push(None),
            }
        }
        let n = target.generators().len();
        let mut out = RingElement::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; n];
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    exps[map[i].expect("checked above")] = e;
                }
            }
            if let Some(m2) = target.monomial(exps) {
                out.add_term(m2, c.clone());
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse of an element whose non-constant part is
    /// nilpotent; the geometric series terminates by truncation.
    pub fn series_reciprocal(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let inv0 = self.ring.invert_scalar(&c0)?;
        let rest = self - &RingElement::constant(&self.ring, c0);
        if !rest.is_nilpotent() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        // u = c0 (1 + n) with n = rest / c0; 1/u = inv0 * sum (-n)^k
        let minus_n = rest.scale(&-inv0.clone());
        let mut acc = self.ring.one();
        let mut power = self.ring.one();
        loop {
            power = &power * &minus_n;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.scale(&inv0))
    }

    /// Total order on elements of one ring, used to sort root lists.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let a = self.terms.iter();
        let b = other.terms.iter();
        for ((m1, c1), (m2, c2)) in a.zip(b) {
            let o = m1.cmp(m2).then_with(|| c1.cmp(c2));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }

    fn fmt_monomial(&self, m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, g) in m.exps.iter().zip(self.ring.generators()) {
            if *e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(&g.name)?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for RingElement {}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                f.write_str(&format_coefficient(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", format_coefficient(&a))?;
                }
                self.fmt_monomial(m, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({self})")
    }
}

// Operator forms panic on ring mismatch; use the `checked_*` methods when the
// operands come from untrusted input.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&RingElement> for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                self.$checked(rhs).expect("ring mismatch")
            }
        }
        impl $tr<RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                (&self).$checked(&rhs).expect("ring mismatch")
            }
        }
        impl $tr<&RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                (&self).$checked(rhs).expect("ring mismatch")
            }
        }
        impl $tr<RingElement> for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                self.$checked(&rhs).expect("ring mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

impl std::iter::Sum for RingElement {
    fn sum<I: Iterator<Item = RingElement>>(mut iter: I) -> RingElement {
        let first = iter.next().expect("sum of an empty iterator needs a ring");
        iter.fold(first, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{integer, rational, GradedRing, Generator};
    use super::*;

    fn ring_x(nilp: u32, cap: u32) -> Ring {
        GradedRing::new(vec![Generator::nilpotent("x", 1, nilp)], cap).unwrap()
    }

    #[test]
    fn nilpotent_square_vanishes() {
        let r = ring_x(2, 5);
        let x = r.generator("x").unwrap();
        assert!((&x * &x).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let r = ring_x(3, 5);
        let x = r.generator("x").unwrap();
        let one = r.one();
        let p = (&one + &x) * (&one - &x);
        assert_eq!(p.to_string(), "1 - x^2");
    }

    #[test]
    fn scalar_half() {
        let r = ring_x(3, 5);
        let x = r.generator("x").unwrap();
        let two_x = x.scalar_mul(&integer(2)).unwrap();
        assert_eq!(two_x.scalar_mul(&rational(1, 2)).unwrap(), x);
        let z = r.integer_only(true);
        let xz = z.generator("x").unwrap();
        assert!(matches!(xz.scalar_mul(&rational(1, 2)), Err(Error::IntegerOnly(_))));
    }

    #[test]
    fn ring_mismatch_is_error() {
        let a = ring_x(2, 5).generator("x").unwrap();
        let b = ring_x(3, 5).generator("x").unwrap();
        assert_eq!(a.checked_add(&b).unwrap_err(), Error::RingMismatch);
    }

    #[test]
    fn substitute_expands_with_nilpotents() {
        let src = GradedRing::new(vec![Generator::new("x", 1)], 4).unwrap();
        let dst = GradedRing::new(vec![Generator::nilpotent("y", 1, 2), Generator::nilpotent("z", 1, 2)], 4).unwrap();
        let x = src.generator("x").unwrap();
        let y = dst.generator("y").unwrap();
        let z = dst.generator("z").unwrap();
        let out = (&x * &x).substitute(&[("x", &y + &z)], &dst).unwrap();
        assert_eq!(out.to_string(), "2*y*z");
    }

    #[test]
    fn strict_degree_substitution() {
        let src = GradedRing::new(vec![Generator::new("x", 1)], 4).unwrap();
        let dst = GradedRing::new(vec![Generator::new("y", 1)], 4).unwrap().strict_degree(true);
        let y = dst.generator("y").unwrap();
        let x = src.generator("x").unwrap();
        let err = x.substitute(&[("x", &y * &y)], &dst).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { .. }));
        assert!(x.substitute(&[("x", y.clone())], &dst).is_ok());
    }

    #[test]
    fn reciprocal_examples() {
        let r = GradedRing::new(vec![Generator::new("t", 1)], 3).unwrap();
        let t = r.generator("t").unwrap();
        assert_eq!(r.one().series_reciprocal().unwrap(), r.one());
        let inv = (r.one() - &t).series_reciprocal().unwrap();
        assert_eq!(inv.to_string(), "1 + t + t^2 + t^3");

        let r2 = GradedRing::new(vec![Generator::new("t", 1)], 2).unwrap();
        let t = r2.generator("t").unwrap();
        let s = r2.one() - t.scale(&rational(1, 2)) + (&t * &t).scale(&rational(1, 6));
        let inv = s.series_reciprocal().unwrap();
        assert_eq!(inv.to_string(), "1 + 1/2*t + 1/12*t^2");
        assert!((&s * &inv).is_one());
        assert!(matches!(t.series_reciprocal(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn reciprocal_rejects_non_nilpotent_perturbation() {
        let r = GradedRing::new(vec![Generator::new("a11", -1)], 3).unwrap();
        let a = r.generator("a11").unwrap();
        assert!(matches!((r.one() + a).series_reciprocal(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn homogeneous_parts() {
        let r = GradedRing::new(vec![Generator::new("a11", -1), Generator::new("x", 1)], 5).unwrap();
        let x = r.generator("x").unwrap();
        let a = r.generator("a11").unwrap();
        let u = r.one() + &x + &x * &x;
        assert_eq!(u.homogeneous_part(1), x);
        assert!(u.homogeneous_part(7).is_zero());
        let v = &a * &x * &x;
        assert_eq!(v.homogeneous_part(1), v);
        let total: RingElement = u.degrees().into_iter().map(|d| u.homogeneous_part(d)).sum();
        assert_eq!(total, u);
    }

    #[test]
    fn rendering() {
        let r = GradedRing::new(vec![Generator::new("a11", -1), Generator::new("x", 1), Generator::new("y", 1)], 5)
            .unwrap();
        let x = r.generator("x").unwrap();
        let y = r.generator("y").unwrap();
        let a = r.generator("a11").unwrap();
        assert_eq!(r.zero().to_string(), "0");
        assert_eq!((-&x).to_string(), "-x");
        let u = &y * &y + &x * &y + &x * &x - a.scale(&rational(3, 4)) * &x * &x;
        assert_eq!(u.to_string(), "-3/4*a11*x^2 + x^2 + x*y + y^2");
    }

    #[test]
    fn coefficient_extraction_and_division() {
        let r = GradedRing::new(vec![Generator::new("a", -1), Generator::new("t", 1)], 5).unwrap();
        let a = r.generator("a").unwrap();
        let t = r.generator("t").unwrap();
        let u = &t + &a * &t * &t + &t * &t * &t;
        assert_eq!(u.coefficient_of(1, 2), a);
        assert_eq!(u.divide_by_generator(1).unwrap().to_string(), "1 + a*t + t^2");
        assert!((&u + &r.one()).divide_by_generator(1).is_err());
    }
}
