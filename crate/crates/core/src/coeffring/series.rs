use std::fmt;

use num_traits::Zero;

use super::{integer, same_ring, Coefficient, Generator, Ring, RingElement};
use crate::{Error, Result};

/// Univariate power series `sum c_k t^k`, `k <= precision`, with
/// coefficients in a coefficient ring. The variable is implicit; truncation
/// is by `t`-order only, independent of the ring's cap.
#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries {
    ring: Ring,
    coeffs: Vec<RingElement>,
}

impl PowerSeries {
    pub fn new(ring: &Ring, mut coeffs: Vec<RingElement>, precision: usize) -> Result<Self> {
        for c in &coeffs {
            if !same_ring(c.ring(), ring) {
                return Err(Error::RingMismatch);
            }
        }
        coeffs.resize(precision + 1, ring.zero());
        Ok(PowerSeries { ring: ring.clone(), coeffs })
    }

    pub fn from_rationals(ring: &Ring, qs: &[Coefficient], precision: usize) -> Self {
        let coeffs = qs.iter().map(|q| ring.constant(q.clone())).collect();
        Self::new(ring, coeffs, precision).expect("constants live in the ring")
    }

    pub fn zero(ring: &Ring, precision: usize) -> Self {
        PowerSeries { ring: ring.clone(), coeffs: vec![ring.zero(); precision + 1] }
    }

    pub fn one(ring: &Ring, precision: usize) -> Self {
        let mut s = Self::zero(ring, precision);
        s.coeffs[0] = ring.one();
        s
    }

    /// The series `t`.
    pub fn variable(ring: &Ring, precision: usize) -> Self {
        let mut s = Self::zero(ring, precision);
        if precision >= 1 {
            s.coeffs[1] = ring.one();
        }
        s
    }

    /// `1 - exp(-t)`.
    pub fn one_minus_exp_neg(ring: &Ring, precision: usize) -> Self {
        let mut qs = vec![Coefficient::zero()];
        let mut fact = integer(1);
        for k in 1..=precision {
            fact *= integer(k as i64);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            qs.push(integer(sign) / fact.clone());
        }
        Self::from_rationals(ring, &qs, precision)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &RingElement {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn with_precision(&self, precision: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(precision + 1, self.ring.zero());
        PowerSeries { ring: self.ring.clone(), coeffs }
    }

    /// Re-expresses the coefficients in a larger ring.
    pub fn embed(&self, target: &Ring) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.embed(target)).collect::<Result<Vec<_>>>()?;
        Ok(PowerSeries { ring: target.clone(), coeffs })
    }

    fn check(&self, other: &Self) -> Result<usize> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(self.precision().min(other.precision()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        let coeffs = (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        Ok(PowerSeries { ring: self.ring.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        let coeffs = (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        Ok(PowerSeries { ring: self.ring.clone(), coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        let mut coeffs = vec![self.ring.zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(&self.coeffs[i] * &other.coeffs[j]);
            }
        }
        Ok(PowerSeries { ring: self.ring.clone(), coeffs })
    }

    pub fn scale(&self, c: &RingElement) -> Result<Self> {
        if !same_ring(c.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(PowerSeries { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() })
    }

    /// Inverse under multiplication; the constant coefficient must be a unit.
    pub fn reciprocal(&self) -> Result<Self> {
        let n = self.precision();
        let b0 = self.coeffs[0].series_reciprocal()?;
        let mut out = vec![b0.clone()];
        for k in 1..=n {
            let mut s = self.ring.zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    s = &s + &(&self.coeffs[i] * &out[k - i]);
                }
            }
            out.push(-(&b0 * &s));
        }
        Ok(PowerSeries { ring: self.ring.clone(), coeffs: out })
    }

    /// `f(t) / t`, losing one order of precision. Needs `f(0) = 0`.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotDivisible(self.to_string(), "t".into()));
        }
        Ok(PowerSeries { ring: self.ring.clone(), coeffs: self.coeffs[1..].to_vec() })
    }

    /// `t * f(t)` at the same precision.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = vec![self.ring.zero()];
        coeffs.extend_from_slice(&self.coeffs[..self.precision()]);
        PowerSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn derivative(&self) -> Self {
        let n = self.precision();
        let mut coeffs: Vec<RingElement> = (1..=n).map(|k| self.coeffs[k].scale(&integer(k as i64))).collect();
        coeffs.push(self.ring.zero());
        PowerSeries { ring: self.ring.clone(), coeffs }
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Result<Self> {
        let n = self.precision();
        let mut coeffs = vec![self.ring.zero()];
        for k in 0..n {
            let q = integer(k as i64 + 1);
            let inv = self.ring.invert_scalar(&q)?;
            coeffs.push(self.coeffs[k].scale(&inv));
        }
        Ok(PowerSeries { ring: self.ring.clone(), coeffs })
    }

    /// `self(inner(t))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let n = self.check(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvalidSeries("inner series has a constant term".into()));
        }
        let inner = inner.with_precision(n);
        let mut acc = PowerSeries::zero(&self.ring, n);
        for k in (0..=n).rev() {
            acc = acc.mul(&inner)?;
            acc.coeffs[0] = &acc.coeffs[0] + &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse of `t + ...`.
    pub fn reversion(&self) -> Result<Self> {
        let n = self.precision();
        if !self.coeffs[0].is_zero() || (n >= 1 && !self.coeffs[1].is_one()) {
            return Err(Error::InvalidSeries("reversion needs the shape t + O(t^2)".into()));
        }
        let t = PowerSeries::variable(&self.ring, n);
        let mut g = t.clone();
        // each pass fixes one more order
        for _ in 1..n {
            let defect = self.compose(&g)?.sub(&t)?;
            g = g.sub(&defect)?;
        }
        Ok(g)
    }

    /// Evaluates at an element of a ring that contains the coefficient ring's
    /// generators. Exact when `x^(precision+1)` vanishes in that ring.
    pub fn evaluate(&self, x: &RingElement) -> Result<RingElement> {
        let target = x.ring();
        let mut acc = RingElement::zero(target);
        for k in (0..=self.precision()).rev() {
            acc = &(&acc * x) + &self.coeffs[k].embed(target)?;
        }
        Ok(acc)
    }

    /// Renders the series as an element of `target` in the variable `var`.
    pub fn to_element(&self, target: &Ring, var: &str) -> Result<RingElement> {
        let t = target.generator(var)?;
        self.evaluate(&t)
    }

    /// Reads off the `var`-expansion of an element into a series over
    /// `coeff_ring`.
    pub fn from_element(u: &RingElement, var: &str, coeff_ring: &Ring, precision: usize) -> Result<Self> {
        let idx = u.ring().index_of(var).ok_or_else(|| Error::UnknownGenerator(var.to_string()))?;
        let coeffs = (0..=precision)
            .map(|k| u.coefficient_of(idx, k as u32).embed(coeff_ring))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeff_ring, coeffs, precision)
    }

    /// A ring holding the coefficient ring plus a degree-1 variable.
    pub fn variable_ring(coeff_ring: &Ring, var: &str, cap: u32) -> Result<Ring> {
        coeff_ring.with_cap(cap)?.extend(vec![Generator::new(var, 1)])
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let simple = c.num_terms() == 1;
            match (k, simple) {
                (0, _) => write!(f, "{c}")?,
                (_, true) => write!(f, "{c}*t^{k}")?,
                (_, false) => write!(f, "({c})*t^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.precision() + 1)
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PowerSeries({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rational, GradedRing};
    use super::*;

    fn q() -> Ring {
        GradedRing::new(vec![], 8).unwrap()
    }

    #[test]
    fn exp_series_and_its_log() {
        let r = q();
        let e = PowerSeries::one_minus_exp_neg(&r, 5);
        assert_eq!(e.coeff(1).to_string(), "1");
        assert_eq!(e.coeff(2).to_string(), "-1/2");
        assert_eq!(e.coeff(3).to_string(), "1/6");
        // reversion of 1 - exp(-t) is -log(1 - t) = t + t^2/2 + t^3/3 + ...
        let inv = e.reversion().unwrap();
        for k in 1..=5 {
            assert_eq!(inv.coeff(k), &r.constant(rational(1, k as i64)));
        }
        let id = e.compose(&inv).unwrap();
        assert_eq!(id, PowerSeries::variable(&r, 5));
    }

    #[test]
    fn reciprocal_round_trip() {
        let r = q();
        let s = PowerSeries::from_rationals(&r, &[integer(2), integer(3), rational(1, 5)], 6);
        let inv = s.reciprocal().unwrap();
        assert_eq!(s.mul(&inv).unwrap(), PowerSeries::one(&r, 6));
    }

    #[test]
    fn integral_derivative() {
        let r = q();
        let s = PowerSeries::from_rationals(&r, &[integer(1), integer(1), integer(1)], 4);
        let i = s.integral().unwrap();
        assert_eq!(i.derivative().with_precision(3), s.with_precision(3));
        let z = r.integer_only(true);
        let s = PowerSeries::from_rationals(&z, &[integer(1), integer(1)], 3);
        assert!(matches!(s.integral(), Err(Error::IntegerOnly(_))));
    }
}
