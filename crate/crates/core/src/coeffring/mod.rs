//! Graded truncated polynomial rings with exact rational coefficients.
//!
//! A ring is a table of generators, each with a degree (cohomological degree
//! `i` for a class in bidegree `(2i, i)`) and an optional nilpotency order,
//! plus a global degree cap. A monomial vanishes when some exponent reaches
//! the generator's nilpotency order, or when the degree contributed by the
//! positive-degree generators exceeds the cap. Negative-degree generators
//! (formal group law coefficients) are formal parameters and never truncate.

mod element;
mod series;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub use element::{Monomial, RingElement};
pub use series::PowerSeries;

/// Exact coefficient type. Always in lowest terms with positive denominator.
pub type Coefficient = BigRational;

/// Shared handle to a ring; elements keep one of these.
pub type Ring = Arc<GradedRing>;

pub fn rational(num: i64, den: i64) -> Coefficient {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Coefficient {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a coefficient as `p` or `p/q`.
pub fn format_coefficient(q: &Coefficient) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
    /// `Some(k)` means the k-th power vanishes.
    pub nilpotency: Option<u32>,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Generator { name: name.into(), degree, nilpotency: None }
    }

    pub fn nilpotent(name: impl Into<String>, degree: i32, order: u32) -> Self {
        Generator { name: name.into(), degree, nilpotency: Some(order) }
    }

    /// True when powers of this generator eventually vanish in any ring.
    pub fn truncates(&self) -> bool {
        self.degree > 0 || self.nilpotency.is_some()
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: deg {}", self.name, self.degree)?;
        if let Some(k) = self.nilpotency {
            write!(f, " nilp {k}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRing {
    generators: Vec<Generator>,
    degree_cap: u32,
    integer_only: bool,
    strict_degree: bool,
}

impl GradedRing {
    pub fn new(generators: Vec<Generator>, degree_cap: u32) -> Result<Ring> {
        if degree_cap == 0 {
            return Err(Error::NonPositiveCap);
        }
        for (i, g) in generators.iter().enumerate() {
            if g.nilpotency == Some(0) {
                return Err(Error::ZeroNilpotency(g.name.clone()));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Arc::new(GradedRing { generators, degree_cap, integer_only: false, strict_degree: false }))
    }

    /// Same ring with division rejected.
    pub fn integer_only(self: &Arc<Self>, on: bool) -> Ring {
        Arc::new(GradedRing { integer_only: on, ..(**self).clone() })
    }

    /// Same ring with degree-checked substitution.
    pub fn strict_degree(self: &Arc<Self>, on: bool) -> Ring {
        Arc::new(GradedRing { strict_degree: on, ..(**self).clone() })
    }

    pub fn with_cap(self: &Arc<Self>, degree_cap: u32) -> Result<Ring> {
        if degree_cap == 0 {
            return Err(Error::NonPositiveCap);
        }
        Ok(Arc::new(GradedRing { degree_cap, ..(**self).clone() }))
    }

    /// Appends generators; existing indices are preserved.
    pub fn extend(self: &Arc<Self>, extra: Vec<Generator>) -> Result<Ring> {
        let mut gens = self.generators.clone();
        gens.extend(extra);
        let ring = GradedRing::new(gens, self.degree_cap)?;
        Ok(Arc::new(GradedRing {
            integer_only: self.integer_only,
            strict_degree: self.strict_degree,
            ..(*ring).clone()
        }))
    }

    /// Merges generator tables by name, keeping the cap and flags of `self`.
    pub fn union(self: &Arc<Self>, other: &GradedRing) -> Result<Ring> {
        let mut extra = Vec::new();
        for g in &other.generators {
            match self.generators.iter().find(|h| h.name == g.name) {
                Some(h) if h != g => return Err(Error::ConflictingGenerator(g.name.clone())),
                Some(_) => {}
                None => extra.push(g.clone()),
            }
        }
        if extra.is_empty() {
            return Ok(self.clone());
        }
        self.extend(extra)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn is_integer_only(&self) -> bool {
        self.integer_only
    }

    pub fn is_strict_degree(&self) -> bool {
        self.strict_degree
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn zero(self: &Arc<Self>) -> RingElement {
        RingElement::zero(self)
    }

    pub fn one(self: &Arc<Self>) -> RingElement {
        RingElement::constant(self, BigRational::one())
    }

    pub fn constant(self: &Arc<Self>, q: Coefficient) -> RingElement {
        RingElement::constant(self, q)
    }

    pub fn int(self: &Arc<Self>, n: i64) -> RingElement {
        RingElement::constant(self, integer(n))
    }

    pub fn generator(self: &Arc<Self>, name: &str) -> Result<RingElement> {
        let idx = self.index_of(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(self.generator_at(idx))
    }

    pub fn generator_at(self: &Arc<Self>, idx: usize) -> RingElement {
        let mut exps = vec![0; self.generators.len()];
        exps[idx] = 1;
        match self.monomial(exps) {
            Some(m) => RingElement::from_terms(self, [(m, BigRational::one())]),
            None => self.zero(),
        }
    }

    /// Builds a monomial, or `None` when it is truncated away.
    pub fn monomial(&self, exps: Vec<u32>) -> Option<Monomial> {
        debug_assert_eq!(exps.len(), self.generators.len());
        let mut pos = 0u64;
        let mut total = 0i64;
        for (e, g) in exps.iter().zip(&self.generators) {
            if *e == 0 {
                continue;
            }
            if let Some(k) = g.nilpotency {
                if *e >= k {
                    return None;
                }
            }
            let d = i64::from(g.degree) * i64::from(*e);
            total += d;
            if g.degree > 0 {
                pos += d as u64;
            }
        }
        if pos > u64::from(self.degree_cap) {
            return None;
        }
        Some(Monomial::new(pos as u32, total, exps.into_boxed_slice()))
    }

    pub(crate) fn check_division(&self, q: &Coefficient) -> Result<()> {
        if self.integer_only && !q.is_integer() {
            return Err(Error::IntegerOnly(format_coefficient(&q.abs().recip())));
        }
        Ok(())
    }

    pub(crate) fn invert_scalar(&self, q: &Coefficient) -> Result<Coefficient> {
        if q.is_zero() {
            return Err(Error::NotInvertible("0".into()));
        }
        let inv = q.recip();
        if self.integer_only && !inv.is_integer() {
            return Err(Error::IntegerOnly(format_coefficient(q)));
        }
        Ok(inv)
    }
}

impl fmt::Display for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "] cap {}", self.degree_cap)
    }
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
