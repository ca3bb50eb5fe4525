//! Formal group laws over graded coefficient rings.
//!
//! `F(x, y) = x + y + sum a_ij x^i y^j` with `a_ij` of degree `1 - i - j`,
//! stored up to total order `cap`. The multiplicative law is
//! `x + y - beta*x*y`, so `a_11 = -beta`.

pub(crate) mod lazard;
mod morphism;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::coeffring::{same_ring, GradedRing, Generator, PowerSeries, Ring, RingElement};
use crate::report::Report;
use crate::{Error, Result};

pub use lazard::coefficient_name;
pub use morphism::OrientationMorphism;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FglKind {
    Additive,
    Multiplicative,
    Universal,
    Custom,
}

impl fmt::Display for FglKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FglKind::Additive => "additive",
            FglKind::Multiplicative => "multiplicative",
            FglKind::Universal => "universal",
            FglKind::Custom => "custom",
        })
    }
}

#[derive(Clone)]
pub struct FormalGroupLaw {
    kind: FglKind,
    ring: Ring,
    cap: u32,
    coeffs: BTreeMap<(u32, u32), RingElement>,
    inverse: OnceLock<PowerSeries>,
}

impl FormalGroupLaw {
    pub fn additive(ring: &Ring) -> Self {
        Self::build(FglKind::Additive, ring, ring.degree_cap(), BTreeMap::new())
    }

    pub fn multiplicative(ring: &Ring, beta: &RingElement) -> Result<Self> {
        if !same_ring(beta.ring(), ring) {
            return Err(Error::RingMismatch);
        }
        let mut coeffs = BTreeMap::new();
        if !beta.is_zero() {
            coeffs.insert((1, 1), -beta);
        }
        Ok(Self::build(FglKind::Multiplicative, ring, ring.degree_cap(), coeffs))
    }

    /// The universal law truncated at `cap`, over the rational Lazard ring.
    /// The coefficient ring is generated by `a11, a12, ..., a1(cap-1)`; the
    /// remaining `a_ij` are expressed through them by relations derived from
    /// associativity.
    pub fn universal(cap: u32) -> Result<Self> {
        if cap < 2 {
            return Err(Error::InvalidFgl("the universal law needs cap >= 2".into()));
        }
        let (ring, coeffs) = lazard::derive(cap)?;
        Ok(Self::build(FglKind::Universal, &ring, cap, coeffs))
    }

    /// A law from an explicit coefficient table; no axiom is enforced here,
    /// see [`FormalGroupLaw::check_axioms`].
    pub fn custom(ring: &Ring, table: impl IntoIterator<Item = ((u32, u32), RingElement)>) -> Result<Self> {
        let cap = ring.degree_cap();
        let mut coeffs = BTreeMap::new();
        for ((i, j), a) in table {
            if i == 0 || j == 0 || i + j > cap {
                return Err(Error::InvalidFgl(format!("coefficient index ({i},{j}) outside 1 <= i,j, i+j <= {cap}")));
            }
            if !same_ring(a.ring(), ring) {
                return Err(Error::RingMismatch);
            }
            if !a.is_zero() {
                coeffs.insert((i, j), a);
            }
        }
        Ok(Self::build(FglKind::Custom, ring, cap, coeffs))
    }

    fn build(kind: FglKind, ring: &Ring, cap: u32, coeffs: BTreeMap<(u32, u32), RingElement>) -> Self {
        FormalGroupLaw { kind, ring: ring.clone(), cap, coeffs, inverse: OnceLock::new() }
    }

    pub fn kind(&self) -> FglKind {
        self.kind
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// `a_ij`, zero when absent.
    pub fn coefficient(&self, i: u32, j: u32) -> RingElement {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&(u32, u32), &RingElement)> {
        self.coeffs.iter()
    }

    fn embedded_coeffs(&self, target: &Ring) -> Result<Vec<(u32, u32, RingElement)>> {
        self.coeffs.iter().map(|(&(i, j), a)| Ok((i, j, a.embed(target)?))).collect()
    }

    /// `u +_F v`.
    pub fn formal_sum(&self, u: &RingElement, v: &RingElement) -> Result<RingElement> {
        if !same_ring(u.ring(), v.ring()) {
            return Err(Error::RingMismatch);
        }
        for w in [u, v] {
            if !w.is_nilpotent() {
                return Err(Error::NotNilpotent(w.to_string()));
            }
        }
        let target = u.ring();
        let coeffs = self.embedded_coeffs(target)?;
        let mut out = u + v;
        if coeffs.is_empty() || u.is_zero() || v.is_zero() {
            return Ok(out);
        }
        let max_i = coeffs.iter().map(|c| c.0).max().unwrap_or(0) as usize;
        let max_j = coeffs.iter().map(|c| c.1).max().unwrap_or(0) as usize;
        let pu = powers(u, max_i);
        let pv = powers(v, max_j);
        for (i, j, a) in coeffs {
            let (ui, vj) = (&pu[i as usize], &pv[j as usize]);
            if ui.is_zero() || vj.is_zero() {
                continue;
            }
            out = out + &a * &(ui * vj);
        }
        Ok(out)
    }

    /// The series `i(t)` with `F(t, i(t)) = 0`.
    pub fn inverse_series(&self) -> &PowerSeries {
        self.inverse.get_or_init(|| self.inverse_to(self.cap as usize))
    }

    /// `[-1]_F(t)` through `t^n`, solving `F(t, i(t)) = 0` by iteration.
    pub fn inverse_to(&self, n: usize) -> PowerSeries {
        let t = PowerSeries::variable(&self.ring, n);
        let neg_t = t.scale(&self.ring.int(-1)).expect("same ring");
        let mut iota = neg_t.clone();
        for _ in 0..n {
            let mut next = neg_t.clone();
            for (&(i, j), a) in &self.coeffs {
                let mut term = PowerSeries::one(&self.ring, n).scale(a).expect("same ring");
                for _ in 0..i {
                    term = term.mul(&t).expect("same ring");
                }
                for _ in 0..j {
                    term = term.mul(&iota).expect("same ring");
                }
                next = next.sub(&term).expect("same ring");
            }
            iota = next;
        }
        iota
    }

    /// `[-1]_F u`.
    pub fn formal_inverse(&self, u: &RingElement) -> Result<RingElement> {
        if !u.is_nilpotent() {
            return Err(Error::NotNilpotent(u.to_string()));
        }
        let need = u.ring().degree_cap() as usize;
        if need <= self.cap as usize {
            self.inverse_series().evaluate(u)
        } else {
            self.inverse_to(need).evaluate(u)
        }
    }

    /// `u -_F v = u +_F [-1]_F v`.
    pub fn formal_difference(&self, u: &RingElement, v: &RingElement) -> Result<RingElement> {
        self.formal_sum(u, &self.formal_inverse(v)?)
    }

    /// `[n]_F u` for any integer `n`; negative `n` goes through the formal
    /// inverse.
    pub fn n_series(&self, n: i64, u: &RingElement) -> Result<RingElement> {
        if !u.is_nilpotent() {
            return Err(Error::NotNilpotent(u.to_string()));
        }
        let base = if n < 0 { self.formal_inverse(u)? } else { u.clone() };
        let k = n.unsigned_abs();
        // binary ladder on the group law
        let mut acc = u.ring().zero();
        let mut pow = base;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.formal_sum(&acc, &pow)?;
            }
            k >>= 1;
            if k > 0 {
                pow = self.formal_sum(&pow, &pow)?;
            }
        }
        Ok(acc)
    }

    /// `dt / F_2(t, 0)`, the invariant differential, as a series.
    pub fn invariant_differential(&self, precision: usize) -> Result<PowerSeries> {
        let mut d = vec![self.ring.one()];
        for i in 1..=precision as u32 {
            d.push(self.coefficient(i, 1));
        }
        PowerSeries::new(&self.ring, d, precision)?.reciprocal()
    }

    /// Logarithm over the rationals: `log_F(F(x, y)) = log_F(x) + log_F(y)`.
    pub fn logarithm(&self) -> Result<PowerSeries> {
        let n = self.cap as usize;
        self.invariant_differential(n)?.integral()
    }

    pub fn exponential(&self) -> Result<PowerSeries> {
        self.logarithm()?.reversion()
    }

    /// Scratch ring: coefficient ring plus degree-one variables, capped at
    /// the law's cap.
    pub fn scratch_ring(&self, vars: &[&str]) -> Result<Ring> {
        let base = self.ring.with_cap(self.cap)?;
        base.extend(vars.iter().map(|v| Generator::new(*v, 1)).collect())
    }

    /// Unit, commutativity and associativity, each up to the cap.
    pub fn check_axioms(&self) -> Result<AxiomReport> {
        let ring = self.scratch_ring(&["x", "y", "z"])?;
        let x = ring.generator("x")?;
        let y = ring.generator("y")?;
        let z = ring.generator("z")?;

        let unit = self.formal_sum(&x, &ring.zero())? - &x;
        let unit2 = self.formal_sum(&ring.zero(), &x)? - &x;
        let unit = if unit.is_zero() { unit2 } else { unit };

        let comm = self.formal_sum(&x, &y)? - self.formal_sum(&y, &x)?;
        let (xi, yi) = (ring.index_of("x").unwrap(), ring.index_of("y").unwrap());
        let comm_witness = RingElement::from_terms(
            &ring,
            comm.terms().filter(|(m, _)| m.exponents()[xi] < m.exponents()[yi]).map(|(m, c)| (m.clone(), c.clone())),
        );

        let left = self.formal_sum(&self.formal_sum(&x, &y)?, &z)?;
        let right = self.formal_sum(&x, &self.formal_sum(&y, &z)?)?;
        let assoc = left - right;

        let witness = |w: RingElement| if w.is_zero() { None } else { Some(w.leading_part()) };
        Ok(AxiomReport {
            cap: self.cap,
            unit: witness(unit),
            commutativity: witness(comm_witness),
            associativity: witness(assoc),
        })
    }
}

fn powers(u: &RingElement, n: usize) -> Vec<RingElement> {
    let mut out = vec![u.ring().one()];
    for k in 1..=n {
        let next = &out[k - 1] * u;
        out.push(next);
    }
    out
}

impl fmt::Debug for FormalGroupLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalGroupLaw({}, cap {}, {:?})", self.kind, self.cap, self.coeffs)
    }
}

impl PartialEq for FormalGroupLaw {
    fn eq(&self, other: &Self) -> bool {
        self.cap == other.cap && same_ring(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

/// Outcome of the axiom checks; a `Some` entry is the leading defect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub cap: u32,
    pub unit: Option<RingElement>,
    pub commutativity: Option<RingElement>,
    pub associativity: Option<RingElement>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.unit.is_none() && self.commutativity.is_none() && self.associativity.is_none()
    }

    /// The first failing axiom and its witness.
    pub fn first_failure(&self) -> Option<(&'static str, &RingElement)> {
        [("unit", &self.unit), ("commutativity", &self.commutativity), ("associativity", &self.associativity)]
            .into_iter()
            .find_map(|(name, w)| w.as_ref().map(|w| (name, w)))
    }
}

/// [`FormalGroupLaw::check_axioms`] as a report; the witness is the leading
/// defect of the first failing axiom.
pub fn fgl_axioms_check(law: &FormalGroupLaw) -> Report {
    Report::timed("fgl_axioms", law.cap(), || Ok(law.check_axioms()?.first_failure().map(|(_, w)| w.clone())))
}

/// Validity of `psi` as a morphism from `source` to `target`.
pub fn morphism_check(source: &FormalGroupLaw, target: &FormalGroupLaw, psi: &PowerSeries) -> Report {
    Report::timed("morphism", source.cap().min(target.cap()), || match OrientationMorphism::new(source, target, psi.clone()) {
        Ok(_) => Ok(None),
        Err(Error::IncompatibleMorphism(_)) => {
            let m = OrientationMorphism::unchecked(source, target, psi.clone());
            m.compatibility_defect()
        }
        Err(e) => Err(e),
    })
}

/// Coefficient ring with a single degree `-1` parameter `beta`.
pub fn beta_ring(cap: u32) -> Result<Ring> {
    GradedRing::new(vec![Generator::new("beta", -1)], cap)
}


#[cfg(test)]
mod universal_tests {
    use super::*;

    #[test]
    fn universal_law_is_associative() {
        for cap in 2..=6 {
            let f = FormalGroupLaw::universal(cap).unwrap();
            let rep = f.check_axioms().unwrap();
            assert!(rep.passed(), "cap {cap}: {:?}", rep.first_failure());
        }
    }

    #[test]
    fn universal_ring_is_generated_by_a1j() {
        let f = FormalGroupLaw::universal(5).unwrap();
        let names: Vec<_> = f.ring().generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["a11", "a12", "a13", "a14"]);
        assert_eq!(f.coefficient(2, 1), f.coefficient(1, 2));
    }
}
