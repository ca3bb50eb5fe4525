use std::fmt;

use crate::chern::{thom_mul, ThomElement, ThomModule, VirtualBundle};
use crate::coeffring::{same_ring, Ring, RingElement};
use crate::fgl::FormalGroupLaw;
use crate::report::Report;
use crate::{Error, Result};

use super::{fresh_name, pn_ring, pushforward_p1, pushforward_pn};

#[derive(Clone, Debug)]
pub enum ScenarioKind {
    ZeroSection(VirtualBundle),
    /// `P^1` over the base; `twist` is `c_1` of the line the finite map
    /// factors through.
    P1Projection { twist: RingElement },
    PnProjection(u32),
    Composite(Vec<Scenario>),
}

/// A morphism built from zero sections and projective-space projections.
#[derive(Clone, Debug)]
pub struct Scenario {
    kind: ScenarioKind,
    law: FormalGroupLaw,
    base: Ring,
    /// `(total ring, hyperplane name)` for projections.
    total: Option<(Ring, String)>,
}

impl Scenario {
    pub fn zero_section(law: &FormalGroupLaw, v: &VirtualBundle) -> Result<Self> {
        v.effective_roots()?;
        Ok(Scenario { kind: ScenarioKind::ZeroSection(v.clone()), law: law.clone(), base: v.ring().clone(), total: None })
    }

    pub fn p1_projection(law: &FormalGroupLaw, base: &Ring, twist: &RingElement) -> Result<Self> {
        if !same_ring(twist.ring(), base) {
            return Err(Error::RingMismatch);
        }
        let var = fresh_name(base, "x");
        let total = pn_ring(&base.with_cap(base.degree_cap() + 1)?, &var, 1)?;
        Ok(Scenario {
            kind: ScenarioKind::P1Projection { twist: twist.clone() },
            law: law.clone(),
            base: base.clone(),
            total: Some((total, var)),
        })
    }

    pub fn pn_projection(law: &FormalGroupLaw, base: &Ring, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("P^0 projection is the identity".into()));
        }
        let var = fresh_name(base, "x");
        let total = pn_ring(&base.with_cap(base.degree_cap() + n)?, &var, n)?;
        Ok(Scenario { kind: ScenarioKind::PnProjection(n), law: law.clone(), base: base.clone(), total: Some((total, var)) })
    }

    /// Composite of compatible scenarios, listed in order of application.
    pub fn composite(parts: Vec<Scenario>) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidArgument("empty composite".into()))?;
        for p in &parts[1..] {
            if !same_ring(&p.base, &first.base) || p.law != first.law {
                return Err(Error::Consistency("composite parts have different base rings or laws".into()));
            }
        }
        Ok(Scenario { law: first.law.clone(), base: first.base.clone(), total: None, kind: ScenarioKind::Composite(parts) })
    }

    pub fn kind(&self) -> &ScenarioKind {
        &self.kind
    }

    pub fn law(&self) -> &FormalGroupLaw {
        &self.law
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    /// Ring of the source of a projection and the name of its hyperplane
    /// class. Its cap exceeds the base cap by the fibre dimension, so that
    /// pushforwards are exact through the base cap.
    pub fn total(&self) -> Result<(&Ring, &str)> {
        match &self.total {
            Some((r, v)) => Ok((r, v)),
            None => Err(Error::UnsupportedScenario(format!("{self} has no projective total space"))),
        }
    }

    pub fn relative_dimension(&self) -> i64 {
        match &self.kind {
            ScenarioKind::ZeroSection(v) => -v.rank(),
            ScenarioKind::P1Projection { .. } => 1,
            ScenarioKind::PnProjection(n) => i64::from(*n),
            ScenarioKind::Composite(parts) => parts.iter().map(Scenario::relative_dimension).sum(),
        }
    }

    pub fn pullback(&self, x: &RingElement) -> Result<RingElement> {
        if !same_ring(x.ring(), &self.base) {
            return Err(Error::RingMismatch);
        }
        x.embed(self.total()?.0)
    }

    pub fn pushforward(&self, u: &RingElement) -> Result<RingElement> {
        let (total, var) = self.total()?;
        if !same_ring(u.ring(), total) {
            return Err(Error::RingMismatch);
        }
        let pushed = match &self.kind {
            ScenarioKind::P1Projection { .. } => pushforward_p1(&self.law, u, var)?,
            ScenarioKind::PnProjection(n) => pushforward_pn(&self.law, *n, u, var)?,
            _ => unreachable!("only projections carry a total ring"),
        };
        pushed.embed(&self.base)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ScenarioKind::ZeroSection(v) => write!(f, "zero_section({v})"),
            ScenarioKind::P1Projection { twist } => write!(f, "p1_projection({twist})"),
            ScenarioKind::PnProjection(n) => write!(f, "pn_projection({n})"),
            ScenarioKind::Composite(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "composite({})", inner.join(", "))
            }
        }
    }
}

/// The fundamental class of a scenario: the Thom part of its zero sections
/// together with the fibre dimensions of its projections, which act through
/// the pushforward.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalClass {
    pub thom: ThomElement,
    pub projections: Vec<u32>,
    pub degree: i64,
}

impl FundamentalClass {
    /// Product in the composition pairing.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut projections = self.projections.clone();
        projections.extend(&other.projections);
        Ok(FundamentalClass { thom: thom_mul(&self.thom, &other.thom)?, projections, degree: self.degree + other.degree })
    }
}

pub fn fundamental_class(s: &Scenario) -> Result<FundamentalClass> {
    let unit = |projections: Vec<u32>, degree| FundamentalClass { thom: ThomElement::unit(&s.base), projections, degree };
    let class = match &s.kind {
        ScenarioKind::ZeroSection(v) => {
            FundamentalClass { thom: ThomModule::new(&s.base, v)?.generator(), projections: Vec::new(), degree: -v.rank() }
        }
        ScenarioKind::P1Projection { .. } => unit(vec![1], 1),
        ScenarioKind::PnProjection(n) => unit(vec![*n], i64::from(*n)),
        ScenarioKind::Composite(parts) => {
            let mut acc = unit(Vec::new(), 0);
            for p in parts {
                acc = acc.mul(&fundamental_class(p)?)?;
            }
            acc
        }
    };
    if class.degree != s.relative_dimension() {
        return Err(Error::Consistency(format!("class of {s} has degree {} but dimension {}", class.degree, s.relative_dimension())));
    }
    Ok(class)
}

/// `eta(a then b) = eta(a) . eta(b)` with additive degrees.
pub fn fundamental_class_check(a: &Scenario, b: &Scenario) -> Report {
    let cap = a.base().degree_cap();
    let name = "fundamental_class_composition";
    let run = || -> Result<Option<String>> {
        let composite = Scenario::composite(vec![a.clone(), b.clone()])?;
        let whole = fundamental_class(&composite)?;
        let product = fundamental_class(a)?.mul(&fundamental_class(b)?)?;
        if whole == product {
            return Ok(None);
        }
        let d = whole.thom.coeff() - product.thom.coeff();
        Ok(Some(if d.is_zero() { format!("{} vs {}", whole.thom, product.thom) } else { d.to_string() }))
    };
    match run() {
        Ok(None) => Report::pass(name, cap),
        Ok(Some(w)) => Report::fail(name, cap, w),
        Err(e) => Report::fail(name, cap, format!("error: {e}")),
    }
}
