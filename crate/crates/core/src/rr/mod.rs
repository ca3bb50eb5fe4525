//! Todd classes of orientation morphisms and the Riemann-Roch identities
//! they govern.
//!
//! Source and target theories share one coefficient ring. A first Chern
//! class `x` of the source theory becomes `psi(x)` in the target theory;
//! [`grothendieck_transform`] is the only map crossing between the two.

use crate::chern::{thom_class, ProjectiveBundleRing, VirtualBundle};
use crate::coeffring::{GradedRing, PowerSeries, Ring, RingElement};
use crate::fgl::{FormalGroupLaw, OrientationMorphism};
use crate::gysin::{fresh_name, pushforward_p1, Scenario, ScenarioKind};
use crate::report::{defect, Report};
use crate::{Error, Result};

/// An orientation morphism together with its Todd series `t / psi(t)`.
#[derive(Clone, Debug)]
pub struct ToddTransformation {
    morphism: OrientationMorphism,
    todd_series: PowerSeries,
}

impl ToddTransformation {
    pub fn new(morphism: OrientationMorphism) -> Result<Self> {
        let todd_series = morphism.psi().shift_down()?.reciprocal()?;
        Ok(ToddTransformation { morphism, todd_series })
    }

    pub fn morphism(&self) -> &OrientationMorphism {
        &self.morphism
    }

    pub fn todd_series(&self) -> &PowerSeries {
        &self.todd_series
    }

    /// Degrees through which the Todd series is known.
    pub fn precision(&self) -> u32 {
        self.todd_series.precision() as u32
    }

    /// Cap through which Todd classes of classes in `ring` are exact.
    pub fn todd_cap(&self, ring: &Ring) -> u32 {
        ring.degree_cap().min(self.precision()).max(1)
    }

    /// Cap through which `psi` and products of Todd classes with classes of
    /// positive degree are exact.
    pub fn exact_cap(&self, ring: &Ring) -> u32 {
        ring.degree_cap().min(self.morphism.psi().precision() as u32).max(1)
    }
}

/// The Chern character: the multiplicative law with `beta = 1` carried to
/// the additive law by `psi(t) = 1 - exp(-t)`, through `t^cap`.
pub fn chern_character(cap: u32) -> Result<OrientationMorphism> {
    let q = GradedRing::new(vec![], cap)?;
    let source = FormalGroupLaw::multiplicative(&q, &q.one())?;
    let target = FormalGroupLaw::additive(&q);
    OrientationMorphism::new(&source, &target, PowerSeries::one_minus_exp_neg(&q, cap as usize))
}

/// `td(L) = (t / psi(t))(root)`.
pub fn todd_line(t: &ToddTransformation, root: &RingElement) -> Result<RingElement> {
    if root.is_zero() {
        return Ok(root.ring().one());
    }
    if !root.is_nilpotent() {
        return Err(Error::NotNilpotent(root.to_string()));
    }
    t.todd_series.evaluate(root)
}

/// Multiplicative extension of [`todd_line`] to virtual bundles.
pub fn todd_virtual(t: &ToddTransformation, v: &VirtualBundle) -> Result<RingElement> {
    let mut out = v.ring().one();
    for r in v.plus_roots() {
        out = &out * &todd_line(t, r)?;
    }
    for r in v.minus_roots() {
        out = &out * &todd_line(t, r)?.series_reciprocal()?;
    }
    Ok(out)
}

/// `td(v + w) = td(v) td(w)` and `td(-v) td(v) = 1`.
pub fn todd_multiplicativity_check(t: &ToddTransformation, v: &VirtualBundle, w: &VirtualBundle) -> Report {
    let cap = t.todd_cap(v.ring());
    Report::timed("todd_multiplicative", cap, || {
        let out = v.ring().with_cap(cap)?;
        let lhs = todd_virtual(t, &v.direct_sum(w)?)?.embed(&out)?;
        let rhs = (&todd_virtual(t, v)? * &todd_virtual(t, w)?).embed(&out)?;
        if let Some(d) = defect(&lhs, &rhs)? {
            return Ok(Some(d));
        }
        let unit = (&todd_virtual(t, v)? * &todd_virtual(t, &v.negate())?).embed(&out)?;
        defect(&unit, &out.one())
    })
}

/// `psi(x) = td(-L) x`.
pub fn todd_chern_relation_check(t: &ToddTransformation, root: &RingElement) -> Report {
    let cap = t.exact_cap(root.ring());
    Report::timed("todd_chern_relation", cap, || {
        let ring = root.ring().with_cap(cap)?;
        let x = root.embed(&ring)?;
        let lhs = t.morphism.apply(&x)?;
        let line = VirtualBundle::line(&x)?;
        let rhs = &todd_virtual(t, &line.negate())? * &x;
        defect(&lhs, &rhs)
    })
}

/// Ring homomorphism rewriting source Chern classes into target
/// coordinates: each generator named in `roots` goes to `psi` of itself.
/// Every other generator of positive degree occurring in `u` is rejected.
pub fn grothendieck_transform(t: &ToddTransformation, u: &RingElement, roots: &[&str]) -> Result<RingElement> {
    let ring = u.ring();
    for (i, g) in ring.generators().iter().enumerate() {
        if g.degree > 0 && !roots.contains(&g.name.as_str()) && u.max_exponent(i) > 0 {
            return Err(Error::UntaggedGenerator(g.name.clone()));
        }
    }
    let images = roots
        .iter()
        .map(|name| Ok((*name, t.morphism.apply(&ring.generator(name)?)?)))
        .collect::<Result<Vec<_>>>()?;
    u.substitute(&images, ring)
}

/// The virtual tangent bundle used for `grr_check`: `-N` for the zero
/// section of `N`, and `2[O(1)] - [O]` on `P^1`, whose first Chern class is
/// the hyperplane class `x`.
pub fn tangent_bundle(scenario: &Scenario) -> Result<VirtualBundle> {
    match scenario.kind() {
        ScenarioKind::ZeroSection(n) => Ok(n.negate()),
        ScenarioKind::P1Projection { .. } => {
            let (total, var) = scenario.total()?;
            let x = total.generator(var)?;
            VirtualBundle::new(total, vec![x.clone(), x], vec![total.zero()])
        }
        _ => Err(Error::UnsupportedScenario(format!("no tangent bundle model for {scenario}"))),
    }
}

/// `phi_*(eta^E_f) = td(tau_f) eta^F_f`, realised on zero sections through
/// the Thom class and on `P^1` through the pushforward of the basis `1, x`.
pub fn grr_check(t: &ToddTransformation, scenario: &Scenario) -> Report {
    let cap = t.exact_cap(scenario.base());
    Report::timed("grr", cap, || {
        if scenario.law() != t.morphism.source() {
            return Err(Error::Consistency("scenario law is not the source of the transformation".into()));
        }
        let tau = tangent_bundle(scenario)?;
        match scenario.kind() {
            ScenarioKind::ZeroSection(n) => grr_zero_section(t, n, &tau, cap),
            ScenarioKind::P1Projection { .. } => grr_p1(t, scenario, &tau, cap),
            _ => unreachable!("tangent_bundle rejects other kinds"),
        }
    })
}

fn grr_zero_section(t: &ToddTransformation, n: &VirtualBundle, tau: &VirtualBundle, cap: u32) -> Result<Option<RingElement>> {
    let var = fresh_name(n.ring(), "c");
    let proj = ProjectiveBundleRing::new(&n.direct_sum(&VirtualBundle::trivial(n.ring(), 1))?, &var)?;
    let total = proj.total();
    let c = proj.hyperplane();
    let psi_c = t.morphism.apply(&c)?;
    let mut lhs = total.one();
    for l in n.effective_roots()? {
        let psi_l = t.morphism.apply(&l.embed(total)?)?;
        lhs = &lhs * &(&psi_l - &psi_c);
    }
    let rhs = &todd_virtual(t, tau)?.embed(total)? * &thom_class(n, &proj)?;
    let out = total.with_cap(cap)?;
    defect(&proj.reduce(&lhs)?.embed(&out)?, &proj.reduce(&rhs)?.embed(&out)?)
}

fn grr_p1(t: &ToddTransformation, scenario: &Scenario, tau: &VirtualBundle, cap: u32) -> Result<Option<RingElement>> {
    let (total, var) = scenario.total()?;
    let x = total.generator(var)?;
    let td = todd_virtual(t, tau)?;
    let out = scenario.base().with_cap(cap)?;
    for u in [total.one(), x] {
        let lhs = grothendieck_transform(t, &scenario.pushforward(&u)?, &[])?;
        let image = grothendieck_transform(t, &u, &[var])?;
        let rhs = pushforward_p1(t.morphism.target(), &(&td * &image), var)?.embed(scenario.base())?;
        if let Some(d) = defect(&lhs.embed(&out)?, &rhs.embed(&out)?)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// `td_(a then b)(t) = td_a(psi_b(t)) td_b(t)` for `a: F -> G`,
/// `b: G -> H`, evaluated on `root`.
pub fn todd_cocycle_check(a: &ToddTransformation, b: &ToddTransformation, root: &RingElement) -> Report {
    let cap = a.todd_cap(root.ring()).min(b.todd_cap(root.ring()));
    Report::timed("todd_cocycle", cap, || {
        let ring = root.ring().with_cap(cap)?;
        let x = root.embed(&ring)?;
        let ab = ToddTransformation::new(a.morphism.compose(&b.morphism)?)?;
        let lhs = todd_line(&ab, &x)?;
        let rhs = &todd_line(a, &b.morphism.apply(&x)?)? * &todd_line(b, &x)?;
        defect(&lhs, &rhs)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{rational, Generator};

    fn chern(cap: u32) -> ToddTransformation {
        ToddTransformation::new(chern_character(cap).unwrap()).unwrap()
    }

    #[test]
    fn todd_series_opening() {
        let t = chern(6);
        let want = [rational(1, 1), rational(1, 2), rational(1, 12), rational(0, 1), rational(-1, 720)];
        for (k, q) in want.iter().enumerate() {
            assert_eq!(t.todd_series().coeff(k).constant_term(), *q, "t^{k}");
        }
    }

    #[test]
    fn todd_line_examples() {
        let t = chern(6);
        let r = t.morphism().source().ring().extend(vec![Generator::nilpotent("c", 1, 3)]).unwrap();
        let c = r.generator("c").unwrap();
        assert_eq!(todd_line(&t, &c).unwrap().to_string(), "1 + 1/2*c + 1/12*c^2");
        assert!(todd_line(&t, &r.zero()).unwrap().is_one());
        let id = ToddTransformation::new(OrientationMorphism::identity(t.morphism().target())).unwrap();
        assert!(todd_line(&id, &c).unwrap().is_one());
        assert!(todd_line(&t, &r.one()).is_err());
    }

    #[test]
    fn todd_virtual_examples() {
        let t = chern(3);
        let r = t.morphism().source().ring().extend(vec![Generator::new("x1", 1), Generator::new("x2", 1)]).unwrap();
        let (x1, x2) = (r.generator("x1").unwrap(), r.generator("x2").unwrap());
        let l = VirtualBundle::line(&x1).unwrap();
        assert!(todd_virtual(&t, &VirtualBundle::zero(&r)).unwrap().is_one());
        assert!(todd_virtual(&t, &l.direct_sum(&l.negate()).unwrap()).unwrap().is_one());
        let r2 = r.with_cap(2).unwrap();
        let e = VirtualBundle::split(&r2, vec![x1.embed(&r2).unwrap(), x2.embed(&r2).unwrap()]).unwrap();
        let line = |x: &RingElement| {
            &(&r2.one() + &x.scalar_mul(&rational(1, 2)).unwrap()) + &(x * x).scalar_mul(&rational(1, 12)).unwrap()
        };
        let want = &line(&x1.embed(&r2).unwrap()) * &line(&x2.embed(&r2).unwrap());
        assert_eq!(todd_virtual(&t, &e).unwrap(), want);
    }

    #[test]
    fn chern_relation() {
        let t = chern(4);
        let r = t.morphism().source().ring().extend(vec![Generator::nilpotent("x", 1, 4)]).unwrap();
        assert!(todd_chern_relation_check(&t, &r.generator("x").unwrap()).passed());
        let id = ToddTransformation::new(OrientationMorphism::identity(t.morphism().source())).unwrap();
        assert!(todd_chern_relation_check(&id, &r.generator("x").unwrap()).passed());
    }

    #[test]
    fn transform_examples() {
        let t = chern(3);
        let r = t.morphism().source().ring().extend(vec![Generator::new("x", 1), Generator::new("y", 1)]).unwrap();
        let x = r.generator("x").unwrap();
        assert_eq!(grothendieck_transform(&t, &x, &["x"]).unwrap().to_string(), "x - 1/2*x^2 + 1/6*x^3");
        assert_eq!(grothendieck_transform(&t, &x, &["y"]), Err(Error::UntaggedGenerator("x".into())));
        let id = ToddTransformation::new(OrientationMorphism::identity(t.morphism().source())).unwrap();
        let u = &(&x * &x) + &r.generator("y").unwrap();
        assert_eq!(grothendieck_transform(&id, &u, &["x", "y"]).unwrap(), u);
    }

    #[test]
    fn grr_chern_character() {
        let t = chern(4);
        let law = t.morphism().source().clone();
        let r = law.ring().extend(vec![Generator::new("l", 1), Generator::new("l2", 1)]).unwrap();
        let l = VirtualBundle::line(&r.generator("l").unwrap()).unwrap();
        assert!(grr_check(&t, &Scenario::zero_section(&law, &l).unwrap()).passed());
        let e = l.direct_sum(&VirtualBundle::line(&r.generator("l2").unwrap()).unwrap()).unwrap();
        assert!(grr_check(&t, &Scenario::zero_section(&law, &e).unwrap()).passed());
        let p1 = Scenario::p1_projection(&law, law.ring(), &law.ring().zero()).unwrap();
        assert!(grr_check(&t, &p1).passed());
        let pn = Scenario::pn_projection(&law, law.ring(), 2).unwrap();
        let rep = grr_check(&t, &pn);
        assert!(rep.failed() && rep.witness.unwrap().contains("unsupported"));
    }

    #[test]
    fn cocycle() {
        let t = chern(5);
        let id_src = ToddTransformation::new(OrientationMorphism::identity(t.morphism().source())).unwrap();
        let r = t.morphism().source().ring().extend(vec![Generator::new("x", 1)]).unwrap();
        assert!(todd_cocycle_check(&id_src, &t, &r.generator("x").unwrap()).passed());
        assert!(todd_cocycle_check(&t, &ToddTransformation::new(OrientationMorphism::identity(t.morphism().target())).unwrap(), &r.generator("x").unwrap()).passed());
    }
}
