//! Gysin pushforwards along projective bundles and the intersection
//! identities built on them.
//!
//! Bivariant classes are modelled in two cases only: zero sections of
//! vector bundles, whose fundamental class is the Thom class in a free Thom
//! module, and projective-bundle projections, whose fundamental class acts
//! through the pushforward functional.

mod residue;
mod scenario;

use crate::chern::{euler_class, thom_class, thom_polynomial, ProjectiveBundleRing, VirtualBundle};
use crate::coeffring::{integer, Generator, Ring, RingElement};
use crate::fgl::{FglKind, FormalGroupLaw};
use crate::report::{defect, Report};
use crate::{Error, Result};

pub use scenario::{fundamental_class, fundamental_class_check, FundamentalClass, Scenario, ScenarioKind};

/// A generator name not yet used in `ring`.
pub fn fresh_name(ring: &Ring, stem: &str) -> String {
    if !ring.contains(stem) {
        return stem.to_string();
    }
    (1..).map(|k| format!("{stem}{k}")).find(|n| !ring.contains(n)).expect("unbounded")
}

/// `q_*` along `P(E) -> X` by the residue rule; the result lives in the base
/// ring of `proj`.
pub fn pushforward(law: &FormalGroupLaw, proj: &ProjectiveBundleRing, u: &RingElement) -> Result<RingElement> {
    let coords = proj.coordinates(u)?;
    let roots = proj.bundle().plus_roots();
    let basis = residue::push_basis(law, roots, proj.base(), coords.len() - 1)?;
    Ok(coords.iter().zip(&basis).map(|(a, b)| a * b).fold(proj.base().zero(), |acc, t| acc + t))
}

fn p1_coefficients(u: &RingElement, var: &str) -> Result<(RingElement, RingElement)> {
    let ring = u.ring();
    let idx = ring.index_of(var).ok_or_else(|| Error::UnknownGenerator(var.to_string()))?;
    if ring.generators()[idx].nilpotency != Some(2) {
        return Err(Error::InvalidArgument(format!("{var} is not the P^1 class (needs {var}^2 = 0)")));
    }
    Ok((u.coefficient_of(idx, 0), u.coefficient_of(idx, 1)))
}

/// `p_*(a + b x) = -a_11 a + b` on `P^1`.
pub fn pushforward_p1(law: &FormalGroupLaw, u: &RingElement, var: &str) -> Result<RingElement> {
    let (a, b) = p1_coefficients(u, var)?;
    let a11 = law.coefficient(1, 1).embed(u.ring())?;
    Ok(&b - &(&a11 * &a))
}

/// `p_*` along `P^n -> X` for the trivial bundle, by the residue rule with
/// all roots zero; `var` is the hyperplane class.
pub fn pushforward_pn(law: &FormalGroupLaw, n: u32, u: &RingElement, var: &str) -> Result<RingElement> {
    let ring = u.ring();
    let idx = ring.index_of(var).ok_or_else(|| Error::UnknownGenerator(var.to_string()))?;
    if u.max_exponent(idx) > n {
        return Err(Error::Unreduced);
    }
    let roots = vec![ring.zero(); n as usize + 1];
    let basis = residue::push_basis(law, &roots, ring, n as usize)?;
    Ok((0..=n).map(|k| &u.coefficient_of(idx, k) * &basis[k as usize]).fold(ring.zero(), |acc, t| acc + t))
}

/// A ring for `P^n` over `base`: one more degree-one generator with
/// `var^(n+1) = 0`.
pub fn pn_ring(base: &Ring, var: &str, n: u32) -> Result<Ring> {
    base.extend(vec![Generator::nilpotent(var, 1, n + 1)])
}

/// `prod [-1]_F(l) / l` over the roots: the factor by which the pushforward
/// of the Thom class on `P(V + 1)` must be corrected.
pub fn key_lemma_correction(law: &FormalGroupLaw, v: &VirtualBundle) -> Result<RingElement> {
    let ring = v.ring();
    let ratio = law.inverse_to(ring.degree_cap() as usize + 1).shift_down()?;
    let mut out = ring.one();
    for l in v.effective_roots()? {
        out = &out * &ratio.evaluate(&l)?;
    }
    Ok(out)
}

/// `eta_s . eta_f = 1` for the zero section `s` of `V` and the projection
/// `f` of its projective completion.
pub fn key_lemma_check(law: &FormalGroupLaw, v: &VirtualBundle) -> Report {
    let cap = v.ring().degree_cap().min(law.cap());
    Report::timed("key_lemma", cap, || {
        let r = v.effective_roots()?.len() as u32;
        if r == 0 {
            return Ok(None);
        }
        let work = v.ring().with_cap(v.ring().degree_cap() + r)?;
        let vw = v.embed(&work)?;
        let var = fresh_name(&work, "c");
        let proj = ProjectiveBundleRing::new(&vw.direct_sum(&VirtualBundle::trivial(&work, 1))?, &var)?;
        let th = thom_class(&vw, &proj)?;
        let eps = key_lemma_correction(law, &vw)?.embed(proj.total())?;
        let pushed = pushforward(law, &proj, &(&th * &eps))?;
        let out_ring = v.ring().with_cap(cap)?;
        defect(&pushed.embed(&out_ring)?, &out_ring.one())
    })
}

/// Excess intersection in the Thom-module model: with `xi = f - g`,
/// `th(f) = th(xi) th(g)` and pulling `th(xi)` back along the zero section
/// gives `e(xi)`, so the pulled-back class is `e(xi) th(g)`.
pub fn excess_check(law: &FormalGroupLaw, f: &VirtualBundle, g: &VirtualBundle) -> Report {
    let cap = f.ring().degree_cap();
    Report::timed("excess", cap, || {
        law.coefficient(1, 1).embed(f.ring())?;
        let xi = f.quotient(g)?;
        let var = fresh_name(f.ring(), "c");
        let proj = ProjectiveBundleRing::new(&f.direct_sum(&VirtualBundle::trivial(f.ring(), 1))?, &var)?;
        let c = proj.hyperplane();
        let th_f = thom_class(f, &proj)?;
        let th_g = thom_polynomial(g, &c)?;
        let th_xi = thom_polynomial(&xi, &c)?;
        if let Some(d) = defect(&proj.reduce(&th_f)?, &proj.reduce(&(&th_xi * &th_g))?)? {
            return Ok(Some(d));
        }
        let pulled = th_xi.substitute(&[(var.as_str(), proj.total().zero())], proj.total())?.embed(f.ring())?;
        defect(&pulled, &euler_class(&xi)?)
    })
}

/// `[m_1]_F e_1 +_F ... +_F [m_r]_F e_r`; zero for no components.
pub fn ramification_class(law: &FormalGroupLaw, components: &[(i64, RingElement)]) -> Result<RingElement> {
    let mut iter = components.iter();
    let Some((m, e)) = iter.next() else {
        return Ok(law.ring().zero());
    };
    let mut acc = law.n_series(*m, e)?;
    for (m, e) in iter {
        acc = law.formal_sum(&acc, &law.n_series(*m, e)?)?;
    }
    Ok(acc)
}

/// [`ramification_class`] against an independent route: `sum m_k e_k` for
/// the additive law, `((prod (1 + a11 e_k)^m_k) - 1) / a11` for a
/// multiplicative law, and `exp_F(sum m_k log_F(e_k))` otherwise.
pub fn ramification_check(law: &FormalGroupLaw, components: &[(i64, RingElement)]) -> Report {
    let cap = components.first().map_or(law.cap(), |(_, e)| e.ring().degree_cap());
    Report::timed("ramification", cap, || {
        let got = ramification_class(law, components)?;
        let Some((_, e0)) = components.first() else {
            return defect(&got, &law.ring().zero());
        };
        let ring = e0.ring();
        let want = match law.kind() {
            FglKind::Additive => components.iter().fold(ring.zero(), |acc, (m, e)| acc + e.scale(&integer(*m))),
            FglKind::Multiplicative => multiplicative_oracle(law, components, ring)?,
            _ => {
                let log = law.logarithm()?;
                let mut sum = ring.zero();
                for (m, e) in components {
                    sum = sum + log.evaluate(e)?.scale(&integer(*m));
                }
                law.exponential()?.evaluate(&sum)?
            }
        };
        defect(&got, &want)
    })
}

fn multiplicative_oracle(law: &FormalGroupLaw, components: &[(i64, RingElement)], ring: &Ring) -> Result<RingElement> {
    let a11 = law.coefficient(1, 1).embed(ring)?;
    let mut prod = ring.one();
    for (m, e) in components {
        let base = &ring.one() + &(&a11 * e);
        let power = if *m >= 0 { base.pow(*m as u32) } else { base.series_reciprocal()?.pow(m.unsigned_abs() as u32) };
        prod = &prod * &power;
    }
    let num = &prod - &ring.one();
    if a11.is_zero() {
        return Err(Error::InvalidArgument("multiplicative law with beta = 0".into()));
    }
    if a11.is_constant() {
        return Ok(num.scale(&a11.constant_term().recip()));
    }
    let (mono, c) = a11.terms().next().expect("nonzero");
    let idx = mono.exponents().iter().position(|&e| e > 0).expect("nonconstant");
    if a11.num_terms() != 1 || mono.exponents().iter().sum::<u32>() != 1 {
        return Err(Error::InvalidArgument(format!("a11 = {a11} is not a multiple of one generator")));
    }
    Ok(num.divide_by_generator(idx)?.scale(&c.recip()))
}

/// `i^*(eta_i) = c_n(N)`: the Euler class, cross-checked against the Thom
/// class of `N` restricted along the zero section.
pub fn self_intersection(n: &VirtualBundle) -> Result<RingElement> {
    let e = euler_class(n)?;
    let var = fresh_name(n.ring(), "c");
    let proj = ProjectiveBundleRing::new(&n.direct_sum(&VirtualBundle::trivial(n.ring(), 1))?, &var)?;
    let th = thom_class(n, &proj)?;
    let restricted = th.substitute(&[(var.as_str(), proj.total().zero())], proj.total())?.embed(n.ring())?;
    if restricted != e {
        return Err(Error::Consistency(format!("restricted Thom class {restricted} differs from c_n = {e}")));
    }
    Ok(e)
}

/// [`self_intersection`] as a report: the restricted Thom class is `c_n(N)`.
pub fn self_intersection_check(n: &VirtualBundle) -> Report {
    Report::timed("self_intersection", n.ring().degree_cap(), || match self_intersection(n) {
        Ok(_) => Ok(None),
        Err(Error::Consistency(_)) => {
            let var = fresh_name(n.ring(), "c");
            let proj = ProjectiveBundleRing::new(&n.direct_sum(&VirtualBundle::trivial(n.ring(), 1))?, &var)?;
            let th = thom_class(n, &proj)?;
            let restricted = th.substitute(&[(var.as_str(), proj.total().zero())], proj.total())?.embed(n.ring())?;
            defect(&restricted, &euler_class(n)?)
        }
        Err(e) => Err(e),
    })
}

/// `p_*([d]_F x +_F y0)` for the finite map factored through `P^1`; `var`
/// names the `P^1` class, `y0` the first Chern class of the twisting line.
pub fn degree_class(law: &FormalGroupLaw, d: i64, y0: &RingElement, var: &str) -> Result<RingElement> {
    if !y0.is_zero() && !y0.is_nilpotent() {
        return Err(Error::NotNilpotent(y0.to_string()));
    }
    let x = y0.ring().generator(var)?;
    let section = law.formal_sum(&law.n_series(d, &x)?, y0)?;
    pushforward_p1(law, &section, var)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeReading {
    /// `d + (d-1) a11 y + sum_(i>=2) d a_1i y^i`, as the computation yields.
    Proof,
    /// `d + (d-1) a11 y + sum_(i>=2) a_1i y^i`, without the factor `d`.
    Display,
}

pub fn degree_closed_form(law: &FormalGroupLaw, d: i64, y0: &RingElement, reading: DegreeReading) -> Result<RingElement> {
    let ring = y0.ring();
    let a = |i: u32| law.coefficient(1, i).embed(ring);
    let mut out = ring.int(d) + &(&a(1)? * y0).scale(&integer(d - 1));
    for i in 2..law.cap() {
        let term = &a(i)? * &y0.pow(i);
        out = out
            + match reading {
                DegreeReading::Proof => term.scale(&integer(d)),
                DegreeReading::Display => term,
            };
    }
    Ok(out)
}

/// The degree class matches the closed form obtained from the computation.
pub fn degree_formula_check(law: &FormalGroupLaw, d: i64, y0: &RingElement, var: &str) -> Report {
    Report::timed(format!("degree_formula_d{d}"), y0.ring().degree_cap(), || {
        defect(&degree_class(law, d, y0, var)?, &degree_closed_form(law, d, y0, DegreeReading::Proof)?)
    })
}

/// The displayed series differs from the computed one by exactly
/// `(d-1) sum_(i>=2) a_1i y^i`; passes when that is the whole difference.
pub fn degree_display_check(law: &FormalGroupLaw, d: i64, y0: &RingElement, var: &str) -> Report {
    Report::timed(format!("degree_display_gap_d{d}"), y0.ring().degree_cap(), || {
        let computed = degree_class(law, d, y0, var)?;
        let display = degree_closed_form(law, d, y0, DegreeReading::Display)?;
        let ring = y0.ring();
        let mut gap = ring.zero();
        for i in 2..law.cap() {
            gap = gap + (&law.coefficient(1, i).embed(ring)? * &y0.pow(i)).scale(&integer(d - 1));
        }
        defect(&(&computed - &display), &gap)
    })
}

/// `f_*(f^*(x) y) = x f_*(y)` for a projection scenario.
pub fn projection_formula_check(scenario: &Scenario, x: &RingElement, y: &RingElement) -> Report {
    Report::timed("projection_formula", scenario.base().degree_cap(), || {
        let lhs = scenario.pushforward(&(&scenario.pullback(x)? * y))?;
        let rhs = x.checked_mul(&scenario.pushforward(y)?)?;
        defect(&lhs, &rhs)
    })
}

/// Quarantine oracle: the residue rule on `P^1` agrees with the explicit
/// rule on every sample.
pub fn pn_agrees_with_p1(law: &FormalGroupLaw, samples: &[RingElement], var: &str) -> Report {
    let cap = samples.first().map_or(law.cap(), |u| u.ring().degree_cap());
    Report::timed("pn_oracle_p1", cap, || {
        for u in samples {
            if let Some(d) = defect(&pushforward_pn(law, 1, u, var)?, &pushforward_p1(law, u, var)?)? {
                return Ok(Some(d));
            }
        }
        Ok(None)
    })
}

/// Quarantine oracle: with the additive law, `p_*(x^i)` is `1` for `i = n`
/// and `0` otherwise, for `n = 1..=max_n`.
pub fn pn_chow_degrees(max_n: u32, cap: u32) -> Report {
    Report::timed("pn_oracle_chow", cap, || {
        for n in 1..=max_n {
            let base = crate::coeffring::GradedRing::new(vec![], cap.max(n))?;
            let law = FormalGroupLaw::additive(&base);
            let ring = pn_ring(&base, "x", n)?;
            let x = ring.generator("x")?;
            for i in 0..=n {
                let got = pushforward_pn(&law, n, &x.pow(i), "x")?;
                let want = ring.int(i64::from(i == n));
                if let Some(d) = defect(&got, &want)? {
                    return Ok(Some(d));
                }
            }
        }
        Ok(None)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::GradedRing;
    use crate::fgl::beta_ring;

    fn p1_over(law: &FormalGroupLaw) -> Ring {
        pn_ring(law.ring(), "x", 1).unwrap()
    }

    #[test]
    fn p1_rule() {
        let f = FormalGroupLaw::universal(4).unwrap();
        let r = p1_over(&f);
        let x = r.generator("x").unwrap();
        assert!(pushforward_p1(&f, &x, "x").unwrap().is_one());
        assert_eq!(pushforward_p1(&f, &r.one(), "x").unwrap().to_string(), "-a11");
        let add = FormalGroupLaw::additive(&beta_ring(4).unwrap());
        let r = p1_over(&add);
        assert!(pushforward_p1(&add, &r.one(), "x").unwrap().is_zero());
        let bad = GradedRing::new(vec![Generator::new("x", 1)], 4).unwrap();
        assert!(pushforward_p1(&add, &bad.one(), "x").is_err());
    }

    #[test]
    fn pn_additive_degrees() {
        let base = GradedRing::new(vec![], 5).unwrap();
        let add = FormalGroupLaw::additive(&base);
        let r = pn_ring(&base, "x", 2).unwrap();
        let x = r.generator("x").unwrap();
        assert!(pushforward_pn(&add, 2, &x.pow(2), "x").unwrap().is_one());
        assert!(pushforward_pn(&add, 2, &r.one(), "x").unwrap().is_zero());
        assert!(pn_chow_degrees(3, 5).passed());
        let free = base.extend(vec![Generator::new("x", 1)]).unwrap();
        let x3 = free.generator("x").unwrap().pow(3);
        assert_eq!(pushforward_pn(&add, 2, &x3, "x"), Err(Error::Unreduced));
    }

    #[test]
    fn key_lemma_rank_one() {
        for law in [
            FormalGroupLaw::additive(&GradedRing::new(vec![], 5).unwrap()),
            FormalGroupLaw::multiplicative(&beta_ring(5).unwrap(), &beta_ring(5).unwrap().generator("beta").unwrap())
                .unwrap(),
            FormalGroupLaw::universal(5).unwrap(),
        ] {
            let r = law.ring().extend(vec![Generator::new("x", 1)]).unwrap();
            let v = VirtualBundle::line(&r.generator("x").unwrap()).unwrap();
            let rep = key_lemma_check(&law, &v);
            assert!(rep.passed(), "{} {rep}", law.kind());
            let triv = VirtualBundle::trivial(&r, 1);
            assert!(key_lemma_check(&law, &triv).passed());
        }
    }

    #[test]
    fn key_lemma_rank_two_universal() {
        let law = FormalGroupLaw::universal(4).unwrap();
        let r = law.ring().extend(vec![Generator::new("x1", 1), Generator::new("x2", 1)]).unwrap();
        let v = VirtualBundle::split(&r, vec![r.generator("x1").unwrap(), r.generator("x2").unwrap()]).unwrap();
        let rep = key_lemma_check(&law, &v);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn excess_cases() {
        let law = FormalGroupLaw::universal(3).unwrap();
        let r = law.ring().extend(vec![Generator::new("x1", 1), Generator::new("x2", 1)]).unwrap();
        let (x1, x2) = (r.generator("x1").unwrap(), r.generator("x2").unwrap());
        let f = VirtualBundle::split(&r, vec![x1.clone(), x2]).unwrap();
        let g = VirtualBundle::line(&x1).unwrap();
        assert!(excess_check(&law, &f, &f).passed());
        assert!(excess_check(&law, &f, &g).passed());
        let rep = excess_check(&law, &g, &f);
        assert!(rep.failed());
        assert!(rep.witness.unwrap().contains("do not differ"));
    }

    #[test]
    fn ramification_examples() {
        let r = GradedRing::new(vec![Generator::nilpotent("e1", 1, 3), Generator::nilpotent("e2", 1, 3)], 6).unwrap();
        let (e1, e2) = (r.generator("e1").unwrap(), r.generator("e2").unwrap());
        let add = FormalGroupLaw::additive(&r);
        assert_eq!(ramification_class(&add, &[(1, e1.clone())]).unwrap(), e1);
        assert_eq!(ramification_class(&add, &[(2, e1.clone()), (3, e2.clone())]).unwrap().to_string(), "2*e1 + 3*e2");
        let mult = FormalGroupLaw::multiplicative(&r, &r.one()).unwrap();
        assert_eq!(ramification_class(&mult, &[(2, e1.clone())]).unwrap().to_string(), "2*e1 - e1^2");
        assert!(ramification_class(&mult, &[]).unwrap().is_zero());
    }

    #[test]
    fn self_intersection_examples() {
        let r = GradedRing::new(vec![Generator::new("x1", 1), Generator::new("x2", 1)], 5).unwrap();
        let (x1, x2) = (r.generator("x1").unwrap(), r.generator("x2").unwrap());
        assert_eq!(self_intersection(&VirtualBundle::line(&x1).unwrap()).unwrap(), x1);
        assert!(self_intersection(&VirtualBundle::zero(&r)).unwrap().is_one());
        let n = VirtualBundle::split(&r, vec![x1.clone(), x2.clone()]).unwrap();
        assert_eq!(self_intersection(&n).unwrap(), &x1 * &x2);
    }

    #[test]
    fn degree_class_examples() {
        let add = FormalGroupLaw::additive(&GradedRing::new(vec![], 5).unwrap());
        let r = pn_ring(&add.ring().extend(vec![Generator::new("y", 1)]).unwrap(), "x", 1).unwrap();
        let y = r.generator("y").unwrap();
        for d in 0..4 {
            assert_eq!(degree_class(&add, d, &y, "x").unwrap(), r.int(d));
            assert_eq!(degree_class(&add, d, &r.zero(), "x").unwrap(), r.int(d));
        }
        let uni = FormalGroupLaw::universal(5).unwrap();
        let r = pn_ring(&uni.ring().extend(vec![Generator::new("y", 1)]).unwrap(), "x", 1).unwrap();
        let y = r.generator("y").unwrap();
        for d in 1..=3 {
            assert!(degree_formula_check(&uni, d, &y, "x").passed());
            assert!(degree_display_check(&uni, d, &y, "x").passed());
        }
        let two = degree_class(&uni, 2, &y, "x").unwrap();
        assert_eq!(two.to_string(), "2 + a11*y + 2*a12*y^2 + 2*a13*y^3 + 2*a14*y^4");
    }
}
