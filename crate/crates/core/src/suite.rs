//! The built-in identity suite: every check of the library instantiated on
//! preset and seeded random data, evaluated in parallel, reported in a fixed
//! order.
//!
//! Pushforward identities rely on the residue rule for `P^n`. The two
//! quarantine oracles for that rule run first; if either fails, the checks
//! that depend on it are reported as skipped.

use crate::chern::{nilpotence_check, projective_freeness_check, thom_mul_check, whitney_check, VirtualBundle};
use crate::coeffring::{GradedRing, Generator, PowerSeries, Ring, RingElement};
use crate::fgl::{beta_ring, fgl_axioms_check, morphism_check, FormalGroupLaw, OrientationMorphism};
use crate::gysin::{
    degree_display_check, degree_formula_check, excess_check, fundamental_class_check, key_lemma_check, pn_agrees_with_p1,
    pn_chow_degrees, pn_ring, projection_formula_check, ramification_check, self_intersection_check, Scenario,
};
use crate::par::map_ordered;
use crate::random;
use crate::report::Report;
use crate::rr::{
    chern_character, grr_check, todd_chern_relation_check, todd_cocycle_check, todd_multiplicativity_check,
    ToddTransformation,
};
use crate::{Result, DEFAULT_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub cap: u32,
    pub seed: u64,
    pub jobs: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { cap: DEFAULT_CAP, seed: 0, jobs: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Quarantine oracles for the residue pushforward.
    Oracle,
    Independent,
    /// Needs the residue pushforward.
    Pushforward,
}

type Job = Box<dyn Fn() -> Report + Send + Sync>;

pub struct Check {
    pub name: &'static str,
    pub label: String,
    pub stage: Stage,
    run: Job,
}

impl Check {
    pub fn new(
        name: &'static str,
        label: impl Into<String>,
        stage: Stage,
        run: impl Fn() -> Report + Send + Sync + 'static,
    ) -> Self {
        Check { name, label: label.into(), stage, run: Box::new(run) }
    }

    /// `name[label]`, or `name` alone.
    pub fn title(&self) -> String {
        if self.label.is_empty() {
            self.name.to_string()
        } else {
            format!("{}[{}]", self.name, self.label)
        }
    }

    pub fn run(&self) -> Report {
        let mut r = (self.run)();
        r.check = self.title();
        r
    }
}

/// Evaluates oracles first, then everything else; results come back in the
/// order of `checks`.
pub fn run_checks(checks: &[Check], jobs: Option<usize>) -> Vec<Report> {
    let oracles: Vec<&Check> = checks.iter().filter(|c| c.stage == Stage::Oracle).collect();
    let oracle_reports = map_ordered(&oracles, jobs, |c| c.run());
    let trusted = oracle_reports.iter().all(Report::passed);
    let rest: Vec<&Check> = checks.iter().filter(|c| c.stage != Stage::Oracle).collect();
    let rest_reports = map_ordered(&rest, jobs, |c| {
        if c.stage == Stage::Pushforward && !trusted {
            Report::skipped(c.title(), 0)
        } else {
            c.run()
        }
    });
    let (mut o, mut r) = (oracle_reports.into_iter(), rest_reports.into_iter());
    checks
        .iter()
        .map(|c| if c.stage == Stage::Oracle { o.next() } else { r.next() }.expect("one report per check"))
        .collect()
}

pub fn paper_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    Ok(run_checks(&paper_checks(cfg)?, cfg.jobs))
}

struct Laws {
    additive: FormalGroupLaw,
    multiplicative: FormalGroupLaw,
    universal: FormalGroupLaw,
}

impl Laws {
    fn new(cap: u32) -> Result<Self> {
        let b = beta_ring(cap)?;
        Ok(Laws {
            additive: FormalGroupLaw::additive(&b),
            multiplicative: FormalGroupLaw::multiplicative(&b, &b.generator("beta")?)?,
            universal: FormalGroupLaw::universal(cap)?,
        })
    }

    fn all(&self) -> [(&'static str, &FormalGroupLaw); 3] {
        [("additive", &self.additive), ("multiplicative", &self.multiplicative), ("universal", &self.universal)]
    }
}

fn with_roots(law: &FormalGroupLaw, names: &[&str]) -> Result<Ring> {
    law.ring().extend(names.iter().map(|n| Generator::new(*n, 1)).collect())
}

fn gens(ring: &Ring, names: &[&str]) -> Result<Vec<RingElement>> {
    names.iter().map(|n| ring.generator(n)).collect()
}

/// The complete list of checks at the configured cap. Heavy checks are
/// clamped to smaller caps, visible in their reports.
pub fn paper_checks(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let cap = cfg.cap.max(2);
    let mut rng = random::rng(cfg.seed);
    let mut out = Vec::new();

    // P^n oracles.
    {
        let law = FormalGroupLaw::universal(cap.min(5))?;
        let ring = pn_ring(&with_roots(&law, &["y"])?, "x", 1)?;
        let samples = (0..50)
            .map(|_| random::element(&mut rng, &ring, &["x", "y"], 3))
            .collect::<Result<Vec<_>>>()?;
        out.push(Check::new("pn_oracle_p1", "universal", Stage::Oracle, move || pn_agrees_with_p1(&law, &samples, "x")));
        out.push(Check::new("pn_oracle_chow", "n<=3", Stage::Oracle, move || pn_chow_degrees(3, cap.max(3))));
    }

    // Formal group laws.
    for c in 2..=cap {
        let laws = Laws::new(c)?;
        for (name, law) in laws.all() {
            let law = law.clone();
            out.push(Check::new("fgl_axioms", format!("{name}"), Stage::Independent, move || fgl_axioms_check(&law)));
        }
    }
    {
        let ch = chern_character(cap)?;
        let (s, t, p) = (ch.source().clone(), ch.target().clone(), ch.psi().clone());
        out.push(Check::new("morphism", "chern_character", Stage::Independent, move || morphism_check(&s, &t, &p)));
        let uni = FormalGroupLaw::universal(cap.min(4))?;
        let m = random::morphism(&mut rng, &uni)?;
        let (s, t, p) = (m.source().clone(), m.target().clone(), m.psi().clone());
        out.push(Check::new("morphism", "random", Stage::Independent, move || morphism_check(&s, &t, &p)));
        let q = GradedRing::new(vec![], cap)?;
        let bad_s = FormalGroupLaw::additive(&q);
        let bad_t = FormalGroupLaw::multiplicative(&q, &q.one())?;
        let shifted = PowerSeries::one_minus_exp_neg(&q, cap as usize);
        out.push(Check::new("morphism", "inverse_chern_character", Stage::Independent, move || {
            let ok = morphism_check(&bad_t, &bad_s, &shifted);
            let bad = morphism_check(&bad_s, &bad_t, &shifted);
            if ok.passed() && bad.failed() {
                ok
            } else {
                bad
            }
        }));
    }

    // Chern classes, Thom classes, projective bundles.
    let laws = Laws::new(cap.min(5))?;
    for (name, law) in laws.all() {
        let ring = with_roots(law, &["x1", "x2", "x3"])?;
        let names = ["x1", "x2", "x3"];
        for i in 0..3 {
            let v = random::virtual_bundle(&mut rng, &ring, &names, 2, 1)?;
            let w = random::virtual_bundle(&mut rng, &ring, &names, 2, 1)?;
            let (v2, w2) = (v.clone(), w.clone());
            out.push(Check::new("whitney", format!("{name},{i}"), Stage::Independent, move || whitney_check(&v2, &w2)));
            out.push(Check::new("nilpotence", format!("{name},{i}"), Stage::Independent, move || nilpotence_check(&v)));
            let a = random::bundle(&mut rng, &ring, &names, 1 + i % 2)?;
            let b = random::bundle(&mut rng, &ring, &names, 2 - i % 2)?;
            out.push(Check::new("thom_mul", format!("{name},{i}"), Stage::Independent, move || thom_mul_check(&a, &b)));
        }
        let e = random::bundle(&mut rng, &ring, &names, 3)?;
        let samples = {
            let total = ring.extend(vec![Generator::new("c", 1)])?;
            (0..4)
                .map(|_| {
                    Ok((
                        random::element(&mut rng, &total, &["c", "x1"], 2)?,
                        random::element(&mut rng, &total, &["c", "x2"], 2)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?
        };
        out.push(Check::new("pb_freeness", name, Stage::Independent, move || projective_freeness_check(&e, &samples, "c")));
    }

    // Intersection identities.
    for (name, law) in Laws::new(cap.min(5))?.all() {
        let ring = with_roots(law, &["x"])?;
        let line = VirtualBundle::line(&ring.generator("x")?)?;
        let law = law.clone();
        out.push(Check::new("key_lemma", format!("{name},rank 1"), Stage::Pushforward, move || key_lemma_check(&law, &line)));
    }
    {
        let law = FormalGroupLaw::universal(cap.min(4))?;
        let ring = with_roots(&law, &["x1", "x2"])?;
        let v = VirtualBundle::split(&ring, gens(&ring, &["x1", "x2"])?)?;
        out.push(Check::new("key_lemma", "universal,rank 2", Stage::Pushforward, move || key_lemma_check(&law, &v)));
    }
    {
        let law = FormalGroupLaw::universal(cap.min(4))?;
        let ring = with_roots(&law, &["x1", "x2"])?;
        let xs = gens(&ring, &["x1", "x2"])?;
        let f = VirtualBundle::split(&ring, xs.clone())?;
        let g = VirtualBundle::line(&xs[0])?;
        let (l2, f2) = (law.clone(), f.clone());
        out.push(Check::new("excess", "transversal", Stage::Independent, move || excess_check(&l2, &f2, &f2)));
        out.push(Check::new("excess", "rank 1", Stage::Independent, move || excess_check(&law, &f, &g)));
    }
    for (name, law) in Laws::new(cap.min(5))?.all() {
        let ring = with_roots(law, &["e1", "e2", "e3"])?;
        let es = gens(&ring, &["e1", "e2", "e3"])?;
        let comps: Vec<(i64, RingElement)> = vec![(2, es[0].clone()), (-1, es[1].clone()), (3, es[2].clone())];
        let law = law.clone();
        out.push(Check::new("ramification", name, Stage::Independent, move || ramification_check(&law, &comps)));
    }
    {
        let ring = GradedRing::new(vec![Generator::new("n1", 1), Generator::new("n2", 1)], cap)?;
        let n = VirtualBundle::split(&ring, gens(&ring, &["n1", "n2"])?)?;
        out.push(Check::new("self_intersection", "rank 2", Stage::Independent, move || self_intersection_check(&n)));
    }
    for (name, law) in [("additive", Laws::new(cap.min(5))?.additive), ("universal", FormalGroupLaw::universal(cap.min(5))?)] {
        let ring = pn_ring(&with_roots(&law, &["y"])?, "x", 1)?;
        for d in 1..=3 {
            let (l, y) = (law.clone(), ring.generator("y")?);
            out.push(Check::new("degree_formula", name, Stage::Pushforward, move || degree_formula_check(&l, d, &y, "x")));
        }
        if name == "universal" {
            for d in 1..=3 {
                let (l, y) = (law.clone(), ring.generator("y")?);
                out.push(Check::new("degree_display_gap", name, Stage::Pushforward, move || degree_display_check(&l, d, &y, "x")));
            }
        }
    }
    {
        let law = FormalGroupLaw::universal(cap.min(4))?;
        let base = with_roots(&law, &["y"])?;
        for n in 1..=2u32 {
            let s = Scenario::pn_projection(&law, &base, n)?;
            let (total, var) = s.total()?;
            let x = random::element(&mut rng, &base, &["y"], 2)?;
            let y = random::element(&mut rng, total, &[var, "y"], 3)?;
            out.push(Check::new("projection_formula", format!("P^{n}"), Stage::Pushforward, move || {
                projection_formula_check(&s, &x, &y)
            }));
        }
        let ring = with_roots(&law, &["l", "y"])?;
        let a = Scenario::zero_section(&law, &VirtualBundle::line(&ring.generator("l")?)?)?;
        let b = Scenario::p1_projection(&law, &ring, &ring.generator("y")?)?;
        out.push(Check::new("fundamental_class_composition", "", Stage::Independent, move || fundamental_class_check(&a, &b)));
    }

    // Todd classes and Riemann-Roch.
    let rr_cap = cap.min(4);
    let transformations: Vec<(&str, ToddTransformation)> = {
        let ch = chern_character(rr_cap)?;
        let uni = FormalGroupLaw::universal(rr_cap)?;
        vec![
            ("identity", ToddTransformation::new(OrientationMorphism::identity(&uni))?),
            ("chern_character", ToddTransformation::new(ch)?),
            ("random", ToddTransformation::new(random::morphism(&mut rng, &uni)?)?),
        ]
    };
    for (name, t) in &transformations {
        let law = t.morphism().source().clone();
        let ring = with_roots(&law, &["l1", "l2"])?;
        let ls = gens(&ring, &["l1", "l2"])?;
        let (t1, x) = (t.clone(), ls[0].clone());
        out.push(Check::new("todd_chern_relation", *name, Stage::Independent, move || todd_chern_relation_check(&t1, &x)));
        let v = random::virtual_bundle(&mut rng, &ring, &["l1", "l2"], 2, 1)?;
        let w = random::virtual_bundle(&mut rng, &ring, &["l1", "l2"], 2, 1)?;
        let t2 = t.clone();
        out.push(Check::new("todd_multiplicative", *name, Stage::Independent, move || todd_multiplicativity_check(&t2, &v, &w)));
        let scenarios = [
            ("L", Scenario::zero_section(&law, &VirtualBundle::line(&ls[0])?)?, Stage::Independent),
            ("L1+L2", Scenario::zero_section(&law, &VirtualBundle::split(&ring, ls.clone())?)?, Stage::Independent),
            ("P^1", Scenario::p1_projection(&law, law.ring(), &law.ring().zero())?, Stage::Pushforward),
        ];
        for (sname, s, stage) in scenarios {
            let t3 = t.clone();
            out.push(Check::new("grr", format!("{name},{sname}"), stage, move || grr_check(&t3, &s)));
        }
    }
    {
        let ch = transformations[1].1.clone();
        let id = ToddTransformation::new(OrientationMorphism::identity(ch.morphism().source()))?;
        let ring = with_roots(ch.morphism().source(), &["x"])?;
        let x = ring.generator("x")?;
        out.push(Check::new("todd_cocycle", "identity,chern_character", Stage::Independent, move || todd_cocycle_check(&id, &ch, &x)));
        let uni = FormalGroupLaw::universal(rr_cap)?;
        let second = random::morphism(&mut rng, &uni)?;
        let first = random::morphism(&mut rng, second.source())?;
        let (a, b) = (ToddTransformation::new(first)?, ToddTransformation::new(second)?);
        let ring = with_roots(&uni, &["x"])?;
        let x = ring.generator("x")?;
        out.push(Check::new("todd_cocycle", "random,random", Stage::Independent, move || todd_cocycle_check(&a, &b, &x)));
    }
    Ok(out)
}
