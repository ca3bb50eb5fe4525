//! Script evaluation. Declarations are processed in order; check directives
//! are collected with their arguments already evaluated and then run
//! concurrently, reports coming back in source order.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use orientcalc::chern::{
    euler_class, nilpotence_check, thom_class, thom_mul_check, whitney_check, ProjectiveBundleRing, VirtualBundle,
};
use orientcalc::coeffring::{GradedRing, Generator, PowerSeries, Ring, RingElement};
use orientcalc::fgl::{fgl_axioms_check, morphism_check, FormalGroupLaw, OrientationMorphism};
use orientcalc::gysin::{
    degree_display_check, degree_formula_check, excess_check, fresh_name, key_lemma_check, pn_chow_degrees, pn_ring,
    pushforward_p1, pushforward_pn, ramification_check, self_intersection_check, Scenario,
};
use orientcalc::par::map_ordered;
use orientcalc::report::{defect, Report};
use orientcalc::rr::{
    chern_character, grr_check, todd_chern_relation_check, todd_multiplicativity_check, todd_virtual, ToddTransformation,
};
use orientcalc::DEFAULT_CAP;

use crate::ast::{Expr, FglDecl, Script, Stmt};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Cap used by declarations that do not follow a `ring` statement.
    pub cap: u32,
    pub jobs: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { cap: DEFAULT_CAP, jobs: None }
    }
}

#[derive(Clone)]
pub enum Value {
    Ring(Ring),
    Law(FormalGroupLaw),
    Bundle(VirtualBundle),
    Elem(RingElement),
    Morph(Arc<ToddTransformation>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Ring(_) => "a ring",
            Value::Law(_) => "a formal group law",
            Value::Bundle(_) => "a bundle",
            Value::Elem(_) => "an element",
            Value::Morph(_) => "a morphism",
        }
    }
}

type EvalResult<T> = Result<T, String>;

fn core<T>(r: orientcalc::Result<T>) -> EvalResult<T> {
    r.map_err(|e| e.to_string())
}

/// Evaluates a parsed script and returns one report per check directive.
pub fn run(script: &Script, opts: &RunOptions) -> Vec<Report> {
    run_with(script, opts, Vec::new())
}

/// As [`run`], with extra names bound before the first statement.
pub fn run_with(script: &Script, opts: &RunOptions, preset: Vec<(String, Value)>) -> Vec<Report> {
    let mut env = Env::new(opts.cap);
    for (k, v) in preset {
        env.names.insert(k, Ok(v));
    }
    let mut jobs: Vec<Job> = Vec::new();
    for stmt in &script.statements {
        match stmt {
            Stmt::Check { name, args } => {
                let args = args.iter().map(|a| env.eval(a)).collect::<EvalResult<Vec<_>>>();
                jobs.push(Job { name: name.name.clone(), cap: env.cap(), args });
            }
            other => env.declare(other),
        }
    }
    map_ordered(&jobs, opts.jobs, Job::run)
}

struct Job {
    name: String,
    cap: u32,
    args: EvalResult<Vec<Value>>,
}

impl Job {
    fn run(&self) -> Report {
        let start = std::time::Instant::now();
        let mut r = match &self.args {
            Ok(args) => match dispatch(&self.name, self.cap, args) {
                Ok(r) => r,
                Err(e) => Report::fail(&self.name, self.cap, format!("error: {e}")),
            },
            Err(e) => Report::fail(&self.name, self.cap, format!("error: {e}")),
        };
        r.check = self.name.clone();
        r.elapsed_ms = start.elapsed().as_millis() as u64;
        r
    }
}

struct Env {
    default_cap: u32,
    ring: Option<Ring>,
    universal: Option<Ring>,
    names: HashMap<String, EvalResult<Value>>,
}

impl Env {
    fn new(default_cap: u32) -> Self {
        Env { default_cap, ring: None, universal: None, names: HashMap::new() }
    }

    fn cap(&self) -> u32 {
        self.ring.as_ref().map_or(self.default_cap, |r| r.degree_cap())
    }

    /// The ring scalars live in: the current ring, or the rationals.
    fn scalars(&self) -> EvalResult<Ring> {
        match &self.ring {
            Some(r) => Ok(r.clone()),
            None => core(GradedRing::new(vec![], self.default_cap)),
        }
    }

    fn declare(&mut self, stmt: &Stmt) {
        match stmt {
            Stmt::Ring { name, gens, cap } => {
                let gs = gens
                    .iter()
                    .map(|g| match g.nilpotency {
                        Some(n) => Generator::nilpotent(g.name.name.clone(), g.degree, n),
                        None => Generator::new(g.name.name.clone(), g.degree),
                    })
                    .collect();
                match GradedRing::new(gs, *cap) {
                    Ok(ring) => {
                        for g in gens {
                            let v = core(ring.generator(&g.name.name)).map(Value::Elem);
                            self.names.insert(g.name.name.clone(), v);
                        }
                        self.names.insert(name.name.clone(), Ok(Value::Ring(ring.clone())));
                        self.ring = Some(ring);
                    }
                    Err(e) => {
                        let msg = format!("ring `{}`: {e}", name.name);
                        for g in gens {
                            self.names.insert(g.name.name.clone(), Err(msg.clone()));
                        }
                        self.names.insert(name.name.clone(), Err(msg));
                    }
                }
            }
            Stmt::Fgl { name, law } => {
                let v = self.law(law).map(Value::Law);
                if let (Ok(Value::Law(l)), FglDecl::Universal) = (&v, law) {
                    self.universal = Some(l.ring().clone());
                }
                self.names.insert(name.name.clone(), v);
            }
            Stmt::Bundle { name, plus, minus } => {
                let v = self.bundle(plus, minus).map(Value::Bundle);
                self.names.insert(name.name.clone(), v);
            }
            Stmt::Let { name, expr } => {
                let v = self.eval(expr);
                self.names.insert(name.name.clone(), v);
            }
            Stmt::Morphism { name, ctor, args } => {
                let v = self.morphism(&ctor.name, args).map(|t| Value::Morph(Arc::new(t)));
                self.names.insert(name.name.clone(), v);
            }
            Stmt::Check { .. } => {}
        }
    }

    fn law(&self, decl: &FglDecl) -> EvalResult<FormalGroupLaw> {
        match decl {
            FglDecl::Additive => Ok(FormalGroupLaw::additive(&core(GradedRing::new(vec![], self.cap()))?)),
            FglDecl::Universal => core(FormalGroupLaw::universal(self.cap())),
            FglDecl::Multiplicative(e) => {
                let beta = elem(self.eval(e)?)?;
                let beta = core(beta.embed(&support(&beta)?))?;
                core(FormalGroupLaw::multiplicative(beta.ring(), &beta))
            }
        }
    }

    fn bundle(&self, plus: &[Expr], minus: &[Expr]) -> EvalResult<VirtualBundle> {
        let plus = plus.iter().map(|e| self.eval(e).and_then(elem)).collect::<EvalResult<Vec<_>>>()?;
        let minus = minus.iter().map(|e| self.eval(e).and_then(elem)).collect::<EvalResult<Vec<_>>>()?;
        let mut ring = self.scalars()?;
        for r in plus.iter().chain(&minus) {
            ring = join(&ring, r.ring())?;
        }
        let lift = |rs: Vec<RingElement>| rs.iter().map(|r| core(r.embed(&ring))).collect::<EvalResult<Vec<_>>>();
        core(VirtualBundle::new(&ring, lift(plus)?, lift(minus)?))
    }

    fn morphism(&self, ctor: &str, args: &[Expr]) -> EvalResult<ToddTransformation> {
        let m = match ctor {
            "chern_character" => core(chern_character(self.cap()))?,
            "identity" => OrientationMorphism::identity(&law(self.eval(&args[0])?)?),
            "twist" => {
                let Some((first, rest)) = args.split_first() else {
                    return Err("twist needs a target law".into());
                };
                let target = law(self.eval(first)?)?;
                let ring = target.ring();
                let mut coeffs = vec![ring.zero(), ring.one()];
                for a in rest {
                    coeffs.push(core(elem(self.eval(a)?)?.embed(ring))?);
                }
                let n = (target.cap() as usize).max(coeffs.len() - 1);
                let psi = core(PowerSeries::new(ring, coeffs, n))?;
                core(OrientationMorphism::twisted_source(&target, psi))?
            }
            other => return Err(format!("unknown morphism constructor `{other}`")),
        };
        core(ToddTransformation::new(m))
    }

    fn lookup(&self, name: &str) -> EvalResult<Value> {
        if let Some(v) = self.names.get(name) {
            return v.clone().map_err(|e| format!("`{name}` is unavailable: {e}"));
        }
        if let Some(u) = &self.universal {
            if u.contains(name) {
                return core(u.generator(name)).map(Value::Elem);
            }
        }
        Err(format!("`{name}` is not defined"))
    }

    fn eval(&self, e: &Expr) -> EvalResult<Value> {
        let num = |e: &Expr| self.eval(e).and_then(elem);
        let v = match e {
            Expr::Int(n) => Value::Elem(self.scalars()?.constant(BigRational::from_integer(n.clone()))),
            Expr::Rat(p, q) => Value::Elem(self.scalars()?.constant(BigRational::new(p.clone(), q.clone()))),
            Expr::Name(id) => self.lookup(&id.name)?,
            Expr::Neg(a) => Value::Elem(-num(a)?),
            Expr::Add(a, b) => {
                let (x, y) = unify(&num(a)?, &num(b)?)?;
                Value::Elem(&x + &y)
            }
            Expr::Sub(a, b) => {
                let (x, y) = unify(&num(a)?, &num(b)?)?;
                Value::Elem(&x - &y)
            }
            Expr::Mul(a, b) => {
                let (x, y) = unify(&num(a)?, &num(b)?)?;
                Value::Elem(&x * &y)
            }
            Expr::Pow(a, k) => Value::Elem(num(a)?.pow(*k)),
            Expr::Call(f, args) => {
                let vals = args.iter().map(|a| self.eval(a)).collect::<EvalResult<Vec<_>>>()?;
                Value::Elem(call(&f.name, vals)?)
            }
        };
        Ok(v)
    }
}

fn elem(v: Value) -> EvalResult<RingElement> {
    match v {
        Value::Elem(e) => Ok(e),
        other => Err(format!("expected an element, found {}", other.kind())),
    }
}

fn law(v: Value) -> EvalResult<FormalGroupLaw> {
    match v {
        Value::Law(l) => Ok(l),
        other => Err(format!("expected a formal group law, found {}", other.kind())),
    }
}

fn bundle(v: Value) -> EvalResult<VirtualBundle> {
    match v {
        Value::Bundle(b) => Ok(b),
        other => Err(format!("expected a bundle, found {}", other.kind())),
    }
}

fn morph(v: Value) -> EvalResult<Arc<ToddTransformation>> {
    match v {
        Value::Morph(t) => Ok(t),
        other => Err(format!("expected a morphism, found {}", other.kind())),
    }
}

fn integer(v: Value) -> EvalResult<i64> {
    let e = elem(v)?;
    let q = e.constant_term();
    if !e.is_constant() || !q.is_integer() {
        return Err(format!("expected an integer, found `{e}`"));
    }
    q.to_integer().to_i64().ok_or_else(|| format!("integer `{e}` out of range"))
}

/// The smallest ring holding `u`: only the generators it mentions.
fn support(u: &RingElement) -> EvalResult<Ring> {
    let ring = u.ring();
    let used = ring
        .generators()
        .iter()
        .enumerate()
        .filter(|(i, _)| u.max_exponent(*i) > 0)
        .map(|(_, g)| g.clone())
        .collect();
    core(GradedRing::new(used, ring.degree_cap()))
}

fn same(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// The union of two rings at the smaller cap.
fn join(a: &Ring, b: &Ring) -> EvalResult<Ring> {
    if same(a, b) {
        return Ok(a.clone());
    }
    let cap = a.degree_cap().min(b.degree_cap());
    let base = if a.degree_cap() == cap { a.clone() } else { core(a.with_cap(cap))? };
    core(base.union(b))
}

fn unify(a: &RingElement, b: &RingElement) -> EvalResult<(RingElement, RingElement)> {
    if same(a.ring(), b.ring()) {
        return Ok((a.clone(), b.clone()));
    }
    let ring = join(a.ring(), b.ring())?;
    Ok((core(a.embed(&ring))?, core(b.embed(&ring))?))
}

/// Moves an element into a ring that also carries the law's coefficients.
fn lift(u: &RingElement, law: &FormalGroupLaw) -> EvalResult<RingElement> {
    let ring = join(u.ring(), law.ring())?;
    core(u.embed(&ring))
}

fn lift_bundle(v: &VirtualBundle, ring: &Ring) -> EvalResult<VirtualBundle> {
    let target = join(v.ring(), ring)?;
    core(v.embed(&target))
}

fn unify_bundles(v: &VirtualBundle, w: &VirtualBundle) -> EvalResult<(VirtualBundle, VirtualBundle)> {
    let ring = join(v.ring(), w.ring())?;
    Ok((core(v.embed(&ring))?, core(w.embed(&ring))?))
}

/// The last generator of degree one with `var^(n+1) = 0`.
fn projective_variable(u: &RingElement, n: u32) -> EvalResult<String> {
    u.ring()
        .generators()
        .iter()
        .rev()
        .find(|g| g.degree == 1 && g.nilpotency == Some(n + 1))
        .map(|g| g.name.clone())
        .ok_or_else(|| format!("no generator of degree 1 with nilp {} for P^{n}", n + 1))
}

fn call(f: &str, args: Vec<Value>) -> EvalResult<RingElement> {
    let mut it = args.into_iter();
    let mut next = || it.next().ok_or_else(|| format!("too few arguments to `{f}`"));
    match f {
        "fsum" | "c1tensor" => {
            let l = law(next()?)?;
            let (a, b) = unify(&elem(next()?)?, &elem(next()?)?)?;
            let (a, b) = unify(&lift(&a, &l)?, &b)?;
            core(l.formal_sum(&a, &b))
        }
        "finv" => {
            let l = law(next()?)?;
            core(l.formal_inverse(&lift(&elem(next()?)?, &l)?))
        }
        "nseries" => {
            let l = law(next()?)?;
            let n = integer(next()?)?;
            core(l.n_series(n, &lift(&elem(next()?)?, &l)?))
        }
        "euler" => core(euler_class(&bundle(next()?)?)),
        "thom" => {
            let v = bundle(next()?)?;
            let var = fresh_name(v.ring(), "c");
            let proj = core(ProjectiveBundleRing::new(&core(v.direct_sum(&VirtualBundle::trivial(v.ring(), 1)))?, &var))?;
            core(thom_class(&v, &proj))
        }
        "todd" => {
            let t = morph(next()?)?;
            let v = lift_bundle(&bundle(next()?)?, t.morphism().source().ring())?;
            core(todd_virtual(&t, &v))
        }
        "chern" => {
            let v = bundle(next()?)?;
            let i = integer(next()?)?;
            let i = usize::try_from(i).map_err(|_| format!("negative Chern class index {i}"))?;
            core(v.chern_class(i))
        }
        "push_p1" => {
            let l = law(next()?)?;
            let u = lift(&elem(next()?)?, &l)?;
            let var = projective_variable(&u, 1)?;
            core(pushforward_p1(&l, &u, &var))
        }
        "push_pn" => {
            let l = law(next()?)?;
            let n = integer(next()?)?;
            let n = u32::try_from(n).map_err(|_| format!("P^{n} needs n >= 0"))?;
            let u = lift(&elem(next()?)?, &l)?;
            let var = projective_variable(&u, n)?;
            core(pushforward_pn(&l, n, &u, &var))
        }
        other => Err(format!("unknown function `{other}`")),
    }
}

fn degree_inputs(args: &[Value]) -> EvalResult<(FormalGroupLaw, i64, RingElement, String)> {
    let l = law(args[0].clone())?;
    let d = integer(args[1].clone())?;
    let y = lift(&elem(args[2].clone())?, &l)?;
    let var = fresh_name(y.ring(), "x");
    let ring = core(pn_ring(y.ring(), &var, 1))?;
    Ok((l, d, core(y.embed(&ring))?, var))
}

fn dispatch(name: &str, cap: u32, args: &[Value]) -> EvalResult<Report> {
    let arg = |i: usize| args.get(i).cloned().ok_or_else(|| format!("missing argument {}", i + 1));
    let r = match name {
        "fgl_axioms" => fgl_axioms_check(&law(arg(0)?)?),
        "morphism" => {
            let t = morph(arg(0)?)?;
            let m = t.morphism();
            morphism_check(m.source(), m.target(), m.psi())
        }
        "whitney" => {
            let (v, w) = unify_bundles(&bundle(arg(0)?)?, &bundle(arg(1)?)?)?;
            whitney_check(&v, &w)
        }
        "nilpotence" => nilpotence_check(&bundle(arg(0)?)?),
        "thom_mul" => {
            let (v, w) = unify_bundles(&bundle(arg(0)?)?, &bundle(arg(1)?)?)?;
            thom_mul_check(&v, &w)
        }
        "key_lemma" => {
            let l = law(arg(0)?)?;
            key_lemma_check(&l, &lift_bundle(&bundle(arg(1)?)?, l.ring())?)
        }
        "excess" => {
            let l = law(arg(0)?)?;
            let (f, g) = unify_bundles(&bundle(arg(1)?)?, &bundle(arg(2)?)?)?;
            let (f, g) = unify_bundles(&lift_bundle(&f, l.ring())?, &g)?;
            excess_check(&l, &f, &g)
        }
        "ramification" => {
            let l = law(arg(0)?)?;
            let mut comps = Vec::new();
            let mut ring = l.ring().clone();
            for pair in args[1..].chunks(2) {
                let m = integer(pair[0].clone())?;
                let e = elem(pair[1].clone())?;
                ring = join(&ring, e.ring())?;
                comps.push((m, e));
            }
            let comps = comps
                .into_iter()
                .map(|(m, e)| Ok((m, core(e.embed(&ring))?)))
                .collect::<EvalResult<Vec<_>>>()?;
            ramification_check(&l, &comps)
        }
        "self_intersection" => self_intersection_check(&bundle(arg(0)?)?),
        "degree_formula" => {
            let (l, d, y, var) = degree_inputs(args)?;
            degree_formula_check(&l, d, &y, &var)
        }
        "degree_display_gap" => {
            let (l, d, y, var) = degree_inputs(args)?;
            degree_display_check(&l, d, &y, &var)
        }
        "pn_oracle_chow" => {
            let n = integer(arg(0)?)?;
            let n = u32::try_from(n).map_err(|_| format!("P^{n} needs n >= 0"))?;
            pn_chow_degrees(n, cap.max(n))
        }
        "todd_chern_relation" => {
            let t = morph(arg(0)?)?;
            let x = lift(&elem(arg(1)?)?, t.morphism().source())?;
            todd_chern_relation_check(&t, &x)
        }
        "todd_multiplicative" => {
            let t = morph(arg(0)?)?;
            let (v, w) = unify_bundles(&bundle(arg(1)?)?, &bundle(arg(2)?)?)?;
            let (v, w) = unify_bundles(&lift_bundle(&v, t.morphism().source().ring())?, &w)?;
            todd_multiplicativity_check(&t, &v, &w)
        }
        "grr" => {
            let t = morph(arg(0)?)?;
            let l = t.morphism().source();
            let v = lift_bundle(&bundle(arg(1)?)?, l.ring())?;
            grr_check(&t, &core(Scenario::zero_section(l, &v))?)
        }
        "grr_p1" => {
            let t = morph(arg(0)?)?;
            let l = t.morphism().source();
            grr_check(&t, &core(Scenario::p1_projection(l, l.ring(), &l.ring().zero()))?)
        }
        "equal" => {
            let (a, b) = unify(&elem(arg(0)?)?, &elem(arg(1)?)?)?;
            Report::from_defect(name, a.ring().degree_cap(), core(defect(&a, &b))?)
        }
        other => return Err(format!("unknown check `{other}`")),
    };
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use orientcalc::report::Status;

    fn run_src(src: &str) -> Vec<Report> {
        run(&parse(src).unwrap(), &RunOptions::default())
    }

    #[test]
    fn empty_script() {
        assert!(run_src("").is_empty());
    }

    #[test]
    fn fsum_multiplicative() {
        let rs = run_src(
            "ring R[x: deg 1 nilp 3] cap 5\nfgl M = multiplicative(1)\nlet u = fsum(M, x, x)\ncheck equal(u, 2*x - x^2)\ncheck fgl_axioms(M)",
        );
        assert!(rs.iter().all(Report::passed), "{rs:?}");
        assert_eq!(rs[1].to_string(), "PASS fgl_axioms (cap 5)");
    }

    #[test]
    fn failing_custom_law() {
        let q = GradedRing::new(vec![], 3).unwrap();
        let bad = FormalGroupLaw::custom(&q, [((1, 2), q.one())]).unwrap();
        let script = crate::parser::parse_with_names("check fgl_axioms(B)", &["B"]).unwrap();
        let rs = run_with(&script, &RunOptions::default(), vec![("B".into(), Value::Law(bad))]);
        assert_eq!(rs[0].status, Status::Fail);
        let w = rs[0].witness.clone().unwrap();
        let reparsed = parse(&format!("ring R[x: deg 1, y: deg 1, z: deg 1] cap 3\nlet w = {w}")).unwrap();
        assert_eq!(reparsed.statements.len(), 2);
    }

    #[test]
    fn errors_surface_in_checks() {
        let rs = run_src("ring R[x: deg 1] cap 3\nlet u = chern(x, 1)\ncheck equal(u, x)\ncheck equal(x, x)");
        assert_eq!(rs[0].status, Status::Fail);
        assert!(rs[0].witness.as_deref().unwrap().starts_with("error: "));
        assert!(rs[1].passed());
    }

    #[test]
    fn library_checks() {
        let rs = run_src(
            "ring R[x: deg 1, y: deg 1, y0: deg 1, p: deg 1 nilp 2, h: deg 1 nilp 3] cap 4
fgl A = additive
fgl U = universal
fgl M = multiplicative(1)
bundle L = [x]
bundle V = [x, y] - [y0]
bundle W = [y]
bundle S = [x, y]
morphism CH = chern_character
morphism I = identity(U)
morphism T = twist(U, a11, 1/2)
check whitney(V, W)
check nilpotence(V)
check thom_mul(L, W)
check key_lemma(M, L)
check excess(U, S, L)
check ramification(U, 2, x, -1, y)
check self_intersection(W)
check degree_formula(U, 2, y0)
check degree_display_gap(U, 3, y0)
check pn_oracle_chow(2)
check todd_chern_relation(CH, x)
check todd_multiplicative(T, V, W)
check grr(CH, L)
check grr(T, L)
check grr_p1(I)
check morphism(T)
check equal(push_p1(U, 1), -a11)
check equal(push_pn(A, 2, 1), 0)",
        );
        let bad: Vec<String> = rs.iter().filter(|r| !r.passed()).map(|r| r.to_string()).collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn deterministic() {
        let src = "ring R[x: deg 1, y: deg 1] cap 4\nfgl U = universal\nbundle V = [x, y]\ncheck key_lemma(U, V)\ncheck equal(x, y)";
        let strip = |mut rs: Vec<Report>| {
            rs.iter_mut().for_each(|r| r.elapsed_ms = 0);
            rs
        };
        assert_eq!(strip(run_src(src)), strip(run_src(src)));
    }
}
