//! Formal residues of Laurent expansions in an auxiliary variable `t`.
//!
//! For a projective bundle `P(E)` with roots `l_1..l_n` the pushforward of
//! `c^k` is `Res_t t^k w(t) / prod (t -_F l_j)`, `w` the invariant
//! differential. Each factor `1/(t -_F l)` is expanded for nilpotent `l`:
//! with `m = [-1]_F l`, `t -_F l = t + m H(t)` and
//! `1/(t + m H) = sum_k (-m H)^k / t^(k+1)`, which terminates.

use std::collections::BTreeMap;

use crate::coeffring::{Ring, RingElement};
use crate::fgl::FormalGroupLaw;
use crate::Result;

/// Finite Laurent polynomial in `t`, truncated above `top`.
#[derive(Clone, Debug)]
pub(crate) struct Laurent {
    ring: Ring,
    top: i32,
    terms: BTreeMap<i32, RingElement>,
}

impl Laurent {
    pub(crate) fn new(ring: &Ring, top: i32) -> Self {
        Laurent { ring: ring.clone(), top, terms: BTreeMap::new() }
    }

    pub(crate) fn monomial(ring: &Ring, top: i32, k: i32, c: RingElement) -> Self {
        let mut l = Self::new(ring, top);
        l.add_term(k, c);
        l
    }

    fn add_term(&mut self, k: i32, c: RingElement) {
        if k > self.top || c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(|| self.ring.zero());
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        let top = self.top.min(other.top);
        let mut out = Self::new(&self.ring, top);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if i + j <= top {
                    out.add_term(i + j, a * b);
                }
            }
        }
        out
    }

    pub(crate) fn coeff(&self, k: i32) -> RingElement {
        self.terms.get(&k).cloned().unwrap_or_else(|| self.ring.zero())
    }
}

/// Order of the pole of `1/(t -_F l)` at `t = 0`: one more than the largest
/// power of `[-1]_F l` that survives truncation.
fn pole_order(m: &RingElement) -> i32 {
    let mut k = 1;
    let mut p = m.clone();
    while !p.is_zero() {
        k += 1;
        p = &p * m;
    }
    k
}

/// `1/(t -_F l)` as a Laurent polynomial over the ring of `l`.
fn inverse_difference(law: &FormalGroupLaw, l: &RingElement, top: i32) -> Result<Laurent> {
    let ring = l.ring();
    let m = law.formal_inverse(l)?;
    let wide = top + pole_order(&m);
    // H(t) = 1 + sum a_ij t^i m^(j-1)
    let mut h = Laurent::monomial(ring, wide, 0, ring.one());
    for (&(i, j), a) in law.coefficients() {
        let c = &a.embed(ring)? * &m.pow(j - 1);
        h.add_term(i as i32, c);
    }
    let minus_mh = h.mul(&Laurent::monomial(ring, wide, 0, -&m));
    let mut out = Laurent::new(ring, top);
    let mut power = Laurent::monomial(ring, wide, 0, ring.one());
    let mut k = 0;
    while !power.terms.is_empty() {
        let shifted = power.mul(&Laurent::monomial(ring, wide, -(k + 1), ring.one()));
        out = out.add(&shifted);
        power = power.mul(&minus_mh);
        k += 1;
    }
    Ok(out)
}

/// `q_*(c^k)` for `k = 0..kmax` on `P(E)`, `E` with the given roots in
/// `ring`.
pub(crate) fn push_basis(law: &FormalGroupLaw, roots: &[RingElement], ring: &Ring, kmax: usize) -> Result<Vec<RingElement>> {
    let mus = roots.iter().map(|l| law.formal_inverse(l)).collect::<Result<Vec<_>>>()?;
    let poles: i32 = mus.iter().map(pole_order).sum();
    let top = poles - 1;
    let omega = law.invariant_differential(top.max(0) as usize)?;
    let mut acc = Laurent::new(ring, top);
    for (k, c) in omega.coeffs().iter().enumerate() {
        acc.add_term(k as i32, c.embed(ring)?);
    }
    for l in roots {
        acc = acc.mul(&inverse_difference(law, l, top)?);
    }
    Ok((0..=kmax).map(|k| acc.coeff(-1 - k as i32)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{Generator, GradedRing};

    #[test]
    fn trivial_p1() {
        let f = FormalGroupLaw::universal(4).unwrap();
        let ring = f.ring().clone();
        let pushes = push_basis(&f, &[ring.zero(), ring.zero()], &ring, 1).unwrap();
        assert_eq!(pushes[0], -f.coefficient(1, 1));
        assert!(pushes[1].is_one());
    }

    #[test]
    fn additive_twisted_line() {
        let r = GradedRing::new(vec![Generator::new("l1", 1), Generator::new("l2", 1)], 5).unwrap();
        let f = FormalGroupLaw::additive(&r);
        let roots = [r.generator("l1").unwrap(), r.generator("l2").unwrap()];
        let pushes = push_basis(&f, &roots, &r, 3).unwrap();
        // complete homogeneous symmetric polynomials h_(k-1)
        assert!(pushes[0].is_zero());
        assert!(pushes[1].is_one());
        assert_eq!(pushes[2], &roots[0] + &roots[1]);
        assert_eq!(pushes[3], &(&roots[0] * &roots[0]) + &(&(&roots[0] * &roots[1]) + &(&roots[1] * &roots[1])));
    }
}
