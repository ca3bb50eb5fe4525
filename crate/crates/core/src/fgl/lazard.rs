//! Relations among the coefficients of a generic commutative law.
//!
//! Start from independent symmetric coefficients `a_ij` (`i <= j`), expand
//! the associativity defect `F(F(x,y),z) - F(x,F(y,z))`, and read off its
//! `x^a y^b z^c` coefficients as polynomials in the `a_ij`. The ideal they
//! generate is computed slice by slice in coefficient degree (a Macaulay
//! matrix per slice, row-reduced over the rationals). Over the rationals the
//! quotient is free on `a_11, a_12, ...`; every `a_ij` with `i >= 2` is a
//! pivot of its slice and is rewritten through those.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::FormalGroupLaw;
use crate::coeffring::{GradedRing, Generator, Ring, RingElement};
use crate::{Error, Result};

/// Generator name for `a_ij`.
pub fn coefficient_name(i: u32, j: u32) -> String {
    let (i, j) = (i.min(j), i.max(j));
    if i < 10 && j < 10 {
        format!("a{i}{j}")
    } else {
        format!("a{i}_{j}")
    }
}

/// `(i, j)` pairs with `i <= j`, `i + j <= cap`; the `a_1j` come first.
fn index_pairs(cap: u32) -> Vec<(u32, u32)> {
    let mut pairs: Vec<(u32, u32)> = (1..cap).map(|j| (1, j)).collect();
    for i in 2..cap {
        for j in i..=(cap - i) {
            pairs.push((i, j));
        }
    }
    pairs
}

pub(super) fn derive(cap: u32) -> Result<(Ring, BTreeMap<(u32, u32), RingElement>)> {
    let pairs = index_pairs(cap);
    let gens: Vec<Generator> = pairs.iter().map(|&(i, j)| Generator::new(coefficient_name(i, j), 1 - (i + j) as i32)).collect();
    let generic = GradedRing::new(gens, cap)?;
    let n_std = (cap - 1) as usize;
    let weights: Vec<u32> = pairs.iter().map(|&(i, j)| i + j - 1).collect();

    let mut table = BTreeMap::new();
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let a = generic.generator_at(k);
        table.insert((i, j), a.clone());
        table.insert((j, i), a);
    }
    let law = FormalGroupLaw::custom(&generic, table)?;
    let scratch = law.scratch_ring(&["x", "y", "z"])?;
    let x = scratch.generator("x")?;
    let y = scratch.generator("y")?;
    let z = scratch.generator("z")?;
    let defect = law.formal_sum(&law.formal_sum(&x, &y)?, &z)? - law.formal_sum(&x, &law.formal_sum(&y, &z)?)?;

    // split each term into its (x, y, z) part and its coefficient part
    let n_gen = pairs.len();
    let mut relations: BTreeMap<Vec<u32>, RingElement> = BTreeMap::new();
    for (m, c) in defect.terms() {
        let exps = m.exponents();
        let key = exps[n_gen..].to_vec();
        let coeff = RingElement::from_exponents(&generic, exps[..n_gen].to_vec(), c.clone());
        let entry = relations.entry(key).or_insert_with(|| generic.zero());
        *entry = &*entry + &coeff;
    }
    let relations: Vec<(u32, RingElement)> = relations
        .into_values()
        .filter(|r| !r.is_zero())
        .map(|r| {
            let w = (-r.degrees()[0]) as u32;
            (w, r)
        })
        .collect();

    let standard = GradedRing::new(
        pairs[..n_std].iter().map(|&(i, j)| Generator::new(coefficient_name(i, j), 1 - (i + j) as i32)).collect(),
        cap,
    )?;

    let mut coeffs = BTreeMap::new();
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let value = if k < n_std {
            standard.generator_at(k)
        } else {
            rewrite_generator(&generic, &weights, n_std, &relations, k)?.embed(&standard)?
        };
        coeffs.insert((i, j), value.clone());
        coeffs.insert((j, i), value);
    }
    Ok((standard, coeffs))
}

/// All exponent vectors of the given weight.
pub(crate) fn monomials_of_weight(weights: &[u32], w: u32) -> Vec<Vec<u32>> {
    fn go(weights: &[u32], idx: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0;
        while e * weights[idx] <= left {
            cur[idx] = e;
            go(weights, idx + 1, left - e * weights[idx], cur, out);
            e += 1;
        }
        cur[idx] = 0;
    }
    let mut out = Vec::new();
    go(weights, 0, w, &mut vec![0; weights.len()], &mut out);
    out
}

fn rewrite_generator(
    generic: &Ring,
    weights: &[u32],
    n_std: usize,
    relations: &[(u32, RingElement)],
    target: usize,
) -> Result<RingElement> {
    let w = weights[target];
    let is_standard = |e: &Vec<u32>| e[n_std..].iter().all(|x| *x == 0);
    let mut columns = monomials_of_weight(weights, w);
    // non-standard monomials first so they become pivots
    columns.sort_by(|a, b| is_standard(a).cmp(&is_standard(b)).then_with(|| b[n_std..].cmp(&a[n_std..])).then_with(|| a.cmp(b)));
    let col_of: BTreeMap<Vec<u32>, usize> = columns.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();

    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for (rw, r) in relations {
        if *rw > w {
            continue;
        }
        for m in monomials_of_weight(weights, w - rw) {
            let mult = RingElement::from_exponents(generic, m, BigRational::one());
            let prod = &mult * r;
            let mut row = vec![BigRational::zero(); columns.len()];
            for (mono, c) in prod.terms() {
                row[col_of[mono.exponents()]] = c.clone();
            }
            rows.push(row);
        }
    }
    let pivots = row_reduce(&mut rows);

    let target_exps: Vec<u32> = (0..weights.len()).map(|i| u32::from(i == target)).collect();
    let target_col = col_of[&target_exps];
    for (ci, col) in columns.iter().enumerate() {
        if !is_standard(col) && !pivots.iter().any(|(_, pc)| *pc == ci) {
            return Err(Error::LazardRelations(format!("weight {w}: non-standard monomial {col:?} is free")));
        }
    }
    let (row_idx, _) = pivots
        .iter()
        .find(|(_, pc)| *pc == target_col)
        .ok_or_else(|| Error::LazardRelations(format!("weight {w}: generator is not a pivot")))?;
    let row = &rows[*row_idx];
    let mut value = generic.zero();
    for (ci, c) in row.iter().enumerate() {
        if ci == target_col || c.is_zero() {
            continue;
        }
        value = value + RingElement::from_exponents(generic, columns[ci].clone(), -c.clone());
    }
    Ok(value)
}

/// Reduced row echelon form in place; returns `(row, pivot column)` pairs.
fn row_reduce(rows: &mut [Vec<BigRational>]) -> Vec<(usize, usize)> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            let (pivot_row, other) = if i < r {
                let (a, b) = rows.split_at_mut(r);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = rows.split_at_mut(i);
                (&a[r], &mut b[0])
            };
            for (o, pv) in other.iter_mut().zip(pivot_row.iter()) {
                if !pv.is_zero() {
                    *o -= &f * pv;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}
