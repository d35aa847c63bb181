//! Term-by-term extension of a leading root.
//!
//! Every unknown coefficient a_{i,k} of y_i(t) = Σ a_{i,k} t^k enters as a
//! symbol. At relative order k the coefficients of t^{m_j + k} in
//! f_j(t^v y) are appended to a pool of constraints, which is linearized
//! (nonlinear monomials eliminated first) and reduced; symbols whose rows
//! become univariate are fixed and substituted everywhere. For a regular
//! leading root this settles order k at step k. When the initial Jacobian
//! is singular the remaining components are fixed a few orders later, or
//! the extension gives up after `LOOKAHEAD` extra orders.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::sym::Sym;
use super::{Coefficient, LeadingTerms, PuiseuxError, PuiseuxExpansion, Tropism};
use crate::geometry::PrimitiveVector;
use crate::polycore::{to_c64, Exact, ExactSystem, Field};

/// Extra relative orders tried beyond the requested truncation.
const LOOKAHEAD: usize = 8;

pub(crate) trait SeriesField: Field {
    fn lift(e: &Exact) -> Self;
    fn from_coefficient(c: &Coefficient) -> Self;
    fn into_coefficient(self) -> Coefficient;
    /// Zero test for output coefficients.
    fn vanishes(&self, scale: f64) -> bool;
}

impl SeriesField for Exact {
    fn lift(e: &Exact) -> Self {
        e.clone()
    }
    fn from_coefficient(c: &Coefficient) -> Self {
        match c {
            Coefficient::Exact(e) => e.clone(),
            Coefficient::Float(_) => unreachable!("exact expansion with a float leading coefficient"),
        }
    }
    fn into_coefficient(self) -> Coefficient {
        Coefficient::Exact(self)
    }
    fn vanishes(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

impl SeriesField for Complex64 {
    fn lift(e: &Exact) -> Self {
        to_c64(e)
    }
    fn from_coefficient(c: &Coefficient) -> Self {
        c.to_c64()
    }
    fn into_coefficient(self) -> Coefficient {
        Coefficient::Float(self)
    }
    fn vanishes(&self, scale: f64) -> bool {
        self.norm() <= 1e-12 * scale.max(1.0)
    }
}

struct Term<C> {
    exps: Vec<u32>,
    shift: usize,
    coeff: C,
}

/// Extend `leading` to all exponents ≤ `order`. Exact when every known
/// leading coefficient is exact, double precision otherwise.
pub fn extend_series(
    s: &ExactSystem,
    v: &PrimitiveVector,
    leading: &LeadingTerms,
    order: i64,
) -> Result<PuiseuxExpansion, PuiseuxError> {
    let n = s.nvars();
    if v.len() != n || leading.coefficients.len() != n {
        return Err(PuiseuxError::DimensionMismatch { expected: n, found: v.len().min(leading.coefficients.len()) });
    }
    let tropism = Tropism::new(v.clone(), v.first().max(1) as u32)?;
    let exact = leading.coefficients.iter().flatten().all(|c| c.is_exact());
    let coords = if exact {
        expand::<Exact>(s, v.entries(), &leading.coefficients, order)?
    } else {
        expand::<Complex64>(s, v.entries(), &leading.coefficients, order)?
    };
    Ok(PuiseuxExpansion { tropism, normalization: leading.normalization.clone(), coords, order })
}

fn expand<C: SeriesField>(
    s: &ExactSystem,
    v: &[i64],
    leading: &[Option<Coefficient>],
    order: i64,
) -> Result<Vec<Vec<(i64, Coefficient)>>, PuiseuxError> {
    let n = s.nvars();
    let polys: Vec<Vec<Term<C>>> = s
        .polys()
        .iter()
        .map(|p| {
            let m = p.terms().map(|(e, _)| e.dot(v)).min().unwrap_or(0);
            p.terms()
                .map(|(e, c)| Term { exps: e.0.clone(), shift: (e.dot(v) - m) as usize, coeff: C::lift(c) })
                .collect()
        })
        .collect();
    let degs: Vec<u32> = (0..n).map(|i| s.polys().iter().map(|p| p.degree_in(i)).max().unwrap_or(0)).collect();
    // highest relative order reported per coordinate; x1 is a single term
    let top: Vec<usize> = (0..n).map(|i| if i == 0 { 0 } else { (order - v[i]).max(0) as usize }).collect();
    let target = top.iter().copied().max().unwrap_or(0);

    let mut next_id = 0u32;
    let mut y: Vec<Vec<Sym<C>>> = Vec::with_capacity(n);
    for c in leading {
        let a0 = match c {
            Some(c) => Sym::constant(C::from_coefficient(c)),
            None => {
                next_id += 1;
                Sym::unknown(next_id - 1)
            }
        };
        y.push(vec![a0]);
    }
    let mut pool: Vec<Sym<C>> = Vec::new();
    let mut done = false;
    for k in 0..=target + LOOKAHEAD {
        if k > 0 {
            for yi in y.iter_mut().skip(1) {
                yi.push(Sym::unknown(next_id));
                next_id += 1;
            }
        }
        let powers = power_series(&y, &degs, k);
        for p in &polys {
            pool.push(coefficient_at(p, &powers, k));
        }
        resolve(&mut pool, &mut y).map_err(|_| PuiseuxError::Inconsistent(k))?;
        let settled =
            (0..n).all(|i| y[i].len() > top[i] && y[i][..=top[i]].iter().all(|a| a.as_constant().is_some()));
        if settled {
            done = true;
            break;
        }
    }
    if !done {
        return Err(PuiseuxError::SingularLeadingRoot);
    }
    let mut coords = Vec::with_capacity(n);
    for i in 0..n {
        let a: Vec<C> = y[i].iter().take(top[i] + 1).map(|x| x.as_constant().expect("settled")).collect();
        let scale = a.iter().map(|c| c.magnitude()).fold(0.0, f64::max);
        if a[0].is_zero() || a[0].vanishes(scale) {
            return Err(PuiseuxError::ZeroLeading);
        }
        coords.push(
            a.into_iter()
                .enumerate()
                .filter(|(k, c)| *k == 0 || !c.vanishes(scale))
                .map(|(k, c)| (v[i] + k as i64, c.into_coefficient()))
                .collect(),
        );
    }
    Ok(coords)
}

/// powers[i][e] = y_i^e truncated after t^k.
fn power_series<C: Field>(y: &[Vec<Sym<C>>], degs: &[u32], k: usize) -> Vec<Vec<Vec<Sym<C>>>> {
    y.iter()
        .zip(degs)
        .map(|(yi, &d)| {
            let base: Vec<Sym<C>> = (0..=k).map(|j| yi.get(j).cloned().unwrap_or_else(Sym::zero)).collect();
            let mut out = vec![one_series(k)];
            for e in 1..=d as usize {
                out.push(mul_trunc(&out[e - 1], &base, k));
            }
            out
        })
        .collect()
}

fn one_series<C: Field>(k: usize) -> Vec<Sym<C>> {
    let mut v = vec![Sym::zero(); k + 1];
    v[0] = Sym::one();
    v
}

fn mul_trunc<C: Field>(a: &[Sym<C>], b: &[Sym<C>], k: usize) -> Vec<Sym<C>> {
    (0..=k)
        .map(|d| {
            let mut acc = Sym::zero();
            for i in 0..=d {
                if a[i].is_zero() || b[d - i].is_zero() {
                    continue;
                }
                acc = acc + a[i].clone() * b[d - i].clone();
            }
            acc
        })
        .collect()
}

fn coefficient_at<C: Field>(p: &[Term<C>], powers: &[Vec<Vec<Sym<C>>>], k: usize) -> Sym<C> {
    let mut total = Sym::zero();
    for term in p {
        if term.shift > k {
            continue;
        }
        let d = k - term.shift;
        let mut acc: Vec<Sym<C>> = one_series(d);
        for (i, &e) in term.exps.iter().enumerate() {
            if e > 0 {
                acc = mul_trunc(&acc, &powers[i][e as usize][..=d], d);
            }
        }
        total = total + acc[d].clone() * Sym::constant(term.coeff.clone());
    }
    total
}

struct Inconsistent;

/// Reduce the constraint pool, fixing every unknown that becomes determined.
fn resolve<C: Field>(
    pool: &mut Vec<Sym<C>>,
    y: &mut [Vec<Sym<C>>],
) -> Result<(), Inconsistent> {
    loop {
        for c in pool.iter_mut() {
            c.clean();
        }
        pool.retain(|c| !c.is_zero());
        if pool.iter().any(|c| c.as_constant().is_some()) {
            return Err(Inconsistent);
        }
        let mut cols: Vec<Vec<u32>> =
            pool.iter().flat_map(|c| c.terms().map(|(k, _)| k.clone())).filter(|k| !k.is_empty()).collect();
        cols.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        cols.dedup();
        let index: HashMap<&Vec<u32>, usize> = cols.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let w = cols.len();
        let mut rows: Vec<Vec<C>> = pool
            .iter()
            .map(|c| {
                let mut r = vec![C::zero(); w + 1];
                for (k, x) in c.terms() {
                    let j = if k.is_empty() { w } else { index[k] };
                    r[j] = x.clone();
                }
                r
            })
            .collect();
        let pivots = eliminate(&mut rows, w);
        let mut fixed = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            if cols[pc].len() != 1 {
                continue;
            }
            let scale = rows[r].iter().map(|x| x.magnitude()).fold(0.0, f64::max);
            let alone = (0..w).all(|j| j == pc || rows[r][j].is_zero() || rows[r][j].is_negligible(scale));
            if alone {
                let val = -(rows[r][w].clone() / rows[r][pc].clone());
                fixed.push((cols[pc][0], val));
            }
        }
        *pool = rows
            .into_iter()
            .map(|r| {
                let mut s = Sym::constant(r[w].clone());
                for (j, x) in r.into_iter().take(w).enumerate() {
                    if !x.is_zero() {
                        let mut m = Sym::constant(x);
                        for &id in &cols[j] {
                            m = m * Sym::unknown(id);
                        }
                        s = s + m;
                    }
                }
                s
            })
            .collect();
        if fixed.is_empty() {
            return Ok(());
        }
        for (id, val) in fixed {
            for yi in y.iter_mut() {
                for a in yi.iter_mut() {
                    *a = a.substitute(id, &val);
                }
            }
            for c in pool.iter_mut() {
                *c = c.substitute(id, &val);
            }
        }
    }
}

/// Reduced row echelon form over the first `w` columns (the last column is
/// the constant). Returns pivot columns in row order; rows past the rank
/// are cleared.
pub(super) fn eliminate<C: Field>(rows: &mut Vec<Vec<C>>, w: usize) -> Vec<usize> {
    let scale = rows.iter().flatten().map(|x| x.magnitude()).fold(0.0, f64::max);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..w {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .max_by(|&a, &b| rows[a][col].magnitude().total_cmp(&rows[b][col].magnitude()));
        let Some(p) = best else { continue };
        if rows[p][col].is_negligible(scale) {
            continue;
        }
        rows.swap(r, p);
        let inv = C::one() / rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..=w {
                    let d = f.clone() * rows[r][j].clone();
                    rows[i][j] = rows[i][j].clone() - d;
                }
                rows[i][col] = C::zero();
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}
