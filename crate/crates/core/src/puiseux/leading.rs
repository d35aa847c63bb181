//! Leading coefficients of the branches along a direction.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_traits::Zero;

use super::series::eliminate;
use super::{Coefficient, Pin, PuiseuxError};
use crate::geometry::{transform_system, PrimitiveVector, UnimodularMatrix};
use crate::homotopy::{solve_square, streams, Config};
use crate::polycore::coeff::exact_from_c64;
use crate::polycore::{Exact, ExactPoly, ExactSystem, ExponentVector, Field, Polynomial, PolynomialSystem};
use crate::tropical::initial_system;

/// Denominator bound when recognizing a numerical root as a rational.
const MAX_DENOMINATOR: i64 = 1 << 20;

/// One root of the initial system. Coordinates that do not occur in the
/// initial forms are `None`; the extension determines them.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingTerms {
    pub direction: PrimitiveVector,
    pub normalization: Pin,
    pub coefficients: Vec<Option<Coefficient>>,
}

/// Divide out the largest monomial factor.
fn strip_monomial(p: &ExactPoly) -> ExactPoly {
    let n = p.nvars();
    let mut low = vec![u32::MAX; n];
    for (e, _) in p.terms() {
        for i in 0..n {
            low[i] = low[i].min(e.0[i]);
        }
    }
    Polynomial::from_terms(
        n,
        p.terms().map(|(e, c)| (ExponentVector(e.0.iter().zip(&low).map(|(a, b)| a - b).collect()), c.clone())),
    )
}

/// Row-reduce the equations with every non-constant monomial treated as an
/// independent unknown. A constant row proves there is no solution at all.
fn linear_reduce(polys: &[ExactPoly], n: usize) -> Result<Vec<ExactPoly>, PuiseuxError> {
    let zero = ExponentVector::zero(n);
    let mut cols: Vec<ExponentVector> =
        polys.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone())).filter(|e| *e != zero).collect();
    cols.sort_by(|a, b| b.cmp(a));
    cols.dedup();
    let w = cols.len();
    let mut rows: Vec<Vec<Exact>> = polys
        .iter()
        .map(|p| {
            let mut r = vec![Exact::zero(); w + 1];
            for (e, c) in p.terms() {
                let j = if *e == zero { w } else { cols.iter().position(|x| x == e).expect("column") };
                r[j] = c.clone();
            }
            r
        })
        .collect();
    let rank = eliminate(&mut rows, w).len();
    if rows[rank..].iter().any(|r| !r[w].is_zero()) {
        return Err(PuiseuxError::NoTorusSolution);
    }
    Ok(rows
        .into_iter()
        .take(rank)
        .map(|r| {
            let mut p = Polynomial::from_terms(n, cols.iter().cloned().zip(r.iter().cloned()));
            p.add_term(zero.clone(), r[w].clone());
            p
        })
        .collect())
}

fn restrict(p: &ExactPoly, vars: &[usize]) -> ExactPoly {
    Polynomial::from_terms(
        vars.len(),
        p.terms().map(|(e, c)| (ExponentVector(vars.iter().map(|&i| e.0[i]).collect()), c.clone())),
    )
}

fn torus_point(z: &[Complex64]) -> bool {
    let scale = z.iter().map(|x| x.norm()).fold(1.0, f64::max);
    z.iter().all(|x| x.norm() > 1e-8 * scale)
}

/// All roots with nonzero coordinates of the initial system along `v`,
/// with one leading coefficient pinned. Roots that are Gaussian rationals
/// (checked by exact substitution) come back exact.
pub fn leading_terms(
    s: &ExactSystem,
    v: &PrimitiveVector,
    pin: &Pin,
    cfg: &Config,
) -> Result<Vec<LeadingTerms>, PuiseuxError> {
    let n = s.nvars();
    if v.len() != n {
        return Err(PuiseuxError::DimensionMismatch { expected: n, found: v.len() });
    }
    if v.first() <= 0 {
        return Err(PuiseuxError::NonPositiveFirst(v.clone()));
    }
    if pin.var >= n {
        return Err(PuiseuxError::BadPin(pin.var + 1));
    }
    if pin.value.is_zero() {
        return Err(PuiseuxError::ZeroPin);
    }
    let init = initial_system(s, v.entries())?;
    let mut eqs = Vec::new();
    for p in init.polys() {
        let q = strip_monomial(&p.substitute(pin.var, &pin.value));
        if q.is_zero() {
            continue;
        }
        if q.degree() == 0 {
            return Err(PuiseuxError::NoTorusSolution);
        }
        eqs.push(q);
    }
    let eqs = linear_reduce(&eqs, n)?;
    let present: Vec<usize> = {
        let mut occ = BTreeSet::new();
        for p in &eqs {
            for (i, o) in p.occurring_vars().into_iter().enumerate() {
                if o {
                    occ.insert(i);
                }
            }
        }
        occ.into_iter().collect()
    };
    let k = present.len();
    if eqs.len() < k {
        return Err(PuiseuxError::NotSquare { equations: eqs.len(), unknowns: k });
    }
    let compact: Vec<ExactPoly> = eqs.iter().map(|p| restrict(p, &present)).collect();
    let roots: Vec<Vec<Complex64>> = if k == 0 {
        vec![vec![]]
    } else {
        solve_square(&compact[..k], cfg, streams::LEADING_START)?.into_iter().map(|r| r.point).collect()
    };
    let mut out: Vec<(Vec<Complex64>, LeadingTerms)> = Vec::new();
    for z in roots {
        if !torus_point(&z) {
            continue;
        }
        let exact: Option<Vec<Exact>> = z.iter().map(|x| exact_from_c64(*x, MAX_DENOMINATOR, 1e-9)).collect();
        let exact = exact.filter(|e| compact.iter().all(|p| p.eval(e).map(|r| r.is_zero()).unwrap_or(false)));
        if exact.is_none() {
            let scale = z.iter().map(|x| x.norm()).fold(1.0, f64::max);
            let ok = compact[k..].iter().all(|p| {
                let num = p.map(|c| crate::polycore::to_c64(c));
                num.eval(&z).map(|r| r.magnitude() <= 1e-8 * scale.powi(p.degree() as i32)).unwrap_or(false)
            });
            if !ok {
                continue;
            }
        }
        let mut coefficients: Vec<Option<Coefficient>> = vec![None; n];
        coefficients[pin.var] = Some(Coefficient::Exact(pin.value.clone()));
        for (j, &i) in present.iter().enumerate() {
            coefficients[i] = Some(match &exact {
                Some(e) => Coefficient::Exact(e[j].clone()),
                None => Coefficient::Float(z[j]),
            });
        }
        if out.iter().any(|(w, _)| w.iter().zip(&z).all(|(a, b)| (a - b).norm() <= 1e-8 * a.norm().max(1.0))) {
            continue;
        }
        out.push((z, LeadingTerms { direction: v.clone(), normalization: pin.clone(), coefficients }));
    }
    if out.is_empty() {
        return Err(PuiseuxError::NoTorusSolution);
    }
    out.sort_by(|a, b| {
        let key = |z: &[Complex64]| z.iter().flat_map(|x| [x.re, x.im]).collect::<Vec<f64>>();
        key(&a.0).iter().zip(key(&b.0).iter()).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out.into_iter().map(|(_, l)| l).collect())
}

/// The initial system along v after x = y^U and removal of each
/// polynomial's monomial factor, as polynomials in y_2, …, y_n (y_1 drops
/// out by weighted homogeneity).
pub fn transformed_initial_system(
    s: &ExactSystem,
    v: &PrimitiveVector,
    u: &UnimodularMatrix,
) -> Result<ExactSystem, PuiseuxError> {
    let n = s.nvars();
    if u.rows().first().map(|r| r.as_slice()) != Some(v.entries()) {
        return Err(PuiseuxError::DimensionMismatch { expected: n, found: u.n() });
    }
    let init = initial_system(s, v.entries())?;
    let t = transform_system(&init, u).map_err(|e| PuiseuxError::Tropical(e.into()))?;
    let polys = t.system.polys().iter().map(|p| p.drop_var(0)).collect();
    PolynomialSystem::new(polys, n - 1).map_err(|_| PuiseuxError::DimensionMismatch { expected: n - 1, found: n - 1 })
}
