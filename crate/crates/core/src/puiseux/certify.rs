//! A-posteriori check of an expansion and point sampling for plots.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::series::SeriesField;
use super::{PuiseuxError, PuiseuxExpansion};
use crate::polycore::{Exact, ExactPoly, ExactSystem};

/// Relative size below which a numeric series coefficient counts as zero.
pub const NUMERIC_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    /// Lowest exponent of t with a nonzero coefficient in f_j(x(t));
    /// `None` when the substitution vanishes identically.
    pub orders: Vec<Option<i64>>,
    /// Order each polynomial must reach: truncation order + 1 + m_j −
    /// max_{i≥2} v_i, where m_j is the lowest v-weighted degree of f_j.
    pub required: Vec<i64>,
    pub exact: bool,
    pub passed: bool,
}

type Laurent<C> = BTreeMap<i64, C>;

fn mul<C: SeriesField>(a: &Laurent<C>, b: &Laurent<C>) -> Laurent<C> {
    let mut out: Laurent<C> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = out.entry(ea + eb).or_insert_with(C::zero);
            *e = e.clone() + ca.clone() * cb.clone();
        }
    }
    out
}

fn substitute<C: SeriesField>(p: &ExactPoly, x: &[Laurent<C>]) -> Laurent<C> {
    let mut powers: Vec<Vec<Laurent<C>>> = x.iter().map(|xi| vec![BTreeMap::from([(0, C::one())]), xi.clone()]).collect();
    let mut total: Laurent<C> = BTreeMap::new();
    for (e, c) in p.terms() {
        let mut acc: Laurent<C> = BTreeMap::from([(0, C::lift(c))]);
        for (i, &k) in e.0.iter().enumerate() {
            while powers[i].len() <= k as usize {
                let next = mul(powers[i].last().expect("power"), &powers[i][1]);
                powers[i].push(next);
            }
            if k > 0 {
                acc = mul(&acc, &powers[i][k as usize]);
            }
        }
        for (k, v) in acc {
            let t = total.entry(k).or_insert_with(C::zero);
            *t = t.clone() + v;
        }
    }
    total
}

fn lowest_orders<C: SeriesField>(e: &PuiseuxExpansion, s: &ExactSystem) -> Vec<Option<i64>> {
    let x: Vec<Laurent<C>> =
        e.coords.iter().map(|terms| terms.iter().map(|(k, c)| (*k, C::from_coefficient(c))).collect()).collect();
    s.polys()
        .iter()
        .map(|p| {
            let g = substitute(p, &x);
            let scale = g.values().map(|c| c.magnitude()).fold(1.0, f64::max);
            g.iter()
                .find(|(_, c)| if C::is_exact() { !c.is_zero() } else { c.magnitude() > NUMERIC_TOLERANCE * scale })
                .map(|(k, _)| *k)
        })
        .collect()
}

/// Substitute the truncated series into every polynomial and compare the
/// lowest surviving power of t with what the truncation order guarantees.
pub fn certify(e: &PuiseuxExpansion, s: &ExactSystem) -> Certification {
    let exact = e.is_exact();
    let orders = if exact { lowest_orders::<Exact>(e, s) } else { lowest_orders::<Complex64>(e, s) };
    let v = e.tropism.direction.entries();
    let vmax = v.iter().skip(1).copied().max().unwrap_or(0);
    let required: Vec<i64> = s
        .polys()
        .iter()
        .map(|p| e.order + 1 + p.terms().map(|(a, _)| a.dot(v)).min().unwrap_or(0) - vmax)
        .collect();
    let passed = orders.iter().zip(&required).all(|(o, r)| o.is_none_or(|o| o >= *r));
    Certification { orders, required, exact, passed }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub t: f64,
    pub point: Vec<Complex64>,
}

/// Evaluate the expansion on `count` equally spaced parameter values.
pub fn sample_curve(e: &PuiseuxExpansion, t_min: f64, t_max: f64, count: usize) -> Result<Vec<CurveSample>, PuiseuxError> {
    if count < 2 {
        return Err(PuiseuxError::TooFewSamples);
    }
    Ok((0..count)
        .map(|k| {
            let t = t_min + (t_max - t_min) * k as f64 / (count - 1) as f64;
            CurveSample { t, point: e.eval(t) }
        })
        .collect())
}
