//! Predictor–corrector machinery shared by the slice and total-degree
//! homotopies.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use super::lu::{condition_estimate, norm_inf, Lu};
use super::Config;
use crate::polycore::poly::power_table;
use crate::polycore::{ExactPoly, MpComplex, NumScalar, Polynomial};

/// Polynomials with their Jacobian, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub(crate) struct NumSystem<S> {
    nvars: usize,
    polys: Vec<Polynomial<S>>,
    jac: Vec<Vec<Polynomial<S>>>,
    degs: Vec<u32>,
}

impl<S: NumScalar> NumSystem<S> {
    pub fn from_exact(polys: &[ExactPoly], nvars: usize, prec: usize) -> Self {
        let polys: Vec<Polynomial<S>> = polys.iter().map(|p| p.map(|c| S::lift_exact(c, prec))).collect();
        let jac = polys.iter().map(|p| (0..nvars).map(|j| p.derivative(j)).collect()).collect();
        let degs = (0..nvars).map(|i| polys.iter().map(|p| p.degree_in(i)).max().unwrap_or(0)).collect();
        NumSystem { nvars, polys, jac, degs }
    }

    /// Values and the full Jacobian (rows: polynomials, columns: variables).
    pub fn eval(&self, x: &[S]) -> (Vec<S>, Vec<Vec<S>>) {
        debug_assert_eq!(x.len(), self.nvars);
        let pw = power_table(x, |i| self.degs[i]);
        let f = self.polys.iter().map(|p| p.eval_with(&pw)).collect();
        let j = self.jac.iter().map(|row| row.iter().map(|d| d.eval_with(&pw)).collect()).collect();
        (f, j)
    }
}

/// Lazily built multiprecision copies of an exact system, one per bit count.
#[derive(Debug, Default)]
pub(crate) struct MpCache {
    systems: Mutex<BTreeMap<usize, Arc<NumSystem<MpComplex>>>>,
}

impl MpCache {
    pub fn get(&self, polys: &[ExactPoly], nvars: usize, prec: usize) -> Arc<NumSystem<MpComplex>> {
        let mut m = self.systems.lock().expect("cache lock");
        m.entry(prec).or_insert_with(|| Arc::new(NumSystem::from_exact(polys, nvars, prec))).clone()
    }
}

/// H(y, p), ∂H/∂y and ∂H/∂p.
pub(crate) struct Eval<S> {
    pub h: Vec<S>,
    pub jy: Vec<Vec<S>>,
    pub hp: Vec<S>,
}

/// A square system in unknowns y depending on one real parameter p.
pub(crate) trait Homotopy: Sync {
    fn eval(&self, y: &[Complex64], p: f64) -> Eval<Complex64>;
    /// H and ∂H/∂y at `prec` bits.
    fn eval_mp(&self, y: &[MpComplex], p: f64, prec: usize) -> (Vec<MpComplex>, Vec<Vec<MpComplex>>);
}

#[derive(Clone, Debug)]
pub(crate) struct NewtonOutcome {
    pub y: Vec<Complex64>,
    pub converged: bool,
    pub iterations: usize,
    /// Size of the last update relative to ‖y‖.
    pub last_step: f64,
}

/// Newton iteration at fixed p in the scalar type S. Stops when the update
/// falls below `tol`·scale, where scale = ‖y‖ when `relative` (no floor at
/// 1) and max(1, ‖y‖) otherwise.
fn newton_generic<S: NumScalar, F: Fn(&[S]) -> (Vec<S>, Vec<Vec<S>>)>(
    f: F,
    y0: &[Complex64],
    prec: usize,
    tol: f64,
    maxit: usize,
    relative: bool,
) -> NewtonOutcome {
    let mut y: Vec<S> = y0.iter().map(|z| S::lift(*z, prec)).collect();
    let mut last = f64::INFINITY;
    let mut prev_step = f64::INFINITY;
    for it in 1..=maxit {
        let (h, j) = f(&y);
        let Some(lu) = Lu::factor(j) else {
            return NewtonOutcome { y: y.iter().map(|z| z.lower()).collect(), converged: false, iterations: it, last_step: last };
        };
        let rhs: Vec<S> = h.into_iter().map(|v| -v).collect();
        let dy = lu.solve(&rhs);
        for (a, d) in y.iter_mut().zip(&dy) {
            *a = a.clone() + d.clone();
        }
        let ylow: Vec<Complex64> = y.iter().map(|z| z.lower()).collect();
        let ny = norm_inf(&ylow);
        let nd = dy.iter().map(|d| d.magnitude()).fold(0.0, f64::max);
        let scale = if relative { ny } else { ny.max(1.0) };
        last = if scale > 0.0 { nd / scale } else { nd };
        if !last.is_finite() {
            return NewtonOutcome { y: ylow, converged: false, iterations: it, last_step: last };
        }
        if last <= tol {
            return NewtonOutcome { y: ylow, converged: true, iterations: it, last_step: last };
        }
        // stagnation at the precision floor
        if relative && it > 2 && last > 0.5 * prev_step {
            return NewtonOutcome { y: ylow, converged: last <= tol.sqrt(), iterations: it, last_step: last };
        }
        prev_step = last;
    }
    NewtonOutcome { y: y.iter().map(|z| z.lower()).collect(), converged: false, iterations: maxit, last_step: last }
}

/// Newton on H(·, p) at the requested precision (53 means double).
pub(crate) fn newton<H: Homotopy + ?Sized>(
    h: &H,
    y0: &[Complex64],
    p: f64,
    bits: usize,
    tol: f64,
    maxit: usize,
    relative: bool,
) -> NewtonOutcome {
    if bits <= 53 {
        newton_generic::<Complex64, _>(
            |y| {
                let e = h.eval(y, p);
                (e.h, e.jy)
            },
            y0,
            53,
            tol,
            maxit,
            relative,
        )
    } else {
        newton_generic::<MpComplex, _>(|y| h.eval_mp(y, p, bits), y0, bits, tol, maxit, relative)
    }
}

/// Working precision demanded by a condition estimate.
pub(crate) fn bits_for(cond: f64, cfg: &Config) -> usize {
    if cond > cfg.precision_thresholds[1] {
        256
    } else if cond > cfg.precision_thresholds[0] {
        128
    } else {
        53
    }
}

pub(crate) struct TrackOptions {
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
    pub corrector_tol: f64,
    /// Measure corrections against ‖y‖ instead of max(1, ‖y‖); used when
    /// the path shrinks toward the origin.
    pub relative: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct TrackOutcome {
    pub y: Vec<Complex64>,
    pub p: f64,
    pub reached: bool,
}

fn tangent<H: Homotopy + ?Sized>(h: &H, y: &[Complex64], p: f64) -> Option<Vec<Complex64>> {
    let e = h.eval(y, p);
    let lu = Lu::factor(e.jy)?;
    let rhs: Vec<Complex64> = e.hp.iter().map(|v| -v).collect();
    let d = lu.solve(&rhs);
    d.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(d)
}

fn axpy(y: &[Complex64], a: f64, d: &[Complex64]) -> Vec<Complex64> {
    y.iter().zip(d).map(|(u, v)| u + v * a).collect()
}

/// Classical fourth-order Runge–Kutta step along dy/dp = −H_y⁻¹ H_p.
fn rk4<H: Homotopy + ?Sized>(h: &H, y: &[Complex64], p: f64, dp: f64) -> Option<Vec<Complex64>> {
    let k1 = tangent(h, y, p)?;
    let k2 = tangent(h, &axpy(y, dp / 2.0, &k1), p + dp / 2.0)?;
    let k3 = tangent(h, &axpy(y, dp / 2.0, &k2), p + dp / 2.0)?;
    let k4 = tangent(h, &axpy(y, dp, &k3), p + dp)?;
    Some(
        (0..y.len())
            .map(|i| y[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dp / 6.0))
            .collect(),
    )
}

/// Follow the solution path from (y0, p0) to p1. Corrections escalate to
/// multiprecision when the Jacobian's condition estimate crosses the
/// configured thresholds.
pub(crate) fn track<H: Homotopy + ?Sized>(
    h: &H,
    y0: &[Complex64],
    p0: f64,
    p1: f64,
    opts: &TrackOptions,
    cfg: &Config,
) -> TrackOutcome {
    let dir = if p1 >= p0 { 1.0 } else { -1.0 };
    let mut y = y0.to_vec();
    let mut p = p0;
    let mut step = opts.h_init.min(opts.h_max);
    let mut cond = condition_estimate(&h.eval(&y, p).jy);
    let mut bits = bits_for(cond, cfg);
    let mut steps = 0;
    while (p1 - p) * dir > 0.0 {
        if steps >= opts.max_steps || step < opts.h_min {
            return TrackOutcome { y, p, reached: false };
        }
        steps += 1;
        let remaining = (p1 - p).abs();
        let dp = step.min(remaining) * dir;
        let last = step >= remaining;
        let target = if last { p1 } else { p + dp };
        let Some(pred) = rk4(h, &y, p, target - p) else {
            step /= 2.0;
            continue;
        };
        let corr = newton(h, &pred, target, bits, opts.corrector_tol, 3, opts.relative);
        let moved = norm_inf(&pred.iter().zip(&corr.y).map(|(a, b)| a - b).collect::<Vec<_>>());
        let scale = if opts.relative { norm_inf(&corr.y) } else { norm_inf(&corr.y).max(1.0) };
        if !corr.converged || moved > 0.1 * scale {
            step /= 2.0;
            continue;
        }
        y = corr.y;
        p = target;
        cond = condition_estimate(&h.eval(&y, p).jy);
        bits = bits_for(cond, cfg);
        if corr.iterations <= 1 {
            step = (step * 2.0).min(opts.h_max);
        } else if corr.iterations == 2 {
            step = (step * 1.25).min(opts.h_max);
        }
    }
    TrackOutcome { y, p: p1, reached: true }
}
