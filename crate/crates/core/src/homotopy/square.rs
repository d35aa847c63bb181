//! Total-degree homotopy for square systems, tracked in a random affine
//! patch of projective space so that paths diverging to infinity stay
//! bounded.

use num_complex::Complex64;
use rayon::prelude::*;

use super::lu::{condition_estimate, norm_inf};
use super::track::{bits_for, newton, track, Eval, Homotopy, MpCache, NumSystem, TrackOptions};
use super::{seeded, streams, unit_complex, random_complex, Config, HomotopyError};
use crate::polycore::coeff::{exact, exact_of_c64};
use crate::polycore::{ExactPoly, ExponentVector, MpComplex, NumScalar, Polynomial};

/// Largest number of start paths accepted.
pub const MAX_PATHS: u128 = 1 << 20;

/// A finite endpoint of the total-degree homotopy.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareSolution {
    /// Start-path index in the mixed-radix enumeration of start roots.
    pub path: usize,
    pub point: Vec<Complex64>,
    pub condition: f64,
}

fn homogenize(p: &ExactPoly, d: u32) -> ExactPoly {
    let n = p.nvars();
    Polynomial::from_terms(
        n + 1,
        p.terms().map(|(e, c)| {
            let mut v = Vec::with_capacity(n + 1);
            v.push(d - e.degree() as u32);
            v.extend_from_slice(&e.0);
            (ExponentVector(v), c.clone())
        }),
    )
}

struct Projective {
    m: usize,
    target: Vec<ExactPoly>,
    start: Vec<ExactPoly>,
    patch: Vec<Complex64>,
    kappa: Complex64,
    target_c: NumSystem<Complex64>,
    start_c: NumSystem<Complex64>,
    target_mp: MpCache,
    start_mp: MpCache,
}

impl Projective {
    fn with_kappa(&self, kappa: Complex64) -> Projective {
        Projective {
            m: self.m,
            target: self.target.clone(),
            start: self.start.clone(),
            patch: self.patch.clone(),
            kappa,
            target_c: self.target_c.clone(),
            start_c: self.start_c.clone(),
            target_mp: MpCache::default(),
            start_mp: MpCache::default(),
        }
    }
}

impl Homotopy for Projective {

    fn eval(&self, z: &[Complex64], tau: f64) -> Eval<Complex64> {
        let (f, jf) = self.target_c.eval(z);
        let (g, jg) = self.start_c.eval(z);
        let a = self.kappa * (1.0 - tau);
        let mut h: Vec<Complex64> = f.iter().zip(&g).map(|(fi, gi)| fi * tau + gi * a).collect();
        let mut jy: Vec<Vec<Complex64>> =
            jf.iter().zip(&jg).map(|(rf, rg)| rf.iter().zip(rg).map(|(x, y)| x * tau + y * a).collect()).collect();
        let mut hp: Vec<Complex64> = f.iter().zip(&g).map(|(fi, gi)| fi - gi * self.kappa).collect();
        h.push(self.patch.iter().zip(z).map(|(a, b)| a * b).sum::<Complex64>() - 1.0);
        jy.push(self.patch.clone());
        hp.push(Complex64::new(0.0, 0.0));
        Eval { h, jy, hp }
    }

    fn eval_mp(&self, z: &[MpComplex], tau: f64, prec: usize) -> (Vec<MpComplex>, Vec<Vec<MpComplex>>) {
        let ts = self.target_mp.get(&self.target, self.m + 1, prec);
        let ss = self.start_mp.get(&self.start, self.m + 1, prec);
        let (f, jf) = ts.eval(z);
        let (g, jg) = ss.eval(z);
        let t = MpComplex::lift(Complex64::new(tau, 0.0), prec);
        let a = MpComplex::lift(self.kappa, prec) * MpComplex::lift(Complex64::new(1.0 - tau, 0.0), prec);
        let mut h: Vec<MpComplex> =
            f.into_iter().zip(g).map(|(fi, gi)| fi * t.clone() + gi * a.clone()).collect();
        let mut jy: Vec<Vec<MpComplex>> = jf
            .into_iter()
            .zip(jg)
            .map(|(rf, rg)| rf.into_iter().zip(rg).map(|(x, y)| x * t.clone() + y * a.clone()).collect())
            .collect();
        let pl: Vec<MpComplex> = self.patch.iter().map(|c| MpComplex::lift(*c, prec)).collect();
        let mut lin = MpComplex::lift(Complex64::new(-1.0, 0.0), prec);
        for (c, x) in pl.iter().zip(z) {
            lin = lin + c.clone() * x.clone();
        }
        h.push(lin);
        jy.push(pl);
        (h, jy)
    }
}

/// The affine target system as a parameter-free homotopy, for refinement.
pub(crate) struct Fixed<'a> {
    pub polys: &'a [ExactPoly],
    pub num: NumSystem<Complex64>,
    pub mp: MpCache,
}

impl<'a> Fixed<'a> {
    pub fn new(polys: &'a [ExactPoly], nvars: usize) -> Self {
        Fixed { polys, num: NumSystem::from_exact(polys, nvars, 53), mp: MpCache::default() }
    }
}

impl Homotopy for Fixed<'_> {

    fn eval(&self, y: &[Complex64], _p: f64) -> Eval<Complex64> {
        let (h, jy) = self.num.eval(y);
        let hp = vec![Complex64::new(0.0, 0.0); h.len()];
        Eval { h, jy, hp }
    }

    fn eval_mp(&self, y: &[MpComplex], _p: f64, prec: usize) -> (Vec<MpComplex>, Vec<Vec<MpComplex>>) {
        self.mp.get(self.polys, y.len(), prec).eval(y)
    }
}

enum Endpoint {
    Finite(Vec<Complex64>, f64),
    Infinite,
    Failed,
}

fn start_point(h: &Projective, degrees: &[u32], rho: &[Complex64], mut idx: usize) -> Vec<Complex64> {
    let mut z = vec![Complex64::new(1.0, 0.0)];
    for (d, r) in degrees.iter().zip(rho) {
        let k = idx % *d as usize;
        idx /= *d as usize;
        let root = Complex64::from_polar(1.0, (r.arg() + std::f64::consts::TAU * k as f64) / *d as f64);
        z.push(root);
    }
    let scale: Complex64 = h.patch.iter().zip(&z).map(|(a, b)| a * b).sum();
    z.iter().map(|x| x / scale).collect()
}

fn run_path(h: &Projective, z0: &[Complex64], fixed: &Fixed, cfg: &Config) -> Endpoint {
    let opts =
        TrackOptions { h_init: 0.02, h_max: 0.1, h_min: 1e-13, max_steps: cfg.max_steps, corrector_tol: 1e-10, relative: false };
    let out = track(h, z0, 0.0, 1.0, &opts, cfg);
    let zn = norm_inf(&out.y);
    let rel0 = out.y[0].norm() / zn.max(f64::MIN_POSITIVE);
    if !out.reached {
        return if out.p > 0.9 && rel0 < 1e-2 { Endpoint::Infinite } else { Endpoint::Failed };
    }
    if rel0 < 1e-7 {
        return Endpoint::Infinite;
    }
    let y: Vec<Complex64> = out.y[1..].iter().map(|x| x / out.y[0]).collect();
    let cond = condition_estimate(&fixed.eval(&y, 0.0).jy);
    let refined = newton(fixed, &y, 0.0, bits_for(cond, cfg), 1e-14, 8, true);
    if !refined.y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Endpoint::Failed;
    }
    let cond = condition_estimate(&fixed.eval(&refined.y, 0.0).jy);
    Endpoint::Finite(refined.y, cond)
}

/// All finite isolated solutions of a square system with exact
/// coefficients. Start roots and constants come from `stream` under the
/// master seed; failed paths are retried with a fresh accessory constant.
/// Results are deduplicated and ordered by start-path index.
pub fn solve_square(polys: &[ExactPoly], cfg: &Config, stream: u64) -> Result<Vec<SquareSolution>, HomotopyError> {
    let m = polys.len();
    if polys.iter().any(|p| p.nvars() != m) {
        let nvars = polys.first().map(|p| p.nvars()).unwrap_or(0);
        return Err(HomotopyError::WrongShape { polys: m, nvars, needed: nvars });
    }
    if m == 0 {
        return Ok(vec![SquareSolution { path: 0, point: vec![], condition: 1.0 }]);
    }
    let degrees: Vec<u32> = polys.iter().map(|p| p.degree() as u32).collect();
    if polys.iter().any(|p| p.is_zero()) {
        return Err(HomotopyError::Poly(crate::polycore::PolyError::ZeroPolynomial));
    }
    if degrees.contains(&0) {
        return Ok(vec![]);
    }
    let total: u128 = degrees.iter().map(|&d| d as u128).product();
    if total > MAX_PATHS {
        return Err(HomotopyError::TooManyPaths(total));
    }
    let mut rng = seeded(cfg.master_seed, stream);
    let rho: Vec<Complex64> = (0..m).map(|_| unit_complex(&mut rng)).collect();
    let kappa = unit_complex(&mut rng);
    let patch: Vec<Complex64> = (0..=m).map(|_| random_complex(&mut rng)).collect();
    let target: Vec<ExactPoly> = polys.iter().zip(&degrees).map(|(p, &d)| homogenize(p, d)).collect();
    let start: Vec<ExactPoly> = (0..m)
        .map(|i| {
            let mut e = vec![0u32; m + 1];
            e[i + 1] = degrees[i];
            let mut z0 = vec![0u32; m + 1];
            z0[0] = degrees[i];
            Polynomial::from_terms(
                m + 1,
                [
                    (ExponentVector(e), exact(1, 1)),
                    (ExponentVector(z0), -exact_of_c64(rho[i])),
                ],
            )
        })
        .collect();
    let h = Projective {
        m,
        target_c: NumSystem::from_exact(&target, m + 1, 53),
        start_c: NumSystem::from_exact(&start, m + 1, 53),
        target,
        start,
        patch,
        kappa,
        target_mp: MpCache::default(),
        start_mp: MpCache::default(),
    };
    let fixed = Fixed::new(polys, m);
    let ends: Vec<Endpoint> = (0..total as usize)
        .into_par_iter()
        .map(|idx| {
            let z0 = start_point(&h, &degrees, &rho, idx);
            let mut end = run_path(&h, &z0, &fixed, cfg);
            for attempt in 1..=2u32 {
                if !matches!(end, Endpoint::Failed) {
                    break;
                }
                let mut r = seeded(cfg.master_seed, streams::path(stream, idx, attempt));
                let retry = h.with_kappa(unit_complex(&mut r));
                end = run_path(&retry, &z0, &fixed, cfg);
            }
            end
        })
        .collect();
    let mut out: Vec<SquareSolution> = Vec::new();
    for (idx, end) in ends.into_iter().enumerate() {
        if let Endpoint::Finite(y, cond) = end {
            let scale = norm_inf(&y).max(1.0);
            let dup = out.iter().any(|s| {
                let d = s.point.iter().zip(&y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                d <= 1e-6 * scale
            });
            if !dup {
                out.push(SquareSolution { path: idx, point: y, condition: cond });
            }
        }
    }
    Ok(out)
}

/// Residual ‖f(x)‖∞ relative to the size of the terms, evaluated in double.
pub(crate) fn relative_residual(polys: &[ExactPoly], x: &[Complex64]) -> f64 {
    polys
        .iter()
        .map(|p| {
            let mut val = Complex64::new(0.0, 0.0);
            let mut mag = 0.0f64;
            for (e, c) in p.terms() {
                let mut t = crate::polycore::to_c64(c);
                for (i, &k) in e.0.iter().enumerate() {
                    if k > 0 {
                        t *= x[i].powu(k);
                    }
                }
                val += t;
                mag += t.norm();
            }
            val.norm() / mag.max(1e-300)
        })
        .fold(0.0, f64::max)
}
