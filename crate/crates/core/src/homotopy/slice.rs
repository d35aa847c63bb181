//! The slice homotopy x1 = (1 − t)γ: solutions at t = 0 and tracking of
//! each path toward t = 1 at geometrically spaced parameter values.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lu::{condition_estimate, norm_inf};
use super::square::{relative_residual, solve_square};
use super::track::{bits_for, newton, track, Eval, Homotopy, MpCache, NumSystem, TrackOptions};
use super::{random_complex, seeded, streams, unit_complex, Config, HomotopyError};
use crate::polycore::coeff::exact_of_c64;
use crate::polycore::{ExactPoly, ExactSystem, MpComplex, NumScalar, Polynomial};

/// Residual accepted for a point of the original (unrandomized) system.
const RESIDUAL_TOL: f64 = 1e-8;

/// One end game sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    /// Path parameter: 1 − t before the winding number is known,
    /// (1 − t)^{1/ω} after.
    pub s: f64,
    pub t: f64,
    pub x: Vec<Complex64>,
    pub condition_estimate: f64,
    pub precision_bits: usize,
}

/// f(x1, …, xn) = 0 together with x1 = (1 − t)γ, tracked in u = ln(1 − t).
#[derive(Debug)]
pub struct SliceHomotopy {
    pub system: ExactSystem,
    /// n − 1 polynomials: the input itself, or random combinations of it
    /// when the input is overdetermined.
    pub square: Vec<ExactPoly>,
    pub gamma: Complex64,
    /// Accessory constant multiplying the start system of the t = 0 solve.
    pub accessory: Complex64,
    num: NumSystem<Complex64>,
    mp: MpCache,
}

impl SliceHomotopy {
    pub fn new(system: &ExactSystem, gamma: Complex64, cfg: &Config) -> Result<Self, HomotopyError> {
        let n = system.nvars();
        let m = system.len();
        if n < 2 || m + 1 < n {
            return Err(HomotopyError::WrongShape { polys: m, nvars: n, needed: n.saturating_sub(1) });
        }
        if gamma.norm() == 0.0 {
            return Err(HomotopyError::ZeroGamma);
        }
        let square: Vec<ExactPoly> = if m == n - 1 {
            system.polys().to_vec()
        } else {
            let mut rng = seeded(cfg.master_seed, streams::RANDOMIZE);
            (0..n - 1)
                .map(|_| {
                    system.polys().iter().fold(Polynomial::zero(n), |acc, p| {
                        acc.add(&p.scale(&exact_of_c64(random_complex(&mut rng))))
                    })
                })
                .collect()
        };
        let accessory = unit_complex(&mut seeded(cfg.master_seed, streams::SLICE_START));
        Ok(SliceHomotopy {
            system: system.clone(),
            num: NumSystem::from_exact(&square, n, 53),
            square,
            gamma,
            accessory,
            mp: MpCache::default(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.system.nvars()
    }

    /// Points of the curve with x1 = γ, ordered by start-path index.
    pub fn slice_solutions(&self, cfg: &Config, stream: u64) -> Result<Vec<Vec<Complex64>>, HomotopyError> {
        let g = exact_of_c64(self.gamma);
        let reduced: Vec<ExactPoly> = self.square.iter().map(|p| p.substitute(0, &g).drop_var(0)).collect();
        if reduced.iter().any(|p| p.is_zero()) {
            return Err(HomotopyError::WrongShape { polys: self.system.len(), nvars: self.nvars(), needed: self.nvars() - 1 });
        }
        let sols = solve_square(&reduced, cfg, stream)?;
        Ok(sols
            .into_iter()
            .map(|s| {
                let mut x = vec![self.gamma];
                x.extend(s.point);
                x
            })
            .filter(|x| relative_residual(self.system.polys(), x) <= RESIDUAL_TOL)
            .collect())
    }

    fn point(&self, y: &[Complex64], u: f64) -> Vec<Complex64> {
        let mut x = Vec::with_capacity(y.len() + 1);
        x.push(self.gamma * u.exp());
        x.extend_from_slice(y);
        x
    }
}

impl Homotopy for SliceHomotopy {

    fn eval(&self, y: &[Complex64], u: f64) -> Eval<Complex64> {
        let x = self.point(y, u);
        let (h, j) = self.num.eval(&x);
        let hp = j.iter().map(|row| row[0] * x[0]).collect();
        let jy = j.into_iter().map(|row| row[1..].to_vec()).collect();
        Eval { h, jy, hp }
    }

    fn eval_mp(&self, y: &[MpComplex], u: f64, prec: usize) -> (Vec<MpComplex>, Vec<Vec<MpComplex>>) {
        let sys = self.mp.get(&self.square, self.nvars(), prec);
        let mut x = Vec::with_capacity(y.len() + 1);
        x.push(MpComplex::lift(self.gamma, prec) * MpComplex::lift(Complex64::new(u.exp(), 0.0), prec));
        x.extend_from_slice(y);
        let (h, j) = sys.eval(&x);
        (h, j.into_iter().map(|row| row[1..].to_vec()).collect())
    }
}

/// All isolated solutions of {s = 0, x1 = γ}, each as a full n-vector.
pub fn solve_slice(s: &ExactSystem, gamma: Complex64, cfg: &Config) -> Result<Vec<Vec<Complex64>>, HomotopyError> {
    SliceHomotopy::new(s, gamma, cfg)?.slice_solutions(cfg, streams::SLICE_START)
}

/// Steps along one path in u = ln s, stopping at s_k = s0 r^k.
pub(crate) struct Sampler<'a> {
    h: &'a SliceHomotopy,
    cfg: &'a Config,
    y: Vec<Complex64>,
    u: f64,
    pub cond: f64,
    pub bits: usize,
}

fn segment_options(cfg: &Config) -> TrackOptions {
    TrackOptions { h_init: 0.05, h_max: 0.25, h_min: 1e-10, max_steps: cfg.max_steps, corrector_tol: 1e-10, relative: true }
}

impl<'a> Sampler<'a> {
    /// Validate the start point (x1 = γ) and track to s0.
    pub fn start(h: &'a SliceHomotopy, start: &[Complex64], cfg: &'a Config) -> Result<Option<Self>, HomotopyError> {
        if start.len() != h.nvars() {
            return Err(HomotopyError::WrongShape { polys: h.system.len(), nvars: start.len(), needed: h.nvars() });
        }
        let y0 = &start[1..];
        let res = norm_inf(&h.eval(y0, 0.0).h);
        let scale = norm_inf(start).max(1.0);
        if (start[0] - h.gamma).norm() > 1e-12 * h.gamma.norm() || res > cfg.newton_tolerance * scale {
            return Err(HomotopyError::BadStart(res));
        }
        let mut s = Sampler { h, cfg, y: y0.to_vec(), u: 0.0, cond: 1.0, bits: 53 };
        Ok(s.advance_to(cfg.s0.ln()).then_some(s))
    }

    fn advance_to(&mut self, u1: f64) -> bool {
        let out = track(self.h, &self.y, self.u, u1, &segment_options(self.cfg), self.cfg);
        if !out.reached {
            return false;
        }
        self.y = out.y;
        self.u = u1;
        self.refine()
    }

    /// Polish the current point as far as the working precision allows.
    fn refine(&mut self) -> bool {
        self.cond = condition_estimate(&self.h.eval(&self.y, self.u).jy);
        self.bits = bits_for(self.cond, self.cfg);
        let out = newton(self.h, &self.y, self.u, self.bits, 1e-15, 8, true);
        if !out.y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) || out.last_step > 1e-6 {
            return false;
        }
        self.y = out.y;
        true
    }

    /// Move to the next sample point s ↦ r s.
    pub fn advance(&mut self) -> bool {
        let u1 = self.u + self.cfg.r.ln();
        self.advance_to(u1)
    }

    pub fn sample(&self) -> PathSample {
        let s = self.u.exp();
        PathSample {
            s,
            t: 1.0 - s,
            x: self.h.point(&self.y, self.u),
            condition_estimate: self.cond,
            precision_bits: self.bits,
        }
    }
}

/// Samples at s_k = s0 r^k, k = 0 .. max_samples − 1; shorter when tracking
/// fails partway.
pub fn track_path(h: &SliceHomotopy, start: &[Complex64], cfg: &Config) -> Result<Vec<PathSample>, HomotopyError> {
    cfg.validate()?;
    let Some(mut sampler) = Sampler::start(h, start, cfg)? else { return Ok(vec![]) };
    let mut out = vec![sampler.sample()];
    while out.len() < cfg.max_samples && sampler.advance() {
        out.push(sampler.sample());
    }
    Ok(out)
}
