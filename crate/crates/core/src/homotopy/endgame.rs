//! Polyhedral end game: slopes of log-magnitudes at geometrically spaced
//! samples, Richardson extrapolation under each candidate winding number,
//! and the grouping of paths by tropism.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::slice::{PathSample, Sampler, SliceHomotopy};
use super::{seeded, streams, unit_complex, Config, HomotopyError};
use crate::geometry::primitive;
use crate::mixedvol::degree_bound;
use crate::polycore::ExactSystem;
use crate::puiseux::Tropism;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathStatus {
    Converged,
    Diverged,
    Inconclusive,
}

/// Outcome of the end game on one path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndgameResult {
    pub path: usize,
    /// Extrapolated leading exponents with respect to s = 1 − t (x1 has 1).
    pub direction: Vec<f64>,
    pub winding: u32,
    pub tropism: Option<Tropism>,
    /// c_i in x_i ≈ c_i (1 − t)^{w_i}.
    pub leading_coefficients: Vec<Complex64>,
    pub status: PathStatus,
    /// max_i |w_i − round(ω w_i)/ω|.
    pub accuracy: f64,
    pub samples: Vec<PathSample>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WindingEstimate {
    pub winding: u32,
    pub direction: Vec<f64>,
    pub accuracy: f64,
}

fn richardson(seq: &[f64], q: f64) -> f64 {
    let mut t = seq.to_vec();
    for j in 1..seq.len() {
        let qj = q.powi(j as i32);
        for k in 0..seq.len() - j {
            t[k] = (t[k + 1] - qj * t[k]) / (1.0 - qj);
        }
    }
    t[0]
}

fn richardson_c(seq: &[Complex64], q: f64) -> Complex64 {
    let mut t = seq.to_vec();
    for j in 1..seq.len() {
        let qj = q.powi(j as i32);
        for k in 0..seq.len() - j {
            t[k] = (t[k + 1] - t[k] * qj) / (1.0 - qj);
        }
    }
    t[0]
}

/// Extrapolated value from the window ending at index `end`.
fn extrapolate(seq: &[f64], end: usize, q: f64, depth: usize) -> f64 {
    let m = end.min(depth);
    richardson(&seq[end - m..=end], q)
}

fn distance_to_lattice(w: &[f64], omega: u32) -> f64 {
    let o = omega as f64;
    w.iter().map(|x| (x - (x * o).round() / o).abs()).fold(0.0, f64::max)
}

/// Least ω ≤ max_winding for which the Richardson extrapolations with ratio
/// r^{1/ω} of every coordinate's slope sequence agree over the last three
/// windows and land on multiples of 1/ω. `slopes[i][k]` is coordinate i's
/// k-th slope; `None` marks non-convergent input.
pub fn estimate_winding(slopes: &[Vec<f64>], cfg: &Config) -> Option<WindingEstimate> {
    let len = slopes.first()?.len();
    if len < 3 || slopes.iter().any(|s| s.len() != len || s.iter().any(|x| !x.is_finite())) {
        return None;
    }
    let k = len - 1;
    for omega in 1..=cfg.max_winding {
        let q = cfg.r.powf(1.0 / omega as f64);
        let est: Vec<[f64; 3]> = slopes
            .iter()
            .map(|s| {
                [
                    extrapolate(s, k - 2, q, cfg.richardson_depth),
                    extrapolate(s, k - 1, q, cfg.richardson_depth),
                    extrapolate(s, k, q, cfg.richardson_depth),
                ]
            })
            .collect();
        let agree = est.iter().all(|e| (e[2] - e[1]).abs() <= cfg.agreement && (e[1] - e[0]).abs() <= cfg.agreement);
        if !agree {
            continue;
        }
        let w: Vec<f64> = est.iter().map(|e| e[2]).collect();
        let o = omega as f64;
        if w.iter().all(|x| (x * o - (x * o).round()).abs() <= cfg.agreement) {
            let accuracy = distance_to_lattice(&w, omega);
            return Some(WindingEstimate { winding: omega, direction: w, accuracy });
        }
    }
    None
}

/// Slope sequences w_i^{(k)} = (log|x_i(s_{k+1})| − log|x_i(s_k)|)/log r.
fn slopes_of(samples: &[PathSample], r: f64) -> Option<Vec<Vec<f64>>> {
    let n = samples.first()?.x.len();
    let lr = r.ln();
    let mut out = vec![Vec::with_capacity(samples.len()); n];
    for w in samples.windows(2) {
        for i in 0..n {
            let (a, b) = (w[0].x[i].norm(), w[1].x[i].norm());
            if a == 0.0 || b == 0.0 {
                return None;
            }
            out[i].push((b.ln() - a.ln()) / lr);
        }
    }
    Some(out)
}

/// Leading coefficients c_i = lim x_i / s^{w_i} with w rounded to multiples
/// of 1/ω, extrapolated like the slopes.
fn leading_coefficients(samples: &[PathSample], w: &[f64], omega: u32, cfg: &Config) -> Vec<Complex64> {
    let o = omega as f64;
    let q = cfg.r.powf(1.0 / o);
    let k = samples.len() - 1;
    let m = k.min(cfg.richardson_depth);
    (0..w.len())
        .map(|i| {
            let wi = (w[i] * o).round() / o;
            let seq: Vec<Complex64> = samples[k - m..].iter().map(|p| p.x[i] / p.s.powf(wi)).collect();
            richardson_c(&seq, q)
        })
        .collect()
}

/// Analyse an externally produced sample sequence (consecutive samples must
/// be spaced by the ratio `cfg.r`).
pub fn analyze_samples(path: usize, samples: Vec<PathSample>, cfg: &Config) -> EndgameResult {
    let n = samples.first().map(|p| p.x.len()).unwrap_or(0);
    let slopes = slopes_of(&samples, cfg.r);
    let estimate = slopes.as_ref().and_then(|s| estimate_winding(s, cfg));
    finish(path, samples, slopes, estimate, n, cfg)
}

fn finish(
    path: usize,
    mut samples: Vec<PathSample>,
    slopes: Option<Vec<Vec<f64>>>,
    estimate: Option<WindingEstimate>,
    n: usize,
    cfg: &Config,
) -> EndgameResult {
    let Some(est) = estimate else {
        let direction = slopes.map(|s| s.iter().map(|v| v.last().copied().unwrap_or(f64::NAN)).collect());
        return EndgameResult {
            path,
            direction: direction.unwrap_or_else(|| vec![f64::NAN; n]),
            winding: 0,
            tropism: None,
            leading_coefficients: vec![],
            status: PathStatus::Inconclusive,
            accuracy: f64::INFINITY,
            samples,
        };
    };
    let o = est.winding as f64;
    let ints: Vec<i64> = est.direction.iter().map(|x| (x * o).round() as i64).collect();
    let diverged = ints.iter().any(|&v| v < 0);
    let status = if diverged {
        PathStatus::Diverged
    } else if est.accuracy <= cfg.accuracy {
        PathStatus::Converged
    } else {
        PathStatus::Inconclusive
    };
    let tropism = primitive(&ints).ok().and_then(|d| Tropism::new(d, est.winding).ok());
    let leading = leading_coefficients(&samples, &est.direction, est.winding, cfg);
    if status != PathStatus::Inconclusive {
        for p in samples.iter_mut() {
            p.s = p.s.powf(1.0 / o);
        }
    }
    EndgameResult {
        path,
        direction: est.direction,
        winding: est.winding,
        tropism: if status == PathStatus::Inconclusive { None } else { tropism },
        leading_coefficients: leading,
        status,
        accuracy: est.accuracy,
        samples,
    }
}

fn endgame_indexed(h: &SliceHomotopy, path: usize, start: &[Complex64], cfg: &Config) -> Result<EndgameResult, HomotopyError> {
    let n = h.nvars();
    let Some(mut sampler) = Sampler::start(h, start, cfg)? else {
        return Ok(finish(path, vec![], None, None, n, cfg));
    };
    let mut samples = vec![sampler.sample()];
    let mut last = None;
    while samples.len() < cfg.max_samples {
        if !sampler.advance() {
            break;
        }
        samples.push(sampler.sample());
        let Some(slopes) = slopes_of(&samples, cfg.r) else { break };
        last = estimate_winding(&slopes, cfg);
        if let Some(e) = &last {
            let o = e.winding as f64;
            let diverged = e.direction.iter().any(|x| (x * o).round() < 0.0);
            if e.accuracy <= cfg.accuracy || (diverged && samples.len() >= 8) {
                break;
            }
        }
    }
    let slopes = slopes_of(&samples, cfg.r);
    Ok(finish(path, samples, slopes, last, n, cfg))
}

/// Run the end game on one path starting from a solution at x1 = γ.
pub fn endgame(h: &SliceHomotopy, start: &[Complex64], cfg: &Config) -> Result<EndgameResult, HomotopyError> {
    cfg.validate()?;
    endgame_indexed(h, 0, start, cfg)
}

/// Paths sharing a tropism.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TropismGroup {
    pub tropism: Tropism,
    pub status: PathStatus,
    pub multiplicity: usize,
    pub paths: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub nvars: usize,
    pub gamma: Complex64,
    pub path_count: usize,
    pub degree_bound: Option<i64>,
    pub groups: Vec<TropismGroup>,
    pub inconclusive: Vec<usize>,
    pub paths: Vec<EndgameResult>,
    pub warnings: Vec<String>,
}

impl CurveReport {
    pub fn all_inconclusive(&self) -> bool {
        self.inconclusive.len() == self.paths.len()
    }

    pub fn group(&self, direction: &[i64]) -> Option<&TropismGroup> {
        self.groups.iter().find(|g| g.tropism.direction.entries() == direction)
    }
}

/// Slice at a random γ on the unit circle, run the end game on every path
/// (in parallel, merged in path order) and group the outcomes by tropism.
pub fn run_curve(s: &ExactSystem, cfg: &Config) -> Result<CurveReport, HomotopyError> {
    cfg.validate()?;
    let gamma = unit_complex(&mut seeded(cfg.master_seed, streams::GAMMA));
    let h = SliceHomotopy::new(s, gamma, cfg)?;
    let starts = h.slice_solutions(cfg, streams::SLICE_START)?;
    let mut warnings = Vec::new();
    if cfg.noether_check {
        let g2 = unit_complex(&mut seeded(cfg.master_seed, streams::SECOND_GAMMA));
        let h2 = SliceHomotopy::new(s, g2, cfg)?;
        let other = h2.slice_solutions(cfg, streams::SECOND_SLICE_START)?.len();
        if other != starts.len() {
            warnings.push(format!(
                "Noether position suspect: {} slice solutions at one gamma, {} at another",
                starts.len(),
                other
            ));
        }
    }
    let paths = starts
        .par_iter()
        .enumerate()
        .map(|(i, x)| endgame_indexed(&h, i, x, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let degree = if cfg.cross_check { degree_bound(s).ok() } else { None };
    if let Some(d) = degree {
        if d != paths.len() as i64 {
            warnings.push(format!("path count {} differs from the degree bound {}", paths.len(), d));
        }
    }
    let mut grouped: BTreeMap<(Tropism, PathStatus), Vec<usize>> = BTreeMap::new();
    let mut inconclusive = Vec::new();
    for r in &paths {
        match (&r.tropism, r.status) {
            (Some(t), st) if st != PathStatus::Inconclusive => grouped.entry((t.clone(), st)).or_default().push(r.path),
            _ => inconclusive.push(r.path),
        }
    }
    let groups = grouped
        .into_iter()
        .map(|((tropism, status), paths)| TropismGroup { tropism, status, multiplicity: paths.len(), paths })
        .collect();
    Ok(CurveReport {
        nvars: s.nvars(),
        gamma,
        path_count: paths.len(),
        degree_bound: degree,
        groups,
        inconclusive,
        paths,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64) -> Vec<Complex64>, cfg: &Config, count: usize) -> Vec<PathSample> {
        (0..count)
            .map(|k| {
                let s = cfg.s0 * cfg.r.powi(k as i32);
                PathSample { s, t: 1.0 - s, x: f(s), condition_estimate: 1.0, precision_bits: 53 }
            })
            .collect()
    }

    #[test]
    fn richardson_removes_geometric_terms() {
        let q: f64 = 0.5;
        let seq: Vec<f64> = (0..6).map(|k| 3.0 + 2.0 * q.powi(k) - q.powi(2 * k)).collect();
        assert!((richardson(&seq, q) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn exact_power_law() {
        let cfg = Config::default();
        let c = |v: f64| Complex64::new(v, 0.0);
        let samples = synthetic(|s| vec![c(s * s), c(s), c(s)], &cfg, 6);
        let r = analyze_samples(0, samples, &cfg);
        assert_eq!(r.status, PathStatus::Converged);
        assert_eq!(r.winding, 1);
        assert_eq!(r.tropism.unwrap().direction.entries(), &[2, 1, 1]);
    }

    #[test]
    fn square_root_branch() {
        let cfg = Config::default();
        let slopes: Vec<Vec<f64>> = {
            let samples = synthetic(|s| vec![Complex64::new(s.sqrt() * (1.0 + s.sqrt()), 0.0)], &cfg, 20);
            slopes_of(&samples, cfg.r).unwrap()
        };
        assert_eq!(estimate_winding(&slopes, &cfg).unwrap().winding, 2);
    }

    #[test]
    fn cube_root_with_correction() {
        let cfg = Config::default();
        let samples = synthetic(
            |s| vec![Complex64::new(s, 0.0), Complex64::new(1.0, 0.5) * (s.powf(2.0 / 3.0) * (1.0 + s.powf(1.0 / 3.0)))],
            &cfg,
            24,
        );
        let slopes = slopes_of(&samples, cfg.r).unwrap();
        let e = estimate_winding(&slopes, &cfg).unwrap();
        assert_eq!(e.winding, 3);
        assert!((e.direction[1] - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn too_few_slopes_is_inconclusive() {
        assert!(estimate_winding(&[vec![1.0, 1.0]], &Config::default()).is_none());
    }
}
