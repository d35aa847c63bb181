//! Numerical continuation: the slice homotopy, path tracking toward the
//! curve's points at x1 = 0, and the polyhedral end game that recovers
//! tropisms with their winding numbers.

mod endgame;
pub(crate) mod lu;
mod slice;
mod square;
pub(crate) mod track;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use endgame::{
    analyze_samples,
    endgame, estimate_winding, run_curve, CurveReport, EndgameResult, PathStatus, TropismGroup, WindingEstimate,
};
pub use slice::{solve_slice, track_path, PathSample, SliceHomotopy};
pub use square::{solve_square, SquareSolution};

use crate::mixedvol::MixedVolumeError;
use crate::polycore::PolyError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomotopyError {
    #[error("gamma must be nonzero")]
    ZeroGamma,
    #[error("system has {polys} polynomials in {nvars} variables; expected at least {needed}")]
    WrongShape { polys: usize, nvars: usize, needed: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("total-degree homotopy would track {0} paths")]
    TooManyPaths(u128),
    #[error("start point does not satisfy the homotopy (residual {0:e})")]
    BadStart(f64),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    MixedVolume(#[from] MixedVolumeError),
}

/// Tracking and end game settings. Every random choice derives from
/// `master_seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub master_seed: u64,
    /// Geometric ratio between consecutive end game samples.
    pub r: f64,
    /// First end game sample s_0.
    pub s0: f64,
    pub newton_tolerance: f64,
    pub max_winding: u32,
    /// Condition estimates above these switch corrections to 128 and 256 bits.
    pub precision_thresholds: [f64; 2],
    /// Step budget for one tracking segment.
    pub max_steps: usize,
    /// End game sample budget per path.
    pub max_samples: usize,
    /// Target distance of the extrapolated direction from its rational value.
    pub accuracy: f64,
    /// Agreement required between three consecutive extrapolations.
    pub agreement: f64,
    /// Columns of the Richardson table.
    pub richardson_depth: usize,
    /// Compare slice solution counts at a second gamma.
    pub noether_check: bool,
    /// Compare the path count with the exact degree bound.
    pub cross_check: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            master_seed: 0,
            r: 0.4,
            s0: 0.1,
            newton_tolerance: 1e-8,
            max_winding: 8,
            precision_thresholds: [1e8, 1e16],
            max_steps: 20_000,
            max_samples: 32,
            accuracy: 1e-8,
            agreement: 1e-3,
            richardson_depth: 6,
            noether_check: true,
            cross_check: true,
        }
    }
}

impl Config {
    pub fn with_seed(seed: u64) -> Self {
        Config { master_seed: seed, ..Config::default() }
    }

    pub fn validate(&self) -> Result<(), HomotopyError> {
        let bad = |m: &str| Err(HomotopyError::InvalidConfig(m.to_string()));
        if !(self.r > 0.0 && self.r < 1.0) {
            return bad("r must lie in (0, 1)");
        }
        if !(self.s0 > 0.0 && self.s0 < 1.0) {
            return bad("s0 must lie in (0, 1)");
        }
        if self.max_winding == 0 {
            return bad("max_winding must be positive");
        }
        if !(self.precision_thresholds[0] < self.precision_thresholds[1]) {
            return bad("precision thresholds must increase");
        }
        if self.max_samples < 4 {
            return bad("at least four samples are needed");
        }
        if !(self.newton_tolerance > 0.0) {
            return bad("newton tolerance must be positive");
        }
        Ok(())
    }
}

/// Independent random stream `stream` under the master seed.
pub(crate) fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub(crate) fn unit_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Random complex number with both parts uniform in [-1, 1].
pub(crate) fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Stream tags keep the random choices of different stages independent.
pub(crate) mod streams {
    pub const GAMMA: u64 = 1;
    pub const SECOND_GAMMA: u64 = 2;
    pub const RANDOMIZE: u64 = 3;
    pub const SLICE_START: u64 = 4;
    pub const SECOND_SLICE_START: u64 = 5;
    pub const LEADING_START: u64 = 6;

    /// Per-path retry stream.
    pub fn path(base: u64, index: usize, attempt: u32) -> u64 {
        (base << 48) ^ ((index as u64) << 8) ^ attempt as u64 ^ 0x5eed_0000_0000
    }
}
