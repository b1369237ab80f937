//! Fading and geometry.
//!
//! Small-scale fading is i.i.d. `CN(0, 1)`. Large-scale fading combines
//! log-normal shadowing (in dB) with distance attenuation `(r/r_g)^-ν`
//! relative to the guard radius. Users are uniform over the annulus area
//! between the guard radius and the cell edge.
//!
//! Every realization is a pure function of `(seed, trial)`: trial `t` uses
//! ChaCha stream `t` of the generator keyed by `seed`, so trials can be
//! generated in any order or in parallel.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[allow(unused_imports)] // libm-backed float methods when std is not linked
use num_traits::Float;

use crate::config::{DropPolicy, SystemConfig};
use crate::error::{invalid_arg, Result};
use crate::linalg::CMatrix;

/// One draw of the two hops. `g1 = h1·diag(eta1)^{1/2}`, likewise `g2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h1: CMatrix,
    pub h2: CMatrix,
    pub eta1: Vec<f64>,
    pub eta2: Vec<f64>,
    pub g1: CMatrix,
    pub g2: CMatrix,
}

impl ChannelRealization {
    /// Assembles a realization, deriving `g1`/`g2` from the small-scale
    /// matrices and the large-scale coefficients.
    pub fn from_parts(h1: CMatrix, h2: CMatrix, eta1: Vec<f64>, eta2: Vec<f64>) -> Result<Self> {
        if h1.shape() != h2.shape() {
            return Err(invalid_arg!("h1 {:?} and h2 {:?} differ in shape", h1.shape(), h2.shape()));
        }
        if eta1.len() != h1.cols() || eta2.len() != h2.cols() {
            return Err(invalid_arg!("need one large-scale coefficient per column"));
        }
        if eta1.iter().chain(&eta2).any(|&e| !(e > 0.0 && e.is_finite())) {
            return Err(invalid_arg!("large-scale coefficients must be positive and finite"));
        }
        let g1 = apply_large_scale(&h1, &eta1);
        let g2 = apply_large_scale(&h2, &eta2);
        Ok(Self { h1, h2, eta1, eta2, g1, g2 })
    }

    pub fn n_antennas(&self) -> usize {
        self.h1.rows()
    }

    pub fn n_pairs(&self) -> usize {
        self.h1.cols()
    }
}

fn apply_large_scale(h: &CMatrix, eta: &[f64]) -> CMatrix {
    let amp: Vec<f64> = eta.iter().map(|e| e.sqrt()).collect();
    CMatrix::from_fn(h.rows(), h.cols(), |i, j| h[(i, j)] * amp[j])
}

/// `n×k` matrix of i.i.d. circularly-symmetric `CN(0, 1)` entries.
pub fn sample_small_scale<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<CMatrix> {
    if n == 0 || k == 0 {
        return Err(invalid_arg!("small-scale fading needs positive dimensions, got {n}x{k}"));
    }
    let scale = core::f64::consts::FRAC_1_SQRT_2;
    Ok(CMatrix::from_fn(n, k, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    }))
}

/// Large-scale coefficient for a user at `distance_m` with shadowing `shadow_db`.
pub fn large_scale_gain(distance_m: f64, shadow_db: f64, config: &SystemConfig) -> f64 {
    let shadow = 10f64.powf(shadow_db / 10.0);
    shadow * (distance_m / config.guard_radius_m).powf(-config.pathloss_exp)
}

/// Distance from the relay of a user placed uniformly over the annulus area.
pub fn sample_distance<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> f64 {
    let rg2 = config.guard_radius_m * config.guard_radius_m;
    let rc2 = config.cell_radius_m * config.cell_radius_m;
    let u: f64 = rng.random();
    (rg2 + u * (rc2 - rg2)).sqrt()
}

fn sample_side<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> Vec<f64> {
    (0..config.n_pairs)
        .map(|_| {
            let r = sample_distance(config, rng);
            let z: f64 = rng.sample(StandardNormal);
            large_scale_gain(r, config.shadow_std_db * z, config)
        })
        .collect()
}

/// Source-side and destination-side large-scale coefficients, drawn
/// independently (all source users first, then all destinations).
pub fn sample_large_scale<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> Result<(Vec<f64>, Vec<f64>)> {
    config.validate()?;
    let eta1 = sample_side(config, rng);
    let eta2 = sample_side(config, rng);
    Ok((eta1, eta2))
}

/// Random stream of one Monte-Carlo trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Stream reserved for user drops. Trial indices never reach it, so drops
/// stay independent of the trial streams even when both seeds coincide.
pub const DROP_STREAM: u64 = u64::MAX;

/// Stream of user drops keyed by `drop_seed`.
pub fn drop_rng(drop_seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(drop_seed);
    rng.set_stream(DROP_STREAM);
    rng
}

/// The drop shared by all trials under [`DropPolicy::Fixed`]: the first
/// drop of [`drop_rng`].
pub fn fixed_drop(config: &SystemConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    sample_large_scale(config, &mut drop_rng(config.drop_seed))
}

/// Deterministic realization for `trial` under `config`.
pub fn sample_realization(config: &SystemConfig, trial: u64) -> Result<ChannelRealization> {
    config.validate()?;
    let mut rng = trial_rng(config.seed, trial);
    let (eta1, eta2) = match config.drop_policy {
        DropPolicy::RedrawPerTrial => sample_large_scale(config, &mut rng)?,
        DropPolicy::Fixed => fixed_drop(config)?,
    };
    let h1 = sample_small_scale(config.n_antennas, config.n_pairs, &mut rng)?;
    let h2 = sample_small_scale(config.n_antennas, config.n_pairs, &mut rng)?;
    ChannelRealization::from_parts(h1, h2, eta1, eta2)
}
