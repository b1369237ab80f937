//! End-to-end SINR, spectral efficiency and Monte-Carlo averaging.
//!
//! SINRs are noise-averaged: noise variances enter the expression and no
//! noise samples are drawn, so Monte Carlo only averages over fading,
//! shadowing and placement.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)] // libm-backed float methods when std is not linked
use num_traits::Float;

use crate::channel::{sample_realization, ChannelRealization};
use crate::config::SystemConfig;
use crate::error::{invalid_arg, Error, Result};
use crate::hybrid::{build_full_digital, build_processor, FullDigitalProcessor, HybridProcessor};
use crate::linalg::{dot_conj, norm_sqr, CMatrix};

/// Relay architecture evaluated by the Monte-Carlo engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Hybrid,
    FullDigital,
}

/// SINR of pair `k` given the effective row `v = g₂ₖᴴ·(relay matrix)` that
/// maps relay-received samples to destination `k`.
fn sinr_from_effective_row(v: &[Complex64], g1: &CMatrix, k: usize, config: &SystemConfig) -> f64 {
    // v·G₁ computed as one row-vector product, then split into desired and
    // interference gains
    let gains = g1.left_mul_vec(v);
    let desired = config.p_user * gains[k].norm_sqr();
    let interference: f64 = gains
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, z)| z.norm_sqr())
        .sum::<f64>()
        * config.p_user;
    let relay_noise = norm_sqr(v) * config.var_relay_noise;
    desired / (interference + relay_noise + config.var_dest_noise)
}

fn check_pair(k: usize, real: &ChannelRealization) -> Result<()> {
    if k >= real.n_pairs() {
        return Err(invalid_arg!("pair index {k} out of range for {} pairs", real.n_pairs()));
    }
    Ok(())
}

/// Effective row `g₂ₖᴴF₂ᴴWF₁` (length `N`).
pub fn effective_row(proc: &HybridProcessor, k: usize) -> Vec<Complex64> {
    // g₂ₖᴴF₂ᴴ = (F₂g₂ₖ)ᴴ, which is column k of A₂ conjugated
    let u: Vec<Complex64> = (0..proc.a2.rows()).map(|t| proc.a2[(t, k)].conj()).collect();
    let uw = proc.w.left_mul_vec(&u);
    proc.f1.left_mul_vec(&uw)
}

/// Exact instantaneous SINR of pair `k` (0-based) under hybrid processing.
pub fn sinr_exact(real: &ChannelRealization, proc: &HybridProcessor, config: &SystemConfig, k: usize) -> Result<f64> {
    check_pair(k, real)?;
    if proc.f1.cols() != real.n_antennas() || proc.a2.cols() != real.n_pairs() {
        return Err(invalid_arg!("processor does not match realization"));
    }
    let v = effective_row(proc, k);
    Ok(sinr_from_effective_row(&v, &real.g1, k, config))
}

/// Exact SINR of pair `k` under full-digital MRC/MRT, evaluated right-to-left
/// on vectors.
pub fn sinr_full_digital(
    real: &ChannelRealization,
    baseline: &FullDigitalProcessor,
    config: &SystemConfig,
    k: usize,
) -> Result<f64> {
    check_pair(k, real)?;
    if baseline.g1.shape() != real.g1.shape() {
        return Err(invalid_arg!("baseline does not match realization"));
    }
    // s = g₂ₖᴴG₂ as a row, then v = α·s·G₁ᴴ
    let g2k_conj: Vec<Complex64> = (0..baseline.g2.rows()).map(|n| baseline.g2[(n, k)].conj()).collect();
    let s = baseline.g2.left_mul_vec(&g2k_conj);
    let g1 = &baseline.g1;
    let v: Vec<Complex64> = (0..g1.rows()).map(|n| baseline.alpha * dot_conj(&s, g1.row(n))).collect();
    Ok(sinr_from_effective_row(&v, &real.g1, k, config))
}

/// `(1/2)·Σₖ log₂(1 + SINRₖ)`; the half accounts for the two relay hops.
pub fn rate_of_realization(sinrs: &[f64]) -> Result<f64> {
    if let Some(bad) = sinrs.iter().find(|s| s.is_nan() || **s < 0.0) {
        return Err(invalid_arg!("SINR must be non-negative, got {bad}"));
    }
    Ok(0.5 * sinrs.iter().map(|s| (1.0 + s).log2()).sum::<f64>())
}

/// Per-pair SINRs of one realization.
pub fn realization_sinrs(real: &ChannelRealization, config: &SystemConfig, mode: Mode) -> Result<Vec<f64>> {
    match mode {
        Mode::Hybrid => {
            let proc = build_processor(real, config)?;
            (0..real.n_pairs()).map(|k| sinr_exact(real, &proc, config, k)).collect()
        }
        Mode::FullDigital => {
            let fd = build_full_digital(real, config)?;
            (0..real.n_pairs()).map(|k| sinr_full_digital(real, &fd, config, k)).collect()
        }
    }
}

/// Result of one Monte-Carlo trial.
#[derive(Debug, Clone, PartialEq)]
pub enum TrialOutcome {
    Completed { rate: f64, sinrs: Vec<f64> },
    Degenerate,
}

/// Evaluates trial `trial`; a degenerate channel is reported, not raised.
pub fn run_trial(config: &SystemConfig, trial: u64, mode: Mode) -> Result<TrialOutcome> {
    let real = sample_realization(config, trial)?;
    match realization_sinrs(&real, config, mode) {
        Ok(sinrs) => {
            let rate = rate_of_realization(&sinrs)?;
            Ok(TrialOutcome::Completed { rate, sinrs })
        }
        Err(Error::DegenerateChannel(_)) => Ok(TrialOutcome::Degenerate),
        Err(e) => Err(e),
    }
}

/// Monte-Carlo estimate of the average spectral efficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub mean_rate: f64,
    /// Sample standard deviation over `√n_trials`.
    pub std_error: f64,
    /// Completed (non-degenerate) trials.
    pub n_trials: usize,
    pub degenerate_trials: usize,
    pub per_pair_mean_sinr: Vec<f64>,
}

/// Reduces trial outcomes, given in ascending trial order, into a
/// [`RatePoint`]. More than 1% degenerate trials is an error.
pub fn summarize(outcomes: &[TrialOutcome]) -> Result<RatePoint> {
    let total = outcomes.len();
    let degenerate = outcomes.iter().filter(|o| matches!(o, TrialOutcome::Degenerate)).count();
    if degenerate * 100 > total {
        return Err(Error::TooManyDegenerate { degenerate, total });
    }
    let done = total - degenerate;
    if done < 2 {
        return Err(invalid_arg!("need at least two completed trials, got {done}"));
    }
    let mut sum = 0.0;
    let mut per_pair: Vec<f64> = Vec::new();
    for o in outcomes {
        if let TrialOutcome::Completed { rate, sinrs } = o {
            sum += rate;
            if per_pair.is_empty() {
                per_pair = vec![0.0; sinrs.len()];
            }
            for (acc, s) in per_pair.iter_mut().zip(sinrs) {
                *acc += s;
            }
        }
    }
    let n = done as f64;
    let mean = sum / n;
    let mut sq = 0.0;
    for o in outcomes {
        if let TrialOutcome::Completed { rate, .. } = o {
            sq += (rate - mean) * (rate - mean);
        }
    }
    let std_error = (sq / (n - 1.0)).sqrt() / n.sqrt();
    for acc in &mut per_pair {
        *acc /= n;
    }
    Ok(RatePoint {
        mean_rate: mean,
        std_error,
        n_trials: done,
        degenerate_trials: degenerate,
        per_pair_mean_sinr: per_pair,
    })
}

/// Sequential Monte-Carlo average over trials `0..n_trials`.
pub fn monte_carlo_rate(config: &SystemConfig, n_trials: usize, mode: Mode) -> Result<RatePoint> {
    if n_trials < 2 {
        return Err(invalid_arg!("need at least two trials, got {n_trials}"));
    }
    config.validate()?;
    let outcomes = (0..n_trials as u64)
        .map(|t| run_trial(config, t, mode))
        .collect::<Result<Vec<_>>>()?;
    summarize(&outcomes)
}
