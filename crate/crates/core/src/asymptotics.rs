//! Large-antenna SINR and rate laws.
//!
//! With phase-matched analog stages, `F·H → √(Nπ/4)·sinc(δ)·I`, where
//! `δ = π/2^β` is the quantizer half-step (`δ = 0` for continuous phases).
//! Three power-scaling regimes admit closed forms:
//!
//! - Case 1: `N·P_u → E_u` and `N·P_r → E_r`.
//! - Case 2: `N·P_u → E_u`, `P_r` fixed; the rate saturates at
//!   `½Σ log₂(1 + (π/4)·E_u·η₁ₖ·sinc²(δ)/σ²_R)`.
//! - Case 3: `N·P_r → E_r`, `P_u` fixed.
//!
//! Only the first `r = min(K_r, K_t, K)` pairs keep a beamforming column in
//! the limit; the remaining pairs contribute zero rate.
//!
//! Pair indices are 0-based. All quantities are linear (no dB).

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

#[allow(unused_imports)] // libm-backed float methods when std is not linked
use num_traits::Float;

use crate::config::SystemConfig;
use crate::error::{invalid_arg, Result};
use crate::hybrid::sinc;

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticInputs {
    /// `E_u = lim N·P_u`.
    pub e_user: f64,
    /// `E_r = lim N·P_r`.
    pub e_relay: f64,
    /// `P_u` for regimes that hold it fixed.
    pub p_user: f64,
    /// `P_r` for regimes that hold it fixed.
    pub p_relay: f64,
    pub eta1: Vec<f64>,
    pub eta2: Vec<f64>,
    pub var_relay_noise: f64,
    pub var_dest_noise: f64,
    /// `min(K_r, K_t, K)`.
    pub r: usize,
    /// Quantizer half-step `δ` in `[0, π/2]`; zero for continuous phases.
    pub delta: f64,
}

impl AsymptoticInputs {
    /// Inputs for `config` at its own antenna count: `E_u = N·P_u`,
    /// `E_r = N·P_r`, and `δ` from the configured resolution.
    pub fn from_config(config: &SystemConfig, eta1: Vec<f64>, eta2: Vec<f64>) -> Self {
        let n = config.n_antennas as f64;
        Self {
            e_user: n * config.p_user,
            e_relay: n * config.p_relay,
            p_user: config.p_user,
            p_relay: config.p_relay,
            eta1,
            eta2,
            var_relay_noise: config.var_relay_noise,
            var_dest_noise: config.var_dest_noise,
            r: config.effective_pairs(),
            delta: config.quantization().map_or(0.0, |q| q.step()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.eta1.len() < self.r || self.eta2.len() < self.r {
            return Err(invalid_arg!(
                "r = {} needs 1 <= r <= len(eta) (have {} and {})",
                self.r,
                self.eta1.len(),
                self.eta2.len()
            ));
        }
        if !(0.0..=core::f64::consts::FRAC_PI_2).contains(&self.delta) {
            return Err(invalid_arg!("delta must lie in [0, pi/2], got {}", self.delta));
        }
        Ok(())
    }

    fn check_pair(&self, k: usize) -> Result<()> {
        self.validate()?;
        if k >= self.r {
            return Err(invalid_arg!("pair {k} has no beamforming column (r = {})", self.r));
        }
        Ok(())
    }

    fn sinc(&self) -> f64 {
        sinc(self.delta)
    }

    /// `Σᵢ<r η₁ᵢ²η₂ᵢ`.
    fn sum_eta1_sq_eta2(&self) -> f64 {
        (0..self.r).map(|i| self.eta1[i] * self.eta1[i] * self.eta2[i]).sum()
    }

    /// `Σᵢ<r η₁ᵢη₂ᵢ`.
    fn sum_eta1_eta2(&self) -> f64 {
        (0..self.r).map(|i| self.eta1[i] * self.eta2[i]).sum()
    }
}

/// Large-N normalization at finite `n` with fixed `P_u`, `P_r`:
/// `α² ≈ P_r / (P_u(Nπ/4)³s⁶Ση₁²η₂ + σ²_R(Nπ/4)²s⁴Ση₁η₂)`, `s = sinc(δ)`.
pub fn alpha_large_n(inputs: &AsymptoticInputs, n: usize) -> Result<f64> {
    inputs.validate()?;
    let g = n as f64 * FRAC_PI_4;
    let s = inputs.sinc();
    let denom = inputs.p_user * g.powi(3) * s.powi(6) * inputs.sum_eta1_sq_eta2()
        + inputs.var_relay_noise * g.powi(2) * s.powi(4) * inputs.sum_eta1_eta2();
    Ok((inputs.p_relay / denom).sqrt())
}

/// Limit SINR of pair `k` at finite `n` for a given normalization `alpha`.
///
/// With `g = Nπ/4` and `s = sinc(δ)`:
/// `g⁴s⁸P_uα²η₁ₖ²η₂ₖ² / (g³s⁶σ²_Rα²η₁ₖη₂ₖ² + σ²_D)`.
pub fn sinr_asymptotic_finite_n(inputs: &AsymptoticInputs, alpha: f64, n: usize, k: usize) -> Result<f64> {
    inputs.check_pair(k)?;
    let g = n as f64 * FRAC_PI_4;
    let s = inputs.sinc();
    let (e1, e2) = (inputs.eta1[k], inputs.eta2[k]);
    let a2 = alpha * alpha;
    let num = g.powi(4) * s.powi(8) * inputs.p_user * a2 * e1 * e1 * e2 * e2;
    let den = g.powi(3) * s.powi(6) * inputs.var_relay_noise * a2 * e1 * e2 * e2 + inputs.var_dest_noise;
    Ok(num / den)
}

/// Case-1 limit SINR of pair `k`.
///
/// Quantization multiplies the numerator by `sinc⁸(δ)`, the two
/// energy-scaled denominator terms by `sinc⁶(δ)` and the noise-noise term by
/// `sinc⁴(δ)`; these exponents carry the quantized normalization `α̂`.
pub fn sinr_case1(inputs: &AsymptoticInputs, k: usize) -> Result<f64> {
    inputs.check_pair(k)?;
    let s = inputs.sinc();
    let (e1, e2) = (inputs.eta1[k], inputs.eta2[k]);
    let (eu, er) = (inputs.e_user, inputs.e_relay);
    let (nr, nd) = (inputs.var_relay_noise, inputs.var_dest_noise);
    let num = FRAC_PI_4.powi(2) * s.powi(8) * eu * er * e1 * e1 * e2 * e2;
    let den = FRAC_PI_4 * s.powi(6) * er * nr * e1 * e2 * e2
        + FRAC_PI_4 * s.powi(6) * eu * nd * inputs.sum_eta1_sq_eta2()
        + s.powi(4) * nr * nd * inputs.sum_eta1_eta2();
    Ok(num / den)
}

/// Case-2 limit SINR of pair `k`: `(π/4)·E_u·η₁ₖ·sinc²(δ)/σ²_R`.
pub fn sinr_case2(inputs: &AsymptoticInputs, k: usize) -> Result<f64> {
    inputs.check_pair(k)?;
    Ok(FRAC_PI_4 * inputs.e_user * inputs.eta1[k] * inputs.sinc().powi(2) / inputs.var_relay_noise)
}

/// Case-3 limit SINR of pair `k`:
/// `(π/4)·E_r·η₁ₖ²η₂ₖ²·sinc²(δ) / (σ²_D·Σᵢ<r η₁ᵢ²η₂ᵢ)`.
pub fn sinr_case3(inputs: &AsymptoticInputs, k: usize) -> Result<f64> {
    inputs.check_pair(k)?;
    let (e1, e2) = (inputs.eta1[k], inputs.eta2[k]);
    Ok(FRAC_PI_4 * inputs.e_relay * e1 * e1 * e2 * e2 * inputs.sinc().powi(2)
        / (inputs.var_dest_noise * inputs.sum_eta1_sq_eta2()))
}

fn half_sum_log2(inputs: &AsymptoticInputs, sinr: impl Fn(&AsymptoticInputs, usize) -> Result<f64>) -> Result<f64> {
    inputs.validate()?;
    let mut total = 0.0;
    for k in 0..inputs.r {
        total += (1.0 + sinr(inputs, k)?).log2();
    }
    Ok(0.5 * total)
}

pub fn rate_case1(inputs: &AsymptoticInputs) -> Result<f64> {
    half_sum_log2(inputs, sinr_case1)
}

pub fn rate_case2(inputs: &AsymptoticInputs) -> Result<f64> {
    half_sum_log2(inputs, sinr_case2)
}

pub fn rate_case3(inputs: &AsymptoticInputs) -> Result<f64> {
    half_sum_log2(inputs, sinr_case3)
}

/// Rate from [`sinr_asymptotic_finite_n`] with `α` from [`alpha_large_n`]:
/// the large-N prediction when neither power is scaled with `N`.
pub fn rate_fixed_power(inputs: &AsymptoticInputs, n: usize) -> Result<f64> {
    let alpha = alpha_large_n(inputs, n)?;
    half_sum_log2(inputs, |inp, k| sinr_asymptotic_finite_n(inp, alpha, n, k))
}
