//! Hybrid analog/digital relay processing.
//!
//! The analog combiner `F₁` (`K_r×N`) and precoder `F₂` (`K_t×N`) are
//! phase-only with constant entry magnitude `1/√N`; row `i` conjugates the
//! phases of channel column `i`. The digital stage is MRC/MRT on the
//! reduced channels: `W = α·A₂·A₁ᴴ` with `A₁ = F₁G₁`, `A₂ = F₂G₂`, and `α`
//! scales the relay output to power `P_r`.
//!
//! `α` is evaluated on the instantaneous matrices of each realization.
//! Norms that would involve `N×N` products are evaluated through `K`-sized
//! traces instead.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)] // libm-backed float methods when std is not linked
use num_traits::{Euclid, Float};

use crate::channel::ChannelRealization;
use crate::config::SystemConfig;
use crate::error::{invalid_arg, Error, Result};
use crate::linalg::CMatrix;

/// Largest supported phase-shifter resolution.
pub const MAX_QUANT_BITS: u32 = 52;

/// `β`-bit uniform phase codebook `{m·2π/2^β : m = 0..2^β}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationSpec {
    bits: u32,
    /// Half the codeword spacing, `π/2^β`.
    step: f64,
}

impl QuantizationSpec {
    pub fn new(bits: u32) -> Result<Self> {
        if bits == 0 || bits > MAX_QUANT_BITS {
            return Err(invalid_arg!("quantization bits must be in 1..={MAX_QUANT_BITS}, got {bits}"));
        }
        Ok(Self { bits, step: PI / (1u64 << bits) as f64 })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `δ = π/2^β`; quantization errors lie in `[-δ, δ)`.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn levels(&self) -> u64 {
        1u64 << self.bits
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.step
    }

    /// The distinct codewords in `[0, 2π)`.
    pub fn codebook(&self) -> Vec<f64> {
        (0..self.levels()).map(|m| m as f64 * self.spacing()).collect()
    }
}

/// Index of the codeword nearest to `phi` (reduced to `[0, 2π)`) and the
/// signed error `phi - codeword` in `[-δ, δ)`.
fn nearest_codeword(phi: f64, quant: &QuantizationSpec) -> (u64, f64) {
    let reduced = Euclid::rem_euclid(&phi, &TAU);
    let spacing = quant.spacing();
    // floor(x + 1/2): a phase exactly between two codewords goes to the upper one
    let m = (reduced / spacing + 0.5).floor();
    let err = reduced - m * spacing;
    ((m as u64) % quant.levels(), err)
}

/// Nearest codeword to `phi`, returned in `[0, 2π)`.
pub fn quantize_phase(phi: f64, quant: &QuantizationSpec) -> f64 {
    let (m, _) = nearest_codeword(phi, quant);
    m as f64 * quant.spacing()
}

/// Circular quantization error `phi - quantize_phase(phi)`, wrapped into `[-δ, δ)`.
pub fn quantization_error(phi: f64, quant: &QuantizationSpec) -> f64 {
    nearest_codeword(phi, quant).1
}

/// `sin(x)/x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Amplitude penalty `sinc(π/2^β)` of `β`-bit phase shifters.
pub fn sinc_penalty(quant: &QuantizationSpec) -> f64 {
    sinc(quant.step())
}

/// Phase-matched analog matrix with `n_chains` rows for channel `g` (`N×K`).
///
/// Entry `(i, j)` has magnitude `1/√N` and phase `-arg g[j, i]`, snapped to
/// the nearest codeword when `quant` is given.
pub fn build_analog(g: &CMatrix, n_chains: usize, quant: Option<&QuantizationSpec>) -> Result<CMatrix> {
    let (n, k) = g.shape();
    if n_chains == 0 {
        return Err(invalid_arg!("need at least one RF chain"));
    }
    if n_chains > k {
        return Err(invalid_arg!("{n_chains} RF chains but only {k} channel columns to match"));
    }
    let amp = 1.0 / (n as f64).sqrt();
    Ok(CMatrix::from_fn(n_chains, n, |i, j| {
        let phase = -g[(j, i)].arg();
        let phase = match quant {
            Some(q) => quantize_phase(phase, q),
            None => phase,
        };
        Complex64::from_polar(amp, phase)
    }))
}

/// `α = √(P_r / (P_u‖F₂ᴴA₂A₁ᴴA₁‖² + σ²_R‖F₂ᴴA₂A₁ᴴF₁‖²))`.
pub fn compute_alpha(
    a1: &CMatrix,
    a2: &CMatrix,
    f1: &CMatrix,
    f2: &CMatrix,
    p_user: f64,
    p_relay: f64,
    var_relay_noise: f64,
) -> Result<f64> {
    let denom = alpha_denominator(a1, a2, f1, f2, p_user, var_relay_noise)?;
    Ok((p_relay / denom).sqrt())
}

fn alpha_denominator(
    a1: &CMatrix,
    a2: &CMatrix,
    f1: &CMatrix,
    f2: &CMatrix,
    p_user: f64,
    var_relay_noise: f64,
) -> Result<f64> {
    if a1.cols() != a2.cols() || a1.rows() != f1.rows() || a2.rows() != f2.rows() || f1.cols() != f2.cols() {
        return Err(invalid_arg!(
            "inconsistent shapes: A1 {:?}, A2 {:?}, F1 {:?}, F2 {:?}",
            a1.shape(),
            a2.shape(),
            f1.shape(),
            f2.shape()
        ));
    }
    // ‖F₂ᴴ·A₂·(A₁ᴴA₁)‖², an N×K product
    let gram1 = a1.adjoint_mul(a1);
    let signal = f2.adjoint_mul(&a2.mul(&gram1)).frobenius_norm_sqr();
    // ‖F₂ᴴXF₁‖² = tr(Xᴴ·F₂F₂ᴴ·X·F₁F₁ᴴ) with X = A₂A₁ᴴ
    let x = a2.mul_adjoint(a1);
    let p1 = f1.mul_adjoint(f1);
    let p2 = f2.mul_adjoint(f2);
    let noise = x.adjoint_mul(&p2.mul(&x)).mul(&p1).trace().re;
    checked_denominator(p_user * signal + var_relay_noise * noise)
}

fn checked_denominator(denom: f64) -> Result<f64> {
    if denom.is_finite() && denom >= f64::MIN_POSITIVE {
        Ok(denom)
    } else {
        Err(Error::DegenerateChannel(denom))
    }
}

/// Analog and digital matrices of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridProcessor {
    pub f1: CMatrix,
    pub f2: CMatrix,
    pub w: CMatrix,
    pub alpha: f64,
    pub a1: CMatrix,
    pub a2: CMatrix,
}

pub fn build_processor(real: &ChannelRealization, config: &SystemConfig) -> Result<HybridProcessor> {
    config.validate()?;
    check_realization(real, config)?;
    let quant = config.quantization();
    let f1 = build_analog(&real.g1, config.n_rx_chains, quant.as_ref())?;
    let f2 = build_analog(&real.g2, config.n_tx_chains, quant.as_ref())?;
    let a1 = f1.mul(&real.g1);
    let a2 = f2.mul(&real.g2);
    let alpha = compute_alpha(&a1, &a2, &f1, &f2, config.p_user, config.p_relay, config.var_relay_noise)?;
    let w = a2.mul_adjoint(&a1).scale(alpha);
    Ok(HybridProcessor { f1, f2, w, alpha, a1, a2 })
}

pub(crate) fn check_realization(real: &ChannelRealization, config: &SystemConfig) -> Result<()> {
    let expected = (config.n_antennas, config.n_pairs);
    if real.g1.shape() != expected || real.g2.shape() != expected {
        return Err(invalid_arg!(
            "realization is {:?} but config expects {:?}",
            real.g1.shape(),
            expected
        ));
    }
    Ok(())
}

/// Full-digital baseline kept in factored form: `W_full = α·G₂G₁ᴴ` is never
/// materialized.
#[derive(Debug, Clone, PartialEq)]
pub struct FullDigitalProcessor {
    pub g1: CMatrix,
    pub g2: CMatrix,
    pub alpha: f64,
}

/// Full-digital MRC/MRT: the hybrid pipeline with `F₁`, `F₂` removed, so
/// `α_full = √(P_r / (P_u‖G₂G₁ᴴG₁‖² + σ²_R‖G₂G₁ᴴ‖²))`.
pub fn build_full_digital(real: &ChannelRealization, config: &SystemConfig) -> Result<FullDigitalProcessor> {
    config.validate()?;
    check_realization(real, config)?;
    let gram1 = real.g1.adjoint_mul(&real.g1);
    let gram2 = real.g2.adjoint_mul(&real.g2);
    let signal = real.g2.mul(&gram1).frobenius_norm_sqr();
    let noise = gram2.mul(&gram1).trace().re;
    let denom = checked_denominator(config.p_user * signal + config.var_relay_noise * noise)?;
    Ok(FullDigitalProcessor {
        g1: real.g1.clone(),
        g2: real.g2.clone(),
        alpha: (config.p_relay / denom).sqrt(),
    })
}
