//! Numerical checks of the large-N behaviour of the analog stage.
//!
//! - Rows of a phase-matched `F` have exactly unit norm, and distinct rows
//!   decorrelate like `1/√N`, so `F·Fᴴ → I`. Since the covariance of `F·n`
//!   for white `n` is exactly `σ²·F·Fᴴ`, the same check bounds how far the
//!   analog combiner is from preserving white noise.
//! - `F·H/√(Nπ/4) → c·I_{rows,K,r}` with `c = 1` for continuous phases and
//!   `c = sinc(π/2^β)` for `β`-bit phase shifters (the Rayleigh amplitude
//!   mean is `√π/2`).
//!
//! Bounds are CLT-scaled: `5/√N` for fluctuating entries, `1e-12` for exact
//! identities and 2% for the fitted diagonal constant.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

#[allow(unused_imports)] // libm-backed float methods when std is not linked
use num_traits::Float;

use crate::channel::sample_realization;
use crate::config::SystemConfig;
use crate::error::{invalid_arg, Result};
use crate::hybrid::{build_analog, sinc_penalty, QuantizationSpec};
use crate::linalg::CMatrix;

/// Tolerance on the exactly-unit diagonal of `F·Fᴴ`.
pub const DIAGONAL_EXACTNESS: f64 = 1e-12;
/// Relative tolerance on the fitted `F·H` diagonal constant.
pub const DIAGONAL_CONSTANT_TOLERANCE: f64 = 0.02;

/// CLT-scale bound `5/√N`.
pub fn clt_bound(n: usize) -> f64 {
    5.0 / (n as f64).sqrt()
}

/// Which convergence statistic a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    /// `max |diag(F·Fᴴ) − 1|`.
    OrthoDiagonal,
    /// `max |offdiag(F·Fᴴ)|`.
    OrthoOffDiagonal,
    /// `max |F·H/√(Nπ/4) − c·I|`.
    FhDeviation,
    /// `|mean Re diag(F·H/√(Nπ/4)) − c| / c`.
    FhDiagonalConstant,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::OrthoDiagonal,
        Metric::OrthoOffDiagonal,
        Metric::FhDeviation,
        Metric::FhDiagonalConstant,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Metric::OrthoDiagonal => "ortho_diagonal",
            Metric::OrthoOffDiagonal => "ortho_offdiagonal",
            Metric::FhDeviation => "fh_deviation",
            Metric::FhDiagonalConstant => "fh_diagonal_constant",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.label() == label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub n_antennas: usize,
    pub metric: Metric,
    pub deviation: f64,
    pub bound: f64,
    pub passed: bool,
}

impl ConvergenceReport {
    pub fn new(n_antennas: usize, metric: Metric, deviation: f64, bound: f64) -> Self {
        Self { n_antennas, metric, deviation, bound, passed: deviation <= bound }
    }

    pub fn metric_name(&self) -> &'static str {
        self.metric.label()
    }
}

/// Diagonal and off-diagonal parts of the `F·Fᴴ ≈ I` check.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalityCheck {
    pub diagonal: ConvergenceReport,
    pub off_diagonal: ConvergenceReport,
}

impl OrthonormalityCheck {
    pub fn passed(&self) -> bool {
        self.diagonal.passed && self.off_diagonal.passed
    }

    /// Largest entrywise deviation of `F·Fᴴ` from the identity.
    pub fn deviation(&self) -> f64 {
        self.diagonal.deviation.max(self.off_diagonal.deviation)
    }
}

pub fn check_orthonormality(f: &CMatrix, n: usize) -> OrthonormalityCheck {
    let gram = f.mul_adjoint(f);
    let mut diag = 0.0f64;
    let mut off = 0.0f64;
    for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            if i == j {
                diag = diag.max((gram[(i, j)] - Complex64::new(1.0, 0.0)).norm());
            } else {
                off = off.max(gram[(i, j)].norm());
            }
        }
    }
    OrthonormalityCheck {
        diagonal: ConvergenceReport::new(n, Metric::OrthoDiagonal, diag, DIAGONAL_EXACTNESS),
        off_diagonal: ConvergenceReport::new(n, Metric::OrthoOffDiagonal, off, clt_bound(n)),
    }
}

/// `F·H/√(Nπ/4)`.
pub fn normalized_fh(f: &CMatrix, h: &CMatrix) -> Result<CMatrix> {
    if f.cols() != h.rows() {
        return Err(invalid_arg!("F is {:?} but H is {:?}", f.shape(), h.shape()));
    }
    let n = h.rows() as f64;
    Ok(f.mul(h).scale(1.0 / (n * PI / 4.0).sqrt()))
}

/// Expected diagonal constant: 1, or `sinc(δ)` when quantized.
pub fn fh_target(quant: Option<&QuantizationSpec>) -> f64 {
    quant.map_or(1.0, sinc_penalty)
}

/// Max entrywise distance of `F·H/√(Nπ/4)` from `c·I_{rows,K,r}`.
pub fn check_fh_convergence(
    f: &CMatrix,
    h: &CMatrix,
    n: usize,
    quant: Option<&QuantizationSpec>,
) -> Result<ConvergenceReport> {
    let m = normalized_fh(f, h)?;
    let c = fh_target(quant);
    let mut dev = 0.0f64;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let target = if i == j { c } else { 0.0 };
            dev = dev.max((m[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    Ok(ConvergenceReport::new(n, Metric::FhDeviation, dev, clt_bound(n)))
}

/// Mean real diagonal of `F·H/√(Nπ/4)`: the fitted convergence constant.
pub fn fh_diagonal_mean(f: &CMatrix, h: &CMatrix) -> Result<f64> {
    let m = normalized_fh(f, h)?;
    let r = m.rows().min(m.cols());
    Ok((0..r).map(|i| m[(i, i)].re).sum::<f64>() / r as f64)
}

pub fn check_fh_diagonal_constant(
    f: &CMatrix,
    h: &CMatrix,
    n: usize,
    quant: Option<&QuantizationSpec>,
) -> Result<ConvergenceReport> {
    let c = fh_target(quant);
    let mean = fh_diagonal_mean(f, h)?;
    Ok(ConvergenceReport::new(
        n,
        Metric::FhDiagonalConstant,
        (mean - c).abs() / c,
        DIAGONAL_CONSTANT_TOLERANCE,
    ))
}

/// Evaluates `metric` on the source-side combiner `F₁` of trial 0 of
/// `config` at antenna count `n`.
pub fn convergence_report(config: &SystemConfig, n: usize, metric: Metric) -> Result<ConvergenceReport> {
    let cfg = SystemConfig { n_antennas: n, ..config.clone() };
    let real = sample_realization(&cfg, 0)?;
    let quant = cfg.quantization();
    let f = build_analog(&real.g1, cfg.n_rx_chains, quant.as_ref())?;
    match metric {
        Metric::OrthoDiagonal => Ok(check_orthonormality(&f, n).diagonal),
        Metric::OrthoOffDiagonal => Ok(check_orthonormality(&f, n).off_diagonal),
        Metric::FhDeviation => check_fh_convergence(&f, &real.h1, n, quant.as_ref()),
        Metric::FhDiagonalConstant => check_fh_diagonal_constant(&f, &real.h1, n, quant.as_ref()),
    }
}

/// One report per antenna count, all from the same seed.
pub fn convergence_sweep(n_list: &[usize], config: &SystemConfig, metric: Metric) -> Result<Vec<ConvergenceReport>> {
    if n_list.is_empty() {
        return Err(invalid_arg!("antenna list is empty"));
    }
    if n_list.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid_arg!("antenna list must be ascending"));
    }
    n_list.iter().map(|&n| convergence_report(config, n, metric)).collect()
}
