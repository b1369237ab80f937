//! `verify-lemmas`: analog-stage convergence checks over many seeds.
//!
//! For each phase resolution, seed and antenna count, the source-side
//! combiner of trial 0 is checked with every [`Metric`]. The summary then
//! tests, per resolution:
//!
//! - `F·Fᴴ` diagonals are exactly one (to `1e-12`) in every run;
//! - median off-diagonal `F·Fᴴ` and `F·H` deviations decay like `N^-1/2`
//!   (log-log slope within ±0.15 of -0.5);
//! - at the largest `N`, the `F·H` diagonal constant is within 2% of
//!   `sinc(π/2^β)` (1 for continuous phases) for every seed.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use hybrid_relay::diagnostics::{convergence_report, Metric, DIAGONAL_CONSTANT_TOLERANCE, DIAGONAL_EXACTNESS};
use hybrid_relay::SystemConfig;

use crate::engine::Engine;
use crate::sweep::beta_label;
use crate::table::format_g10;

pub const SLOPE_TARGET: f64 = -0.5;
pub const SLOPE_TOLERANCE: f64 = 0.15;

pub const LEMMA_HEADER: [&str; 7] = ["metric", "N", "beta", "seed", "deviation", "bound", "passed"];

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaRow {
    pub metric: Metric,
    pub n: usize,
    pub beta: Option<u32>,
    pub seed: u64,
    pub deviation: f64,
    pub bound: f64,
    pub passed: bool,
}

/// All `(β, seed, N, metric)` reports, in that nesting order.
pub fn lemma_rows(
    n_list: &[usize],
    seeds: &[u64],
    betas: &[Option<u32>],
    base: &SystemConfig,
    engine: &Engine,
) -> Result<Vec<LemmaRow>> {
    let mut jobs = Vec::new();
    for &beta in betas {
        for &seed in seeds {
            for &n in n_list {
                jobs.push((beta, seed, n));
            }
        }
    }
    let results = engine.map(&jobs, |&(beta, seed, n)| -> hybrid_relay::Result<Vec<LemmaRow>> {
        let cfg = SystemConfig { seed, quant_bits: beta, ..base.clone() };
        Metric::ALL
            .iter()
            .map(|&metric| {
                let r = convergence_report(&cfg, n, metric)?;
                Ok(LemmaRow { metric, n, beta, seed, deviation: r.deviation, bound: r.bound, passed: r.passed })
            })
            .collect()
    });
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn write_lemma_csv<W: Write>(rows: &[LemmaRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(LEMMA_HEADER)?;
    for r in rows {
        w.write_record([
            r.metric.label().to_owned(),
            r.n.to_string(),
            beta_label(r.beta),
            r.seed.to_string(),
            format_g10(r.deviation),
            format_g10(r.bound),
            r.passed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_lemma_csv(rows: &[LemmaRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_lemma_csv(rows, std::io::BufWriter::new(file)).with_context(|| format!("writing {}", path.display()))
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Median deviation per antenna count for one `(metric, β)`.
pub fn median_curve(rows: &[LemmaRow], metric: Metric, beta: Option<u32>) -> Vec<(usize, f64)> {
    let mut ns: Vec<usize> = rows.iter().filter(|r| r.metric == metric && r.beta == beta).map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter()
        .map(|n| {
            let devs = rows
                .iter()
                .filter(|r| r.metric == metric && r.beta == beta && r.n == n)
                .map(|r| r.deviation)
                .collect();
            (n, median(devs))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaCheck {
    pub name: String,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl LemmaCheck {
    pub fn passed(&self) -> bool {
        self.value >= self.lo && self.value <= self.hi
    }
}

pub fn summarize_lemmas(rows: &[LemmaRow], betas: &[Option<u32>]) -> Vec<LemmaCheck> {
    let mut checks = Vec::new();
    for &beta in betas {
        let label = beta_label(beta);
        let of = |metric: Metric| rows.iter().filter(move |r| r.metric == metric && r.beta == beta);

        let diag_max = of(Metric::OrthoDiagonal).map(|r| r.deviation).fold(0.0, f64::max);
        checks.push(LemmaCheck {
            name: format!("ortho_diagonal_exact[beta={label}]"),
            value: diag_max,
            lo: 0.0,
            hi: DIAGONAL_EXACTNESS,
        });

        for metric in [Metric::OrthoOffDiagonal, Metric::FhDeviation] {
            let curve = median_curve(rows, metric, beta);
            if curve.len() >= 2 {
                let pts: Vec<(f64, f64)> = curve.iter().map(|&(n, d)| (n as f64, d)).collect();
                checks.push(LemmaCheck {
                    name: format!("{}_slope[beta={label}]", metric.label()),
                    value: log_log_slope(&pts),
                    lo: SLOPE_TARGET - SLOPE_TOLERANCE,
                    hi: SLOPE_TARGET + SLOPE_TOLERANCE,
                });
            }
        }

        if let Some(n_max) = of(Metric::FhDiagonalConstant).map(|r| r.n).max() {
            let worst = of(Metric::FhDiagonalConstant)
                .filter(|r| r.n == n_max)
                .map(|r| r.deviation)
                .fold(0.0, f64::max);
            checks.push(LemmaCheck {
                name: format!("fh_diagonal_constant[beta={label},N={n_max}]"),
                value: worst,
                lo: 0.0,
                hi: DIAGONAL_CONSTANT_TOLERANCE,
            });
        }
    }
    checks
}
