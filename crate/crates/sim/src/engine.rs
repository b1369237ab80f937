//! Parallel trial execution.
//!
//! Trials run on a rayon pool, but outcomes are collected in trial order and
//! reduced by [`hybrid_relay::metrics::summarize`], so a fixed seed gives
//! bit-identical results for any worker count.

use anyhow::{Context, Result};
use hybrid_relay::metrics::{run_trial, summarize, Mode, RatePoint, TrialOutcome};
use hybrid_relay::SystemConfig;
use rayon::prelude::*;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "SIM_THREADS";

pub struct Engine {
    pool: rayon::ThreadPool,
}

impl Engine {
    pub fn with_threads(threads: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("building worker pool")?;
        Ok(Self { pool })
    }

    /// Uses `SIM_THREADS` when set, otherwise one worker per core.
    pub fn from_env() -> Result<Self> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .with_context(|| format!("{THREADS_ENV} must be a positive integer, got {v:?}"))?,
            Err(_) => 0,
        };
        Self::with_threads(threads)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `f` over `items` in parallel, returning results in input order.
    pub fn map<T, U, F>(&self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        self.pool.install(|| items.par_iter().map(f).collect())
    }

    pub fn trial_outcomes(
        &self,
        config: &SystemConfig,
        n_trials: usize,
        mode: Mode,
    ) -> hybrid_relay::Result<Vec<TrialOutcome>> {
        config.validate()?;
        self.pool.install(|| {
            (0..n_trials as u64)
                .into_par_iter()
                .map(|t| run_trial(config, t, mode))
                .collect()
        })
    }

    /// Parallel counterpart of [`hybrid_relay::metrics::monte_carlo_rate`].
    pub fn monte_carlo_rate(&self, config: &SystemConfig, n_trials: usize, mode: Mode) -> hybrid_relay::Result<RatePoint> {
        if n_trials < 2 {
            return Err(hybrid_relay::Error::InvalidArgument(format!(
                "need at least two trials, got {n_trials}"
            )));
        }
        let outcomes = self.trial_outcomes(config, n_trials, mode)?;
        summarize(&outcomes)
    }
}
