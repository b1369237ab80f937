//! Multipair amplify-and-forward massive-MIMO relay with hybrid analog/digital
//! MRC/MRT processing.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerics:
//!
//! - [`channel`]: Rayleigh small-scale fading, log-normal shadowing and path
//!   loss over an annular cell, and per-trial deterministic realizations.
//! - [`hybrid`]: phase-only analog combiner/precoder (continuous or quantized),
//!   the digital MRC/MRT matrix and its power normalization, plus the
//!   full-digital baseline.
//! - [`metrics`]: exact per-pair SINR, per-realization rate and a sequential
//!   Monte-Carlo estimator with a deterministic reduction order.
//! - [`asymptotics`]: closed-form large-antenna SINR and rate laws for the
//!   three power-scaling cases, with the phase-quantization penalty.
//! - [`diagnostics`]: numerical checks of the large-N convergence lemmas.
//!
//! IO, parallel execution and the command-line front end live in the
//! `hybrid-relay-sim` crate.
#![no_std]

extern crate alloc;

pub mod asymptotics;
pub mod channel;
pub mod config;
pub mod diagnostics;
mod error;
pub mod hybrid;
pub mod linalg;
pub mod metrics;

pub use config::{DropPolicy, SystemConfig};
pub use error::{Error, Result};
pub use linalg::CMatrix;

pub use num_complex::Complex64;
