//! Batch front end for the `hybrid-relay` model: a parallel Monte-Carlo
//! engine with a deterministic reduction, parameter sweeps over antenna
//! count, phase resolution and power-scaling case, lemma verification runs,
//! and CSV / gnuplot output.

pub mod engine;
pub mod lemmas;
pub mod settings;
pub mod sweep;
pub mod table;
pub mod units;

pub use engine::Engine;
pub use settings::UsageError;
pub use sweep::{run_sweep, PowerCase, SweepMode, SweepSpec};
pub use table::{ResultTable, Row};
