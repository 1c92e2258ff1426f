//! Experiment orchestration: condition sweeps, incremental-context runs,
//! run artifacts and reports.

pub mod config;
pub mod incremental;
pub mod report;
pub mod sweep;
pub mod tables;

use anyhow::Result;

pub use config::{Providers, ProviderSpec, RunConfig};
pub use incremental::{run_incremental, run_incremental_all};
pub use report::{emit_report, summarize, Summary};
pub use sweep::{run_condition_sweep, run_condition_sweep_with, SweepOptions, SweepOutcome};
pub use tables::{IncrementalPoint, ScoreRow};

/// Sweep, then the incremental experiment when configured, then the
/// report. The report is skipped if the sweep was stopped early.
pub fn run_all(cfg: &RunConfig, providers: &Providers, opts: SweepOptions) -> Result<SweepOutcome> {
    let outcome = run_condition_sweep_with(cfg, providers, opts)?;
    if outcome.complete {
        if cfg.incremental {
            run_incremental_all(cfg, providers, opts.execution)?;
        }
        emit_report(&cfg.output_dir)?;
    }
    Ok(outcome)
}
