//! Config-driven experiments: single bounds, coverage, sweeps.

pub mod bound;
pub mod config;
pub mod coverage;
pub mod records;
pub mod sweep;
pub mod validity;

pub use bound::{run_aggregate_on, run_bound, run_bound_on, Aggregate, BoundRun, NamedBound};
pub use config::{Assumptions, ComplexityConfig, ExperimentConfig, RegimeConfig, S2Method, S2Source, Setup};
pub use coverage::{run_coverage, run_coverage_setup, CoverageReport, ReplicationRecord};
pub use sweep::{loglog_slope, run_sweep, SweepAxis, SweepRow, SweepTable};
pub use validity::{moment_validity, MomentCheck};
