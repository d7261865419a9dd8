//! Configuration ingestion, pump-power sweeps, figure recipes and CSV
//! serialization.

pub mod config;
pub mod figures;
pub mod output;
pub mod sweep;

pub use config::{
    load_config, parse_config, FeatureConfig, GridConfig, OutputConfig, PowerSweep, RunConfig, SweepScale,
};
pub use figures::{figure, figure_with, hom_curve, sfg_curve, FigureOutput, PROFILE_POWER};
pub use output::{config_hash, format_float, write_tables, Cell, Provenance, Table};
pub use sweep::{run_sweep, run_sweep_with, CellFailure, Stages, SweepContext, SweepResult, SweepRow};
