//! Configuration parsing and command execution for the `cstar-fixed` binary.

mod config;
mod run;

pub use config::{
    parse_config, parse_config_for, CoeffSpec, Command, ConfigError, ContractionSpec, Job,
    KindName, MapSpec, MetricSpec, PointSpec, RunConfig, SolverSettings, DEFAULT_EPS_ABS,
    DEFAULT_MAX_ITERS, DEFAULT_SEED, MAX_GRID_NODES,
};
pub use run::{
    run, run_to_dir, trace_to_csv, ExitStatus, RunError, RunOutcome, SUMMARY_FILE, TRACE_FILE,
    TRACE_HEADER,
};
