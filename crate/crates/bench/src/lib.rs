//! Benchmark tables, limiting-example replays and file formats built on
//! `cutter_core`.

// `!(a > b)` deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod names;
pub mod report;
pub mod scenarios;
pub mod tables;

pub use config::Config;
pub use error::{BenchError, Result};
pub use names::{parse_constraint, parse_schedule, parse_vector, Objective};
pub use report::{emit_csv, format_g6, parse_stats, read_csv, write_stats, write_trace};
pub use scenarios::{run_limiting_example, Scenario, ScenarioReport};
pub use tables::{
    run_row, run_table, trial_count, AlgorithmRow, RateKind, RowFailed, RowOutcome,
    StartDistribution, StatsRow, TableSpec,
};
