//! Experiment files, sweeps, CSV output and knob searches.

mod config;
mod optimize;
mod sweep;

pub use config::{parse_config, parse_config_str, ExperimentConfig, Sweep, SweepAxis};
pub use optimize::{optimize_knob, Knob, KnobValue, Optimum};
pub use sweep::{link_rows, median_ber, run_experiment, summary_table, write_csv, write_csv_file, SweepRow};

use crate::dmt::BitLoadingTable;
use crate::error::{Error, Result};
use crate::wdm::{load_tables, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ALL_FAILED: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

/// Process exit status for an error reaching the top level.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Validation { .. } | Error::InvalidParameter { .. } | Error::InvalidAdjustment(_) => EXIT_VALIDATION,
        _ => EXIT_ALL_FAILED,
    }
}

/// Exit status for a finished experiment: failure only when no row computed.
pub fn rows_exit_code(rows: &[SweepRow]) -> i32 {
    if rows.iter().any(SweepRow::is_ok) {
        EXIT_OK
    } else {
        EXIT_ALL_FAILED
    }
}

/// Probe the configured DMT link and load every channel.
pub fn loading_tables(cfg: &ExperimentConfig) -> Result<Vec<Result<BitLoadingTable>>> {
    cfg.validate()?;
    if cfg.link.format != Format::Dmt {
        return Err(Error::validation("format", "loadtable needs format = \"dmt\""));
    }
    load_tables(&cfg.link)
}
