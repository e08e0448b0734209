//! DWDM assembly: channel plan, spectral multiplexing, and the end-to-end
//! link runner for both formats.

mod config;
mod dmt_link;
mod mux;
mod pam4_link;
mod path;
mod plan;
mod report;

pub use config::{
    AmplifierPlacement, DmtSettings, FilterPlacement, Format, FrontEnds, LaserConfig, LinkConfig, Pam4Settings,
    PlacedAmplifier, PlacedFilter, ReceiverConfig, ShapeKind,
};
pub use dmt_link::{load_tables, probe_snr};
pub use mux::{demultiplex, demultiplex_all, multiplex};
pub use plan::ChannelPlan;
pub use report::{ChannelReport, LinkReport};

use crate::error::Result;

/// Run one link end to end. Deterministic for a fixed config (seeds
/// included) regardless of the thread count.
pub fn run_link(config: &LinkConfig) -> Result<LinkReport> {
    config.validate()?;
    match config.format {
        Format::Pam4 => pam4_link::run(config),
        Format::Dmt => dmt_link::run(config),
    }
}
