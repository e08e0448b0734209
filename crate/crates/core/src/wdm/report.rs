use crate::dmt::BitLoadingTable;
use crate::error::Error;
use crate::sigcore::BerReport;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelReport {
    pub index: usize,
    /// PRBS seed the channel transmitted.
    pub seed: u64,
    pub ber: BerReport,
    /// DMT only: loaded bits per DMT symbol.
    pub bits_per_symbol: Option<usize>,
    /// Gross line rate, bit/s.
    pub line_rate: f64,
    pub table: Option<BitLoadingTable>,
}

/// Outcome of one link run. Channel failures (e.g. equalizer divergence) are
/// recorded per channel and do not abort the others.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkReport {
    pub channels: Vec<Result<ChannelReport, Error>>,
    /// Per-channel OSNR at the demultiplexer input, dB in 0.1 nm.
    pub osnr_db: f64,
    pub composite_rate: f64,
}

impl LinkReport {
    /// Reports of the channels that completed.
    pub fn completed(&self) -> impl Iterator<Item = &ChannelReport> {
        self.channels.iter().filter_map(|c| c.as_ref().ok())
    }

    pub fn bers(&self) -> Vec<f64> {
        self.channels
            .iter()
            .map(|c| c.as_ref().map(|r| r.ber.ber).unwrap_or(f64::NAN))
            .collect()
    }
}
