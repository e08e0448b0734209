use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::modem::DmtConfig;
use super::qam::{Constellation, MAX_QAM_BITS};
use crate::error::{Error, Result};

/// Per-subcarrier bits and power scale for the active band starting at
/// `first_subcarrier`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitLoadingTable {
    pub first_subcarrier: usize,
    pub bits: Vec<u8>,
    pub power: Vec<f64>,
}

impl BitLoadingTable {
    pub fn new(first_subcarrier: usize, bits: Vec<u8>, power: Vec<f64>) -> Result<Self> {
        let t = Self {
            first_subcarrier,
            bits,
            power,
        };
        t.validate()?;
        Ok(t)
    }

    /// Same order and unit power on every active carrier.
    pub fn uniform(config: &DmtConfig, bits: u8) -> Self {
        let n = config.active_count();
        Self {
            first_subcarrier: config.first_subcarrier,
            bits: vec![bits; n],
            power: vec![if bits > 0 { 1.0 } else { 0.0 }; n],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits.len() != self.power.len() {
            return Err(Error::param("power", "length differs from bits"));
        }
        for (&b, &p) in self.bits.iter().zip(&self.power) {
            if b > MAX_QAM_BITS {
                return Err(Error::UnsupportedOrder(b as u32));
            }
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::param("power", "must be finite and non-negative"));
            }
            if b == 0 && p != 0.0 {
                return Err(Error::param("power", "unloaded carriers must carry zero power"));
            }
        }
        Ok(())
    }

    pub(crate) fn check_against(&self, config: &DmtConfig) -> Result<()> {
        self.validate()?;
        if self.first_subcarrier != config.first_subcarrier || self.bits.len() != config.active_count() {
            return Err(Error::Framing(format!(
                "table covers {} carriers from {}, config has {} from {}",
                self.bits.len(),
                self.first_subcarrier,
                config.active_count(),
                config.first_subcarrier
            )));
        }
        Ok(())
    }

    /// Bits per DMT symbol.
    pub fn total_bits(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    pub fn loaded_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b > 0).count()
    }

    /// Net line rate in bit/s for the given config.
    pub fn line_rate(&self, config: &DmtConfig) -> f64 {
        self.total_bits() as f64 * config.symbol_rate()
    }

    pub(crate) fn constellations(&self) -> Result<Vec<Option<Constellation>>> {
        self.bits
            .iter()
            .map(|&b| if b == 0 { Ok(None) } else { Constellation::new(b).map(Some) })
            .collect()
    }

    /// Whitespace-separated `subcarrier bits power` rows under a comment header.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# subcarrier bits power\n");
        for (i, (&b, &p)) in self.bits.iter().zip(&self.power).enumerate() {
            let _ = writeln!(s, "{} {} {:.17e}", self.first_subcarrier + i, b, p);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut first = None;
        let mut bits = Vec::new();
        let mut power = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::Framing(format!("line {}: {what}", lineno + 1));
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 3 {
                return Err(bad("expected three columns"));
            }
            let k: usize = cols[0].parse().map_err(|_| bad("bad subcarrier index"))?;
            let expected = *first.get_or_insert(k) + bits.len();
            if k != expected {
                return Err(bad("subcarrier indices must be consecutive"));
            }
            bits.push(cols[1].parse().map_err(|_| bad("bad bit count"))?);
            power.push(cols[2].parse().map_err(|_| bad("bad power"))?);
        }
        let first = first.ok_or_else(|| Error::Framing("empty loading table".into()))?;
        Self::new(first, bits, power)
    }
}
