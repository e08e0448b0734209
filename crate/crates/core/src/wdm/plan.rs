use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sigcore::{C_BAND_MAX, C_BAND_MIN, SPEED_OF_LIGHT};

/// Uniform DWDM grid centered on `center_wavelength`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelPlan {
    pub channel_count: usize,
    /// Hz.
    pub grid_spacing: f64,
    /// Wavelength at the composite band center, m.
    pub center_wavelength: f64,
}

impl Default for ChannelPlan {
    fn default() -> Self {
        Self {
            channel_count: 1,
            grid_spacing: 50e9,
            center_wavelength: 1550e-9,
        }
    }
}

impl ChannelPlan {
    pub fn new(channel_count: usize, grid_spacing: f64) -> Result<Self> {
        let p = Self {
            channel_count,
            grid_spacing,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.channel_count == 0 {
            return Err(Error::param("channel_count", "must be at least 1"));
        }
        if !(self.grid_spacing > 0.0 && self.grid_spacing.is_finite()) {
            return Err(Error::param("grid_spacing", "must be positive"));
        }
        for i in [0, self.channel_count - 1] {
            let l = self.channel_wavelength(i);
            if !(C_BAND_MIN..=C_BAND_MAX).contains(&l) {
                return Err(Error::param(
                    "center_wavelength",
                    format!("channel {i} at {l:e} m falls outside the C-band"),
                ));
            }
        }
        Ok(())
    }

    /// Offset of channel `i` from the band center, Hz.
    pub fn offset(&self, i: usize) -> f64 {
        (i as f64 - (self.channel_count as f64 - 1.0) / 2.0) * self.grid_spacing
    }

    pub fn offsets(&self) -> Vec<f64> {
        (0..self.channel_count).map(|i| self.offset(i)).collect()
    }

    pub fn channel_wavelength(&self, i: usize) -> f64 {
        SPEED_OF_LIGHT / (SPEED_OF_LIGHT / self.center_wavelength + self.offset(i))
    }

    /// Optical bandwidth reserved by the plan, one grid slot per channel.
    pub fn occupied_bandwidth(&self) -> f64 {
        self.channel_count as f64 * self.grid_spacing
    }

    /// Smallest integer multiple of `channel_rate` leaving 20% guard around
    /// the occupied band.
    pub fn composite_multiple(&self, channel_rate: f64) -> usize {
        ((1.2 * self.occupied_bandwidth() / channel_rate).ceil() as usize).max(1)
    }
}
