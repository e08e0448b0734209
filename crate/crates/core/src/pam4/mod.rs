//! PAM4 transmit and receive DSP.

mod equalizer;
mod mapping;
mod preeq;
pub mod theory;

use serde::{Deserialize, Serialize};

pub use equalizer::{decide, ffe_dfe_equalize, Equalized, Pam4RxConfig};
pub use mapping::{
    level_adjust, pam4_demap, pam4_map, slice_index, NOMINAL_LEVELS, NOMINAL_THRESHOLDS,
};
pub use preeq::{pre_eq_magnitude, pre_equalize};

use crate::error::{Error, Result};

/// Line rate of the PAM4 PHY, symbols/s.
pub const PAM4_BAUD: f64 = 25.78125e9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Pam4TxConfig {
    pub baud: f64,
    pub pre_eq_taps: [f64; 3],
    pub levels: [f64; 4],
}

impl Default for Pam4TxConfig {
    fn default() -> Self {
        Self {
            baud: PAM4_BAUD,
            pre_eq_taps: [-0.1, 1.0, -0.1],
            levels: NOMINAL_LEVELS,
        }
    }
}

impl Pam4TxConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.baud > 0.0) {
            return Err(Error::param("baud", "must be positive"));
        }
        if self.levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("levels", "must be strictly increasing"));
        }
        let [t0, t1, t2] = self.pre_eq_taps;
        if t1.abs() < t0.abs() || t1.abs() < t2.abs() {
            return Err(Error::param("pre_eq_taps", "the center tap must dominate"));
        }
        Ok(())
    }
}
