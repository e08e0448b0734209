use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sigcore::{apply_frequency_response, OpticalField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterShape {
    Gaussian,
    SuperGaussian(u32),
}

impl FilterShape {
    pub fn order(self) -> u32 {
        match self {
            FilterShape::Gaussian => 1,
            FilterShape::SuperGaussian(n) => n,
        }
    }
}

/// Zero-phase (super-)Gaussian optical band-pass. A nonzero
/// `center_offset` gives asymmetric (vestigial sideband) filtering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticalFilterSpec {
    pub shape: FilterShape,
    /// Hz; `inf` disables the filter.
    pub bandwidth_3db: f64,
    /// Hz relative to the channel center.
    pub center_offset: f64,
}

impl OpticalFilterSpec {
    pub fn super_gaussian(order: u32, bandwidth_3db: f64, center_offset: f64) -> Self {
        Self {
            shape: FilterShape::SuperGaussian(order),
            bandwidth_3db,
            center_offset,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shape.order() < 1 {
            return Err(Error::param("order", "must be >= 1"));
        }
        if !(self.bandwidth_3db > 0.0) {
            return Err(Error::param("bandwidth_3db", "must be positive"));
        }
        Ok(())
    }

    /// Amplitude response at offset `f` from the channel center.
    pub fn amplitude(&self, f: f64) -> f64 {
        if self.bandwidth_3db.is_infinite() {
            return 1.0;
        }
        let x = 2.0 * (f - self.center_offset) / self.bandwidth_3db;
        let n = self.shape.order() as i32;
        (-std::f64::consts::LN_2 / 2.0 * x.powi(2 * n)).exp()
    }
}

pub fn optical_filter(field: &OpticalField, spec: &OpticalFilterSpec) -> Result<OpticalField> {
    spec.validate()?;
    if spec.bandwidth_3db.is_infinite() {
        return Ok(field.clone());
    }
    if spec.bandwidth_3db >= field.sample_rate() {
        return Err(Error::param(
            "bandwidth_3db",
            format!(
                "{:e} Hz is not below the sample rate {:e} Hz",
                spec.bandwidth_3db,
                field.sample_rate()
            ),
        ));
    }
    apply_frequency_response(field, |f| Complex64::new(spec.amplitude(f), 0.0))
}
