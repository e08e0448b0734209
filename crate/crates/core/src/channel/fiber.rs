//! Linear fiber propagation and tunable dispersion compensation.
//!
//! Both act on the complex envelope through the all-pass response
//! `H(f) = exp(+j·π·λ²·D·L·f²/c)` under the forward DFT convention of
//! [`crate::sigcore::spectrum`]. The resulting group delay is
//! `τ(f) = -λ²·D·L·f/c`: with positive `D` the upper half of the spectrum
//! arrives early, as in standard single-mode fiber.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sigcore::{apply_frequency_response, OpticalField, SPEED_OF_LIGHT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FiberSpec {
    pub length_km: f64,
    /// ps/(nm·km)
    pub dispersion: f64,
    /// dB/km
    pub attenuation: f64,
    /// m
    pub reference_wavelength: f64,
}

impl Default for FiberSpec {
    /// Standard single-mode fiber at 1550 nm, zero length.
    fn default() -> Self {
        Self {
            length_km: 0.0,
            dispersion: 17.0,
            attenuation: 0.2,
            reference_wavelength: 1550e-9,
        }
    }
}

impl FiberSpec {
    pub fn ssmf(length_km: f64) -> Self {
        Self {
            length_km,
            ..Self::default()
        }
    }

    /// Accumulated dispersion in ps/nm.
    pub fn accumulated_dispersion(&self) -> f64 {
        self.dispersion * self.length_km
    }

    pub fn loss_db(&self) -> f64 {
        self.attenuation * self.length_km
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length_km >= 0.0) {
            return Err(Error::param("length", "must be >= 0"));
        }
        if !(self.attenuation >= 0.0) {
            return Err(Error::param("attenuation", "must be >= 0"));
        }
        Ok(())
    }
}

/// Quadratic spectral phase coefficient `π·λ²·D·L/c` (rad/Hz²) for an
/// accumulated dispersion in ps/nm.
pub fn dispersion_phase_coefficient(wavelength: f64, dispersion_ps_nm: f64) -> f64 {
    // 1 ps/nm = 1e-3 s/m
    PI * wavelength * wavelength * dispersion_ps_nm * 1e-3 / SPEED_OF_LIGHT
}

/// Apply an accumulated dispersion (ps/nm) and a power loss (dB).
pub fn apply_dispersion(
    field: &OpticalField,
    dispersion_ps_nm: f64,
    loss_db: f64,
) -> Result<OpticalField> {
    let k = dispersion_phase_coefficient(field.center_wavelength(), dispersion_ps_nm);
    let amp = 10f64.powf(-loss_db / 20.0);
    if field.len() < 2 {
        return field.with_samples(field.samples().iter().map(|s| s * amp).collect());
    }
    apply_frequency_response(field, |f| Complex64::from_polar(amp, k * f * f))
}

pub fn chromatic_dispersion(field: &OpticalField, fiber: &FiberSpec) -> Result<OpticalField> {
    fiber.validate()?;
    apply_dispersion(field, fiber.accumulated_dispersion(), fiber.loss_db())
}

/// Lossless module with dispersion `-compensation` ps/nm.
pub fn tdcm(field: &OpticalField, compensation_ps_nm: f64) -> Result<OpticalField> {
    apply_dispersion(field, -compensation_ps_nm, 0.0)
}

/// Small-signal power-fading null frequencies `sqrt((2k+1)·c/(2·λ²·D·L))`.
pub fn fading_null_frequency(wavelength: f64, dispersion_ps_nm: f64, k: u32) -> f64 {
    let dl = dispersion_ps_nm.abs() * 1e-3;
    ((2 * k + 1) as f64 * SPEED_OF_LIGHT / (2.0 * wavelength * wavelength * dl)).sqrt()
}
