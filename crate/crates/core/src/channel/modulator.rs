use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sigcore::{OpticalField, Waveform};

/// Chirp-free intensity modulator.
///
/// Power is affine in the drive: `-1 → P_min`, `+1 → P_max`, with
/// `P_max / P_min` equal to the extinction ratio and the midpoint at
/// `laser_power`. An infinite extinction ratio puts `P_min` at zero.
pub fn intensity_modulate(
    drive: &Waveform,
    laser_power: f64,
    extinction_ratio_db: f64,
    wavelength: f64,
) -> Result<OpticalField> {
    if !(laser_power > 0.0 && laser_power.is_finite()) {
        return Err(Error::param("laser_power", "must be positive"));
    }
    if !(extinction_ratio_db > 0.0) {
        return Err(Error::param("extinction_ratio", "must be positive in dB"));
    }
    if let Some((index, &value)) = drive
        .samples()
        .iter()
        .enumerate()
        .find(|(_, d)| d.abs() > 1.0)
    {
        return Err(Error::Range { index, value });
    }
    let depth = modulation_depth(extinction_ratio_db);
    let field = drive
        .samples()
        .iter()
        .map(|&d| Complex64::new((laser_power * (1.0 + depth * d)).max(0.0).sqrt(), 0.0))
        .collect();
    OpticalField::new(field, drive.sample_rate(), wavelength)
}

/// `(ER - 1) / (ER + 1)` with the ratio in linear units.
pub fn modulation_depth(extinction_ratio_db: f64) -> f64 {
    if extinction_ratio_db.is_infinite() {
        return 1.0;
    }
    let er = 10f64.powf(extinction_ratio_db / 10.0);
    (er - 1.0) / (er + 1.0)
}
