//! DAC and ADC models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sigcore::{apply_frequency_response, gaussian_lowpass, Waveform};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontEndSpec {
    pub resolution_bits: u32,
    /// 3-dB bandwidth of the Gaussian analog response; `inf` disables it.
    pub analog_bandwidth_3db: f64,
    pub full_scale: f64,
    pub samples_per_symbol: usize,
}

impl FrontEndSpec {
    pub fn validate(&self) -> Result<()> {
        if !(1..=16).contains(&self.resolution_bits) {
            return Err(Error::param("resolution_bits", "must lie in [1, 16]"));
        }
        if self.samples_per_symbol < 2 {
            return Err(Error::param("samples_per_symbol", "must be at least 2"));
        }
        if !(self.full_scale > 0.0 && self.full_scale.is_finite()) {
            return Err(Error::param("full_scale", "must be positive"));
        }
        if !(self.analog_bandwidth_3db > 0.0) {
            return Err(Error::param("analog_bandwidth_3db", "must be positive"));
        }
        Ok(())
    }
}

/// Uniform mid-rise quantizer with `2^bits` levels spanning
/// `[-full_scale, +full_scale]`; inputs outside the range clip to the
/// outermost level.
pub fn quantize(x: f64, bits: u32, full_scale: f64) -> f64 {
    let levels = (1u64 << bits) as f64;
    let step = 2.0 * full_scale / levels;
    let idx = (x / step).floor();
    let max_idx = levels / 2.0 - 1.0;
    step * (idx.clamp(-max_idx - 1.0, max_idx) + 0.5)
}

/// Zero-order hold to `samples_per_symbol`, quantize, then the analog filter.
pub fn dac(symbols: &[f64], spec: &FrontEndSpec, symbol_rate: f64) -> Result<Waveform> {
    spec.validate()?;
    if let Some(i) = symbols.iter().position(|s| !s.is_finite()) {
        return Err(Error::param("symbols", format!("non-finite symbol at {i}")));
    }
    let sps = spec.samples_per_symbol;
    let held: Vec<f64> = symbols
        .iter()
        .flat_map(|&s| std::iter::repeat_n(quantize(s, spec.resolution_bits, spec.full_scale), sps))
        .collect();
    let w = Waveform::new(held, symbol_rate * sps as f64)?;
    if spec.analog_bandwidth_3db.is_finite() && w.len() >= 2 {
        apply_frequency_response(&w, gaussian_lowpass(spec.analog_bandwidth_3db))
    } else {
        Ok(w)
    }
}

/// Analog filter, quantize, and pick one sample per symbol starting at
/// `phase_offset`.
pub fn adc(
    waveform: &Waveform,
    spec: &FrontEndSpec,
    symbol_rate: f64,
    phase_offset: usize,
) -> Result<Vec<f64>> {
    spec.validate()?;
    let ratio = waveform.sample_rate() / symbol_rate;
    let sps = ratio.round();
    if sps < 1.0 || (ratio - sps).abs() > 1e-9 * ratio {
        return Err(Error::Rate {
            sample_rate: waveform.sample_rate(),
            symbol_rate,
        });
    }
    let sps = sps as usize;
    let filtered = if spec.analog_bandwidth_3db.is_finite() && waveform.len() >= 2 {
        apply_frequency_response(waveform, gaussian_lowpass(spec.analog_bandwidth_3db))?
    } else {
        waveform.clone()
    };
    Ok(filtered
        .samples()
        .iter()
        .skip(phase_offset % sps)
        .step_by(sps)
        .map(|&x| quantize(x, spec.resolution_bits, spec.full_scale))
        .collect())
}

/// Remove the mean and scale to `target_rms` (AC coupling plus gain control
/// ahead of the ADC).
pub fn agc(waveform: &Waveform, target_rms: f64) -> Result<Waveform> {
    let mean = waveform.mean();
    let centered: Vec<f64> = waveform.samples().iter().map(|x| x - mean).collect();
    let rms = (centered.iter().map(|x| x * x).sum::<f64>() / centered.len() as f64).sqrt();
    let g = if rms > 0.0 { target_rms / rms } else { 1.0 };
    waveform.with_samples(centered.into_iter().map(|x| x * g).collect())
}
