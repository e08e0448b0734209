//! Sampled electrical and optical signal containers.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Lower edge of the C-band, m.
pub const C_BAND_MIN: f64 = 1.52e-6;
/// Upper edge of the C-band, m.
pub const C_BAND_MAX: f64 = 1.58e-6;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Real-valued electrical signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return Err(Error::param("sample_rate", "must be positive and finite"));
        }
        if samples.is_empty() {
            return Err(Error::param("samples", "must contain at least one sample"));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::param("samples", format!("non-finite sample at {i}")));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn rms(&self) -> f64 {
        (self.samples.iter().map(|s| s * s).sum::<f64>() / self.samples.len() as f64).sqrt()
    }

    /// Same samples with a new rate, keeping every invariant.
    pub(crate) fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        Waveform::new(samples, self.sample_rate)
    }
}

/// Complex envelope of an optical carrier; `|sample|²` is instantaneous power in W.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalField {
    samples: Vec<Complex64>,
    sample_rate: f64,
    center_wavelength: f64,
}

impl OpticalField {
    pub fn new(samples: Vec<Complex64>, sample_rate: f64, center_wavelength: f64) -> Result<Self> {
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return Err(Error::param("sample_rate", "must be positive and finite"));
        }
        if !(C_BAND_MIN..=C_BAND_MAX).contains(&center_wavelength) {
            return Err(Error::param(
                "center_wavelength",
                format!("{center_wavelength:e} m lies outside the C-band"),
            ));
        }
        if samples.is_empty() {
            return Err(Error::param("samples", "must contain at least one sample"));
        }
        if let Some(i) = samples.iter().position(|s| !(s.re.is_finite() && s.im.is_finite())) {
            return Err(Error::param("samples", format!("non-finite sample at {i}")));
        }
        Ok(Self {
            samples,
            sample_rate,
            center_wavelength,
        })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn center_wavelength(&self) -> f64 {
        self.center_wavelength
    }

    /// Optical carrier frequency in Hz.
    pub fn carrier_frequency(&self) -> f64 {
        SPEED_OF_LIGHT / self.center_wavelength
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mean_power(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }

    pub(crate) fn with_samples(&self, samples: Vec<Complex64>) -> Result<Self> {
        OpticalField::new(samples, self.sample_rate, self.center_wavelength)
    }
}

/// Common view over real and complex sampled signals so spectral operations
/// can be shared.
pub trait Sampled: Sized {
    fn sample_rate(&self) -> f64;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn to_complex(&self) -> Vec<Complex64>;
    /// Rebuild from complex samples; real signals keep the real part.
    fn rebuild_from_complex(&self, samples: Vec<Complex64>) -> Result<Self>;
}

impl Sampled for Waveform {
    fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    fn len(&self) -> usize {
        self.samples.len()
    }

    fn to_complex(&self) -> Vec<Complex64> {
        self.samples.iter().map(|&s| Complex64::new(s, 0.0)).collect()
    }

    fn rebuild_from_complex(&self, samples: Vec<Complex64>) -> Result<Self> {
        self.with_samples(samples.into_iter().map(|s| s.re).collect())
    }
}

impl Sampled for OpticalField {
    fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    fn len(&self) -> usize {
        self.samples.len()
    }

    fn to_complex(&self) -> Vec<Complex64> {
        self.samples.clone()
    }

    fn rebuild_from_complex(&self, samples: Vec<Complex64>) -> Result<Self> {
        self.with_samples(samples)
    }
}

/// Bits restricted to {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitSequence {
    bits: Vec<u8>,
}

impl BitSequence {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(i) = bits.iter().position(|&b| b > 1) {
            return Err(Error::param("bits", format!("value {} at {i} is not a bit", bits[i])));
        }
        Ok(Self { bits })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub(crate) fn from_trusted(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self { bits }
    }
}

impl FromIterator<bool> for BitSequence {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().map(u8::from).collect(),
        }
    }
}
