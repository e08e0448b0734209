//! Flat-gain EDFA with single-polarization ASE.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sigcore::{add_complex_noise, OpticalField, PLANCK, SPEED_OF_LIGHT};

/// OSNR reference bandwidth (0.1 nm at 1550 nm).
pub const OSNR_REFERENCE_BANDWIDTH: f64 = 12.5e9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplifierSpec {
    pub gain_db: f64,
    pub noise_figure_db: f64,
}

impl AmplifierSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.gain_db >= 0.0) {
            return Err(Error::param("gain", "must be >= 0 dB"));
        }
        if !(self.noise_figure_db >= 3.0) {
            return Err(Error::param("noise_figure", "must be >= 3 dB"));
        }
        Ok(())
    }

    pub fn gain_linear(&self) -> f64 {
        10f64.powf(self.gain_db / 10.0)
    }

    /// Output ASE power spectral density in the simulated polarization, W/Hz.
    pub fn ase_psd(&self, wavelength: f64) -> f64 {
        let nu = SPEED_OF_LIGHT / wavelength;
        let nf = 10f64.powf(self.noise_figure_db / 10.0);
        (self.gain_linear() - 1.0) * PLANCK * nu * nf / 2.0
    }
}

/// Amplify by the linear gain and add complex ASE with per-quadrature
/// variance `S_ASE · fs / 2`.
pub fn edfa(field: &OpticalField, spec: &AmplifierSpec, seed: u64) -> Result<OpticalField> {
    spec.validate()?;
    let g = spec.gain_linear().sqrt();
    let mut out: Vec<_> = field.samples().iter().map(|s| s * g).collect();
    let psd = spec.ase_psd(field.center_wavelength());
    if psd > 0.0 {
        add_complex_noise(&mut out, (psd * field.sample_rate() / 2.0).sqrt(), seed);
    }
    field.with_samples(out)
}

/// OSNR in dB for a per-channel power and co-polarized ASE density.
///
/// The simulation carries one polarization of ASE; the conventional OSNR
/// counts both, so the in-band noise is `2 · S · 12.5 GHz`.
pub fn osnr_db(channel_power: f64, ase_psd_copol: f64) -> f64 {
    10.0 * (channel_power / (2.0 * ase_psd_copol * OSNR_REFERENCE_BANDWIDTH)).log10()
}

/// Co-polarized ASE density giving `osnr_db` at `channel_power`.
pub fn ase_psd_for_osnr(channel_power: f64, osnr_db: f64) -> f64 {
    channel_power / (2.0 * OSNR_REFERENCE_BANDWIDTH * 10f64.powf(osnr_db / 10.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigcore::spectrum::power_spectrum;
    use num_complex::Complex64;

    fn carrier(p: f64, n: usize) -> OpticalField {
        OpticalField::new(vec![Complex64::new(p.sqrt(), 0.0); n], 100e9, 1550e-9).unwrap()
    }

    #[test]
    fn unity_gain_adds_nothing() {
        let x = carrier(1e-3, 100);
        let amp = AmplifierSpec {
            gain_db: 0.0,
            noise_figure_db: 5.0,
        };
        assert_eq!(amp.ase_psd(1550e-9), 0.0);
        assert_eq!(edfa(&x, &amp, 1).unwrap(), x);
    }

    #[test]
    fn power_bookkeeping() {
        let n = 1_000_000;
        let x = carrier(1e-5, n);
        let amp = AmplifierSpec {
            gain_db: 20.0,
            noise_figure_db: 5.0,
        };
        let y = edfa(&x, &amp, 3).unwrap();
        let expect = 100.0 * 1e-5 + amp.ase_psd(1550e-9) * 100e9;
        assert!((y.mean_power() - expect).abs() / expect < 0.01);
    }

    #[test]
    fn measured_osnr_matches_analytic() {
        let n = 1 << 18;
        let p_in = 1e-6;
        let x = carrier(p_in, n);
        let amp = AmplifierSpec {
            gain_db: 20.0,
            noise_figure_db: 5.0,
        };
        let y = edfa(&x, &amp, 11).unwrap();
        let spec = power_spectrum(y.samples());
        let nn = (n as f64).powi(2);
        let signal = spec[0] / nn;
        // noise bins: each holds S·fs/N of power
        let noise_per_bin = spec[1..].iter().sum::<f64>() / (n - 1) as f64 / nn;
        let psd = noise_per_bin * n as f64 / y.sample_rate();
        let measured = osnr_db(signal, psd);
        let analytic = osnr_db(amp.gain_linear() * p_in, amp.ase_psd(1550e-9));
        assert!((measured - analytic).abs() < 0.2, "{measured} vs {analytic}");
    }

    #[test]
    fn osnr_falls_with_noise_figure() {
        let mut last = f64::INFINITY;
        for nf in [3.0, 4.5, 6.0, 9.0] {
            let a = AmplifierSpec {
                gain_db: 15.0,
                noise_figure_db: nf,
            };
            let o = osnr_db(a.gain_linear() * 1e-5, a.ase_psd(1550e-9));
            assert!(o < last);
            last = o;
        }
    }

    #[test]
    fn osnr_inverse() {
        let s = ase_psd_for_osnr(1e-3, 27.0);
        assert!((osnr_db(1e-3, s) - 27.0).abs() < 1e-12);
    }
}
