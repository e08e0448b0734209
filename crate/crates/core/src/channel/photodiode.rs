use crate::error::{Error, Result};
use crate::sigcore::{AddNoise, OpticalField, Waveform};

/// Square-law detection `R·|E|²` plus Gaussian thermal current noise.
pub fn photodiode(
    field: &OpticalField,
    responsivity: f64,
    thermal_sigma: f64,
    seed: u64,
) -> Result<Waveform> {
    if !(responsivity > 0.0) {
        return Err(Error::param("responsivity", "must be positive"));
    }
    let current = field
        .samples()
        .iter()
        .map(|s| responsivity * s.norm_sqr())
        .collect();
    Waveform::new(current, field.sample_rate())?.add_awgn(thermal_sigma, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigcore::spectrum::power_spectrum;
    use num_complex::Complex64;

    #[test]
    fn constant_field() {
        let f = OpticalField::new(vec![Complex64::new(0.3, 0.4); 8], 1e9, 1.55e-6).unwrap();
        let w = photodiode(&f, 0.8, 0.0, 0).unwrap();
        assert!(w.samples().iter().all(|&x| (x - 0.8 * 0.25).abs() < 1e-15));
    }

    #[test]
    fn phase_insensitive() {
        let s: Vec<Complex64> = (0..64)
            .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let rot = Complex64::from_polar(1.0, 1.234);
        let a = OpticalField::new(s.clone(), 1e9, 1.55e-6).unwrap();
        let b = OpticalField::new(s.iter().map(|x| x * rot).collect(), 1e9, 1.55e-6).unwrap();
        let wa = photodiode(&a, 1.0, 0.01, 4).unwrap();
        let wb = photodiode(&b, 1.0, 0.01, 4).unwrap();
        for (x, y) in wa.samples().iter().zip(wb.samples()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn two_tone_beat_amplitude() {
        // E = sqrt(P)(e^{jπft} + e^{-jπft}) → |E|² = 2P + 2P·cos(2πft)
        let n = 1024;
        let k = 40; // beat bin
        let p_tone: f64 = 1e-3;
        let r = 0.9;
        let s = (0..n)
            .map(|i| {
                let ph = std::f64::consts::PI * k as f64 * i as f64 / n as f64;
                Complex64::from_polar(p_tone.sqrt(), ph) + Complex64::from_polar(p_tone.sqrt(), -ph)
            })
            .collect();
        let f = OpticalField::new(s, 10e9, 1.55e-6).unwrap();
        let w = photodiode(&f, r, 0.0, 0).unwrap();
        let spec = power_spectrum(&w.samples().iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>());
        // a real tone of amplitude A has |X_k| = A·N/2
        let amp = 2.0 * spec[k].sqrt() / n as f64;
        assert!((amp - 2.0 * r * p_tone).abs() < 1e-12);
    }
}
