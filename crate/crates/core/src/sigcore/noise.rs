//! Seeded randomness and additive Gaussian noise.
//!
//! Every stochastic operation draws from [`SimRng`] (ChaCha8) seeded
//! explicitly by the caller.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::signal::{OpticalField, Waveform};
use crate::error::{Error, Result};

/// The one generator used for all simulated randomness.
pub type SimRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer; used to derive independent sub-seeds.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Deterministic sub-seed for `(stream, index)` under `base`.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(stream.wrapping_mul(0x1000_0000_01B3) ^ splitmix64(index)))
}

/// Signals that can receive additive Gaussian noise.
pub trait AddNoise: Sized {
    /// `sigma` is the standard deviation per real dimension.
    fn add_awgn(&self, sigma: f64, seed: u64) -> Result<Self>;
}

impl AddNoise for Waveform {
    fn add_awgn(&self, sigma: f64, seed: u64) -> Result<Self> {
        check_sigma(sigma)?;
        if sigma == 0.0 {
            return Ok(self.clone());
        }
        let mut r = rng(seed);
        let out = self
            .samples()
            .iter()
            .map(|&s| {
                let g: f64 = StandardNormal.sample(&mut r);
                s + sigma * g
            })
            .collect();
        self.with_samples(out)
    }
}

impl AddNoise for OpticalField {
    fn add_awgn(&self, sigma: f64, seed: u64) -> Result<Self> {
        check_sigma(sigma)?;
        if sigma == 0.0 {
            return Ok(self.clone());
        }
        let mut out = self.samples().to_vec();
        add_complex_noise(&mut out, sigma, seed);
        self.with_samples(out)
    }
}

/// Add independent real noise of deviation `sigma` to each quadrature.
pub(crate) fn add_complex_noise(samples: &mut [Complex64], sigma: f64, seed: u64) {
    let mut r = rng(seed);
    for s in samples.iter_mut() {
        let re: f64 = StandardNormal.sample(&mut r);
        let im: f64 = StandardNormal.sample(&mut r);
        *s += Complex64::new(sigma * re, sigma * im);
    }
}

/// Free-function form of [`AddNoise::add_awgn`].
pub fn add_awgn<S: AddNoise>(signal: &S, sigma: f64, seed: u64) -> Result<S> {
    signal.add_awgn(sigma, seed)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::param("sigma", format!("{sigma} must be finite and >= 0")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeros(n: usize) -> Waveform {
        Waveform::new(vec![0.0; n], 1.0).unwrap()
    }

    #[test]
    fn zero_sigma_is_identity() {
        let w = Waveform::new(vec![1.0, -2.0, 3.0], 5.0).unwrap();
        assert_eq!(add_awgn(&w, 0.0, 9).unwrap(), w);
    }

    #[test]
    fn negative_sigma_rejected() {
        assert!(matches!(
            add_awgn(&zeros(4), -1.0, 0),
            Err(Error::InvalidParameter { name: "sigma", .. })
        ));
    }

    #[test]
    fn unit_variance_and_zero_mean() {
        let n = 1_000_000;
        let out = add_awgn(&zeros(n), 1.0, 1234).unwrap();
        let mean = out.mean();
        let var = out.samples().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!((0.99..=1.01).contains(&var), "{var}");
        assert!(mean.abs() < 5.0 / (n as f64).sqrt(), "{mean}");
    }

    #[test]
    fn complex_per_quadrature_variance() {
        let n = 1_000_000;
        let f = OpticalField::new(vec![Complex64::new(0.0, 0.0); n], 1.0, 1.55e-6).unwrap();
        let out = add_awgn(&f, 1.0, 77).unwrap();
        let vr = out.samples().iter().map(|s| s.re * s.re).sum::<f64>() / n as f64;
        let vi = out.samples().iter().map(|s| s.im * s.im).sum::<f64>() / n as f64;
        assert!((0.99..=1.01).contains(&vr) && (0.99..=1.01).contains(&vi));
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let a = add_awgn(&zeros(1000), 0.3, 5).unwrap();
        let b = add_awgn(&zeros(1000), 0.3, 5).unwrap();
        assert_eq!(a, b);
        let c = add_awgn(&zeros(1000), 0.3, 6).unwrap();
        assert_ne!(a, c);
    }
}
