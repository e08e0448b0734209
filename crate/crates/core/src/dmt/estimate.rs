//! Per-subcarrier channel and SNR estimation.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::modem::{demodulate_blocks, modulate_blocks, DmtConfig};
use crate::error::{Error, Result};
use crate::sigcore::{rng, Waveform};

/// Ceiling applied to reported SNR estimates, dB.
pub const SNR_CEILING_DB: f64 = 60.0;

/// Relative amplitude below which a carrier counts as faded.
const FADE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEstimate {
    /// Channel response per active carrier.
    pub response: Vec<Complex64>,
    /// One-tap equalizer gains, `1/response`; zero on flagged carriers.
    pub gains: Vec<Complex64>,
    pub flagged: Vec<bool>,
}

/// Least-squares one-tap estimate from aligned training blocks. Carriers whose
/// received amplitude falls below `1e-12` of the mean get gain 0 and are flagged.
pub fn one_tap_estimate(
    rx_training: &Waveform,
    known_training: &[Vec<Complex64>],
    config: &DmtConfig,
) -> Result<ChannelEstimate> {
    if known_training.is_empty() {
        return Err(Error::param("known_training", "needs at least one block"));
    }
    let rx = demodulate_blocks(rx_training.samples(), config)?;
    if rx.len() != known_training.len() {
        return Err(Error::Framing(format!(
            "{} received training blocks, {} known",
            rx.len(),
            known_training.len()
        )));
    }
    Ok(estimate_from_blocks(&rx, known_training))
}

pub(crate) fn estimate_from_blocks(rx: &[Vec<Complex64>], known: &[Vec<Complex64>]) -> ChannelEstimate {
    let n = known[0].len();
    let mut num = vec![Complex64::new(0.0, 0.0); n];
    let mut den = vec![0.0; n];
    let mut rx_power = vec![0.0; n];
    for (y, x) in rx.iter().zip(known) {
        for k in 0..n {
            num[k] += x[k].conj() * y[k];
            den[k] += x[k].norm_sqr();
            rx_power[k] += y[k].norm_sqr();
        }
    }
    let mean_power = rx_power.iter().sum::<f64>() / n as f64;
    let floor = FADE_FLOOR * FADE_FLOOR * mean_power;
    let mut response = Vec::with_capacity(n);
    let mut gains = Vec::with_capacity(n);
    let mut flagged = Vec::with_capacity(n);
    for k in 0..n {
        let h = if den[k] > 0.0 { num[k] / den[k] } else { Complex64::new(0.0, 0.0) };
        let faded = !(rx_power[k] > floor) || h.norm_sqr() == 0.0;
        response.push(h);
        gains.push(if faded { Complex64::new(0.0, 0.0) } else { h.inv() });
        flagged.push(faded);
    }
    ChannelEstimate {
        response,
        gains,
        flagged,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrProfile {
    /// Linear SNR per active carrier.
    pub snr: Vec<f64>,
    pub probe_symbols: usize,
}

impl SnrProfile {
    pub fn new(snr: Vec<f64>, probe_symbols: usize) -> Result<Self> {
        if snr.iter().any(|s| !(*s >= 0.0)) {
            return Err(Error::param("snr", "must be non-negative"));
        }
        Ok(Self { snr, probe_symbols })
    }

    pub fn snr_db(&self) -> Vec<f64> {
        self.snr.iter().map(|s| 10.0 * s.log10()).collect()
    }
}

/// Random unit-energy QPSK blocks.
pub fn qpsk_blocks(count: usize, carriers: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut r = rng(seed);
    let a = std::f64::consts::FRAC_1_SQRT_2;
    (0..count)
        .map(|_| {
            (0..carriers)
                .map(|_| {
                    let i = if r.random::<bool>() { a } else { -a };
                    let q = if r.random::<bool>() { a } else { -a };
                    Complex64::new(i, q)
                })
                .collect()
        })
        .collect()
}

/// Per-carrier SNR from equalized probe symbols: unit signal power over the
/// unbiased error variance, capped at [`SNR_CEILING_DB`].
pub(crate) fn snr_from_blocks(rx: &[Vec<Complex64>], known: &[Vec<Complex64>]) -> Vec<f64> {
    let est = estimate_from_blocks(rx, known);
    let t = rx.len() as f64;
    let cap = 10f64.powf(SNR_CEILING_DB / 10.0);
    (0..known[0].len())
        .map(|k| {
            if est.flagged[k] {
                return 0.0;
            }
            let err: f64 = rx
                .iter()
                .zip(known)
                .map(|(y, x)| (y[k] * est.gains[k] - x[k]).norm_sqr())
                .sum();
            let var = err / (t - 1.0);
            let sig = known.iter().map(|x| x[k].norm_sqr()).sum::<f64>() / t;
            if var > 0.0 { (sig / var).min(cap) } else { cap }
        })
        .collect()
}

/// Send `probe_symbols` uniform-power QPSK blocks through `link` and estimate
/// per-carrier SNR after one-tap equalization. `link` maps the transmitted
/// waveform to a received, block-aligned waveform of the same length.
pub fn snr_probe<F>(link: F, config: &DmtConfig, probe_symbols: usize, seed: u64) -> Result<SnrProfile>
where
    F: FnOnce(&Waveform) -> Result<Waveform>,
{
    if probe_symbols < 8 {
        return Err(Error::param("probe_symbols", "needs at least 8"));
    }
    let known = qpsk_blocks(probe_symbols, config.active_count(), seed);
    let tx = modulate_blocks(&known, config)?;
    let rx = link(&tx)?;
    let rx_blocks = demodulate_blocks(rx.samples(), config)?;
    if rx_blocks.len() != known.len() {
        return Err(Error::Framing("link changed the probe length".into()));
    }
    SnrProfile::new(snr_from_blocks(&rx_blocks, &known), probe_symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigcore::{add_awgn, spectrum::apply_frequency_response};

    fn cfg() -> DmtConfig {
        DmtConfig {
            fft_size: 128,
            cp_length: 8,
            first_subcarrier: 1,
            last_subcarrier: 63,
            clipping_ratio: f64::INFINITY,
            sample_rate: 10e9,
        }
    }

    fn probe_and_estimate(gain: impl Fn(f64) -> Complex64) -> ChannelEstimate {
        let c = cfg();
        let known = qpsk_blocks(4, c.active_count(), 11);
        let tx = modulate_blocks(&known, &c).unwrap();
        // apply per block so the circular response is exactly one-tap
        let mut rx = Vec::new();
        for blk in tx.samples().chunks(c.block_len()) {
            let w = Waveform::new(blk[c.cp_length..].to_vec(), c.sample_rate).unwrap();
            let y = apply_frequency_response(&w, &gain).unwrap();
            rx.extend_from_slice(&y.samples()[c.fft_size - c.cp_length..]);
            rx.extend_from_slice(y.samples());
        }
        let rx = Waveform::new(rx, c.sample_rate).unwrap();
        one_tap_estimate(&rx, &known, &c).unwrap()
    }

    #[test]
    fn identity_channel_gains_are_one() {
        let est = probe_and_estimate(|_| Complex64::new(1.0, 0.0));
        assert!(est.gains.iter().all(|g| (g - 1.0).norm() < 1e-9));
        assert!(est.flagged.iter().all(|f| !f));
    }

    #[test]
    fn doubled_amplitude_halves_gain() {
        let est = probe_and_estimate(|_| Complex64::new(2.0, 0.0));
        assert!(est.gains.iter().all(|g| (g - 0.5).norm() < 1e-9));
    }

    #[test]
    fn notch_is_flagged() {
        let c = cfg();
        let notch = 20.0 * c.subcarrier_spacing();
        let est = probe_and_estimate(move |f| {
            Complex64::new(if (f.abs() - notch).abs() < 1.0 { 0.0 } else { 1.0 }, 0.0)
        });
        assert!(est.flagged[19]);
        assert_eq!(est.gains[19], Complex64::new(0.0, 0.0));
        assert_eq!(est.flagged.iter().filter(|&&f| f).count(), 1);
    }

    #[test]
    fn awgn_probe_tracks_constructed_snr() {
        // white noise of variance σ² in time gives per-carrier noise N·σ²;
        // a QPSK carrier at unit power maps to |X|² = 1, so SNR = 1/(Nσ²)
        let c = cfg();
        let n = c.fft_size as f64;
        for target_db in [5.0, 10.0, 15.0, 20.0, 25.0] {
            let sigma = (1.0 / (n * 10f64.powf(target_db / 10.0))).sqrt();
            let mut means = Vec::new();
            for seed in 0..4 {
                let p = snr_probe(|w| add_awgn(w, sigma, 100 + seed), &c, 64, seed).unwrap();
                means.push(p.snr_db().iter().sum::<f64>() / p.snr.len() as f64);
            }
            let mean = means.iter().sum::<f64>() / means.len() as f64;
            assert!((mean - target_db).abs() < 0.5, "{target_db}: {mean}");
        }
    }

    #[test]
    fn noiseless_probe_hits_ceiling() {
        let c = cfg();
        let p = snr_probe(|w| Ok(w.clone()), &c, 16, 1).unwrap();
        assert!(p.snr_db().iter().all(|&s| (s - SNR_CEILING_DB).abs() < 1e-9));
    }

    #[test]
    fn probe_needs_enough_symbols() {
        assert!(snr_probe(|w| Ok(w.clone()), &cfg(), 7, 1).is_err());
    }
}
