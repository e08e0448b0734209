//! DMT symbol synthesis and detection.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::table::BitLoadingTable;
use crate::error::{Error, Result};
use crate::sigcore::spectrum::{fft_in_place, ifft_in_place};
use crate::sigcore::{BitSequence, Waveform};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DmtConfig {
    pub fft_size: usize,
    pub cp_length: usize,
    pub first_subcarrier: usize,
    pub last_subcarrier: usize,
    /// Peak-to-rms clipping level; `inf` disables clipping.
    pub clipping_ratio: f64,
    /// DAC sample rate, Hz.
    pub sample_rate: f64,
}

impl Default for DmtConfig {
    fn default() -> Self {
        Self {
            fft_size: 512,
            cp_length: 16,
            first_subcarrier: 1,
            last_subcarrier: 255,
            clipping_ratio: 3.2,
            sample_rate: 48e9,
        }
    }
}

impl DmtConfig {
    pub fn validate(&self) -> Result<()> {
        if self.fft_size < 4 || !self.fft_size.is_multiple_of(2) {
            return Err(Error::param("fft_size", "must be even and at least 4"));
        }
        if self.cp_length >= self.fft_size {
            return Err(Error::param("cp_length", "must be shorter than fft_size"));
        }
        if self.first_subcarrier < 1
            || self.last_subcarrier >= self.fft_size / 2
            || self.first_subcarrier > self.last_subcarrier
        {
            return Err(Error::param(
                "active_subcarriers",
                "must lie within [1, fft_size/2 - 1]",
            ));
        }
        if !(self.clipping_ratio > 0.0) {
            return Err(Error::param("clipping_ratio", "must be positive"));
        }
        if !(self.sample_rate > 0.0) {
            return Err(Error::param("sample_rate", "must be positive"));
        }
        Ok(())
    }

    pub fn active_count(&self) -> usize {
        self.last_subcarrier - self.first_subcarrier + 1
    }

    pub fn block_len(&self) -> usize {
        self.fft_size + self.cp_length
    }

    /// DMT symbols per second.
    pub fn symbol_rate(&self) -> f64 {
        self.sample_rate / self.block_len() as f64
    }

    pub fn subcarrier_spacing(&self) -> f64 {
        self.sample_rate / self.fft_size as f64
    }
}

/// Hermitian-symmetric inverse DFT of one block; `active` holds the values
/// of subcarriers `first..=last`. The result is real up to rounding.
pub fn dmt_ifft_block(active: &[Complex64], config: &DmtConfig) -> Vec<Complex64> {
    let n = config.fft_size;
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for (i, &v) in active.iter().enumerate() {
        let k = config.first_subcarrier + i;
        x[k] = v;
        x[n - k] = v.conj();
    }
    ifft_in_place(&mut x);
    x
}

/// Real time-domain block with cyclic prefix.
pub(crate) fn synthesize_block(active: &[Complex64], config: &DmtConfig, out: &mut Vec<f64>) {
    let x = dmt_ifft_block(active, config);
    let n = config.fft_size;
    out.extend(x[n - config.cp_length..].iter().map(|c| c.re));
    out.extend(x.iter().map(|c| c.re));
}

/// Clip to `±ratio·rms` with the rms taken over the whole signal.
pub fn clip(samples: &mut [f64], ratio: f64) {
    if !ratio.is_finite() {
        return;
    }
    let rms = (samples.iter().map(|x| x * x).sum::<f64>() / samples.len() as f64).sqrt();
    let limit = ratio * rms;
    samples.iter_mut().for_each(|x| *x = x.clamp(-limit, limit));
}

/// Synthesize and clip a sequence of frequency-domain blocks.
pub fn modulate_blocks(blocks: &[Vec<Complex64>], config: &DmtConfig) -> Result<Waveform> {
    config.validate()?;
    let mut samples = Vec::with_capacity(blocks.len() * config.block_len());
    for b in blocks {
        if b.len() != config.active_count() {
            return Err(Error::Framing(format!(
                "block carries {} subcarriers, expected {}",
                b.len(),
                config.active_count()
            )));
        }
        synthesize_block(b, config, &mut samples);
    }
    clip(&mut samples, config.clipping_ratio);
    Waveform::new(samples, config.sample_rate)
}

/// Map a bit stream onto loaded subcarriers, one DMT block at a time.
pub fn map_blocks(bits: &BitSequence, table: &BitLoadingTable, config: &DmtConfig) -> Result<Vec<Vec<Complex64>>> {
    config.validate()?;
    table.check_against(config)?;
    let capacity = table.total_bits();
    if capacity == 0 || !bits.len().is_multiple_of(capacity) {
        return Err(Error::Framing(format!(
            "{} bits are not a whole number of {capacity}-bit DMT symbols",
            bits.len()
        )));
    }
    let constellations = table.constellations()?;
    Ok(bits
        .bits()
        .chunks_exact(capacity)
        .map(|chunk| {
            let mut pos = 0;
            table
                .bits
                .iter()
                .zip(&table.power)
                .zip(&constellations)
                .map(|((&b, &p), c)| match c {
                    Some(c) => {
                        let v = c.map(&chunk[pos..pos + b as usize]) * p.sqrt();
                        pos += b as usize;
                        v
                    }
                    None => Complex64::new(0.0, 0.0),
                })
                .collect()
        })
        .collect())
}

pub fn dmt_modulate(bits: &BitSequence, table: &BitLoadingTable, config: &DmtConfig) -> Result<Waveform> {
    modulate_blocks(&map_blocks(bits, table, config)?, config)
}

/// Strip each cyclic prefix and return the active-subcarrier DFT outputs per
/// block. The waveform must hold a whole number of aligned blocks.
pub fn demodulate_blocks(samples: &[f64], config: &DmtConfig) -> Result<Vec<Vec<Complex64>>> {
    config.validate()?;
    let len = config.block_len();
    if samples.is_empty() || !samples.len().is_multiple_of(len) {
        return Err(Error::Framing(format!(
            "{} samples are not a whole number of {len}-sample blocks",
            samples.len()
        )));
    }
    let n = config.fft_size;
    Ok(samples
        .chunks_exact(len)
        .map(|block| {
            let mut y: Vec<Complex64> = block[config.cp_length..]
                .iter()
                .map(|&s| Complex64::new(s, 0.0))
                .collect();
            debug_assert_eq!(y.len(), n);
            fft_in_place(&mut y);
            y[config.first_subcarrier..=config.last_subcarrier].to_vec()
        })
        .collect())
}

/// Detect bits after one-tap equalization with per-subcarrier `eq` gains.
pub fn dmt_demodulate(
    waveform: &Waveform,
    table: &BitLoadingTable,
    config: &DmtConfig,
    eq: &[Complex64],
) -> Result<BitSequence> {
    table.check_against(config)?;
    if eq.len() != config.active_count() {
        return Err(Error::param("eq", "needs one gain per active subcarrier"));
    }
    let blocks = demodulate_blocks(waveform.samples(), config)?;
    detect_blocks(&blocks, table, eq)
}

/// One-tap equalize and slice frequency-domain blocks against `table`.
pub fn detect_blocks(blocks: &[Vec<Complex64>], table: &BitLoadingTable, eq: &[Complex64]) -> Result<BitSequence> {
    let constellations = table.constellations()?;
    let mut out = Vec::with_capacity(blocks.len() * table.total_bits());
    for y in blocks {
        for (i, c) in constellations.iter().enumerate() {
            if let Some(c) = c {
                let v = y[i] * eq[i] / table.power[i].sqrt();
                c.slice_into(v, &mut out);
            }
        }
    }
    Ok(BitSequence::from_trusted(out))
}
