//! Gap-approximation bit and power loading.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc_inv;

use super::estimate::SnrProfile;
use super::qam::MAX_QAM_BITS;
use super::table::BitLoadingTable;
use crate::error::{Error, Result};

/// Target BER used to derive the default SNR gap (7% hard-decision FEC).
pub const DEFAULT_TARGET_BER: f64 = crate::sigcore::HD_FEC_THRESHOLD;

/// SNR gap in dB for uncoded QAM at `target_ber`: `Γ = (Q⁻¹(ber))² / 3`.
pub fn gap_for_ber(target_ber: f64) -> Result<f64> {
    if !(target_ber > 0.0 && target_ber < 0.5) {
        return Err(Error::param("target_ber", "must lie in (0, 0.5)"));
    }
    let q_inv = std::f64::consts::SQRT_2 * erfc_inv(2.0 * target_ber);
    Ok(10.0 * (q_inv * q_inv / 3.0).log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LoadingMode {
    /// Maximize bits under a unit mean power budget with extra margin.
    RateAdaptive { margin_db: f64 },
    /// Reach exactly `target_bits` with minimum power.
    MarginAdaptive { target_bits: usize },
}

impl Default for LoadingMode {
    fn default() -> Self {
        LoadingMode::RateAdaptive { margin_db: 0.0 }
    }
}

/// Power needed on one carrier to carry `bits` at effective gap `gamma`.
fn carrier_power(bits: u8, gamma: f64, snr: f64) -> f64 {
    if bits == 0 {
        0.0
    } else {
        ((1u32 << bits) - 1) as f64 * gamma / snr
    }
}

/// Incremental power for the next bit; infinite if the carrier is full or dead.
fn increment(bits: u8, gamma: f64, snr: f64) -> f64 {
    if bits >= MAX_QAM_BITS || !(snr > 0.0) {
        f64::INFINITY
    } else {
        (1u32 << bits) as f64 * gamma / snr
    }
}

fn decrement(bits: u8, gamma: f64, snr: f64) -> f64 {
    if bits == 0 {
        f64::NEG_INFINITY
    } else {
        (1u32 << (bits - 1)) as f64 * gamma / snr
    }
}

/// Total unnormalized power `Σ (2^b − 1)·Γ/snr` of an allocation.
pub fn allocation_power(bits: &[u8], snr: &[f64], gap_db: f64) -> f64 {
    let gamma = 10f64.powf(gap_db / 10.0);
    bits.iter().zip(snr).map(|(&b, &s)| carrier_power(b, gamma, s)).sum()
}

fn cheapest(bits: &[u8], snr: &[f64], gamma: f64) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (k, (&b, &s)) in bits.iter().zip(snr).enumerate() {
        let d = increment(b, gamma, s);
        if d.is_finite() && best.is_none_or(|(_, bd)| d < bd) {
            best = Some((k, d));
        }
    }
    best
}

/// Move single bits from the carrier where the last bit is dearest to the one
/// where the next bit is cheapest until no such move saves power.
fn efficientize(bits: &mut [u8], snr: &[f64], gamma: f64) {
    loop {
        let Some((up, d_up)) = cheapest(bits, snr, gamma) else { return };
        let (down, d_down) = bits
            .iter()
            .zip(snr)
            .enumerate()
            .map(|(k, (&b, &s))| (k, decrement(b, gamma, s)))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        if up == down || d_down <= d_up * (1.0 + 1e-12) {
            return;
        }
        bits[down] -= 1;
        bits[up] += 1;
    }
}

/// Integer bit allocation by greedy incremental loading.
pub fn levin_campello_bits(snr: &[f64], gap_db: f64, mode: LoadingMode) -> Result<Vec<u8>> {
    if !(gap_db >= 0.0 && gap_db.is_finite()) {
        return Err(Error::param("gap_db", "must be finite and non-negative"));
    }
    let mut gamma = 10f64.powf(gap_db / 10.0);
    let mut bits = vec![0u8; snr.len()];
    match mode {
        LoadingMode::RateAdaptive { margin_db } => {
            if !margin_db.is_finite() {
                return Err(Error::param("margin_db", "must be finite"));
            }
            gamma *= 10f64.powf(margin_db / 10.0);
            let budget = snr.len() as f64;
            let mut used = 0.0;
            while let Some((k, d)) = cheapest(&bits, snr, gamma) {
                if used + d > budget {
                    break;
                }
                used += d;
                bits[k] += 1;
            }
        }
        LoadingMode::MarginAdaptive { target_bits } => {
            let max = snr.iter().filter(|&&s| s > 0.0).count() * MAX_QAM_BITS as usize;
            if target_bits > max {
                return Err(Error::Infeasible {
                    target: target_bits,
                    max_achievable: max,
                });
            }
            for _ in 0..target_bits {
                let (k, _) = cheapest(&bits, snr, gamma).expect("capacity checked above");
                bits[k] += 1;
            }
        }
    }
    efficientize(&mut bits, snr, gamma);
    Ok(bits)
}

/// Levin-Campello loading into a table whose power has unit mean over loaded
/// carriers.
pub fn levin_campello_load(
    profile: &SnrProfile,
    first_subcarrier: usize,
    gap_db: f64,
    mode: LoadingMode,
) -> Result<BitLoadingTable> {
    let bits = levin_campello_bits(&profile.snr, gap_db, mode)?;
    let gamma = 10f64.powf(gap_db / 10.0);
    let mut power: Vec<f64> = bits
        .iter()
        .zip(&profile.snr)
        .map(|(&b, &s)| carrier_power(b, gamma, s))
        .collect();
    let loaded = bits.iter().filter(|&&b| b > 0).count();
    if loaded > 0 {
        let mean = power.iter().sum::<f64>() / loaded as f64;
        power.iter_mut().for_each(|p| *p /= mean);
    }
    BitLoadingTable::new(first_subcarrier, bits, power)
}
