//! Bit-error counting against an FEC threshold.

use super::signal::BitSequence;
use crate::error::{Error, Result};

/// KR4 RS-FEC input BER limit used as the PAM4 pass criterion.
pub const KR4_FEC_THRESHOLD: f64 = 5.2e-5;
/// 7 % overhead hard-decision FEC limit used as the DMT loading target.
pub const HD_FEC_THRESHOLD: f64 = 3.8e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct BerReport {
    pub bits_compared: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl BerReport {
    pub fn from_counts(bits_compared: u64, bit_errors: u64, threshold: f64) -> Self {
        let ber = if bits_compared > 0 {
            bit_errors as f64 / bits_compared as f64
        } else {
            0.0
        };
        Self {
            bits_compared,
            bit_errors,
            ber,
            threshold,
            pass: bits_compared > 0 && ber < threshold,
        }
    }

    /// Merge counts from several independent measurements.
    pub fn pooled<'a>(reports: impl IntoIterator<Item = &'a BerReport>, threshold: f64) -> Self {
        let (n, e) = reports
            .into_iter()
            .fold((0, 0), |(n, e), r| (n + r.bits_compared, e + r.bit_errors));
        Self::from_counts(n, e, threshold)
    }

    /// 95 % Wilson score interval on the BER.
    pub fn wilson_interval(&self) -> (f64, f64) {
        wilson_interval(self.bit_errors, self.bits_compared, 1.959_963_984_540_054)
    }
}

/// Wilson score interval for `errors` out of `trials` at normal quantile `z`.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

pub fn ber_count(tx: &BitSequence, rx: &BitSequence, threshold: f64) -> Result<BerReport> {
    if tx.len() != rx.len() {
        return Err(Error::Alignment {
            left: tx.len(),
            right: rx.len(),
        });
    }
    if tx.is_empty() {
        return Err(Error::param("tx", "cannot count errors over zero bits"));
    }
    let errors = tx
        .bits()
        .iter()
        .zip(rx.bits())
        .filter(|(a, b)| a != b)
        .count();
    Ok(BerReport::from_counts(tx.len() as u64, errors as u64, threshold))
}
