//! LMS-adapted symbol-spaced FFE with decision feedback.

use serde::{Deserialize, Serialize};

use super::mapping::{slice_index, NOMINAL_LEVELS, NOMINAL_THRESHOLDS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Pam4RxConfig {
    pub ffe_taps: usize,
    pub dfe_taps: usize,
    pub lms_step: f64,
    pub training_symbols: usize,
    pub thresholds: [f64; 3],
    /// Levels the decision-directed phase slices onto.
    pub levels: [f64; 4],
}

impl Default for Pam4RxConfig {
    fn default() -> Self {
        Self {
            ffe_taps: 15,
            dfe_taps: 3,
            lms_step: 1e-3,
            training_symbols: 4000,
            thresholds: NOMINAL_THRESHOLDS,
            levels: NOMINAL_LEVELS,
        }
    }
}

impl Pam4RxConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ffe_taps.is_multiple_of(2) {
            return Err(Error::param("ffe_taps", "must be odd"));
        }
        if !(self.lms_step >= 0.0 && self.lms_step.is_finite()) {
            return Err(Error::param("lms_step", "must be finite and >= 0"));
        }
        if self.thresholds.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("thresholds", "must be strictly increasing"));
        }
        if self.levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("levels", "must be strictly increasing"));
        }
        Ok(())
    }
}

/// Result of one equalizer pass.
#[derive(Debug, Clone)]
pub struct Equalized {
    /// Soft symbol estimates, one per received symbol.
    pub soft: Vec<f64>,
    pub ffe: Vec<f64>,
    pub dfe: Vec<f64>,
    pub bias: f64,
    /// MSE of the unequalized input over the second half of training.
    pub input_mse: f64,
    /// MSE of the equalizer output over the same window.
    pub training_mse: f64,
}

/// Hard decision onto `levels`.
pub fn decide(y: f64, thresholds: &[f64; 3], levels: &[f64; 4]) -> f64 {
    levels[slice_index(y, thresholds)]
}

/// Equalize `received` (one sample per symbol, aligned with `reference` and
/// scaled to the level grid of `config.levels`).
///
/// Taps start as a center spike and adapt by LMS against `reference` for the
/// first `training_symbols`, then against the equalizer's own decisions.
pub fn ffe_dfe_equalize(received: &[f64], reference: &[f64], config: &Pam4RxConfig) -> Result<Equalized> {
    config.validate()?;
    if config.training_symbols > reference.len() {
        return Err(Error::param("training_symbols", "exceeds the reference length"));
    }
    if received.len() < reference.len().min(config.training_symbols) {
        return Err(Error::Alignment {
            left: received.len(),
            right: reference.len(),
        });
    }
    let n = received.len();
    let nf = config.ffe_taps;
    let nb = config.dfe_taps;
    let center = (nf - 1) / 2;
    let mu = config.lms_step;

    let mut ffe = vec![0.0; nf];
    ffe[center] = 1.0;
    let mut dfe = vec![0.0; nb];
    let mut bias = 0.0;
    let mut decisions = vec![0.0; n];
    let mut soft = vec![0.0; n];
    let mut window = vec![0.0; nf];

    let at = |i: isize| -> f64 {
        if i < 0 || i as usize >= n {
            0.0
        } else {
            received[i as usize]
        }
    };

    for k in 0..n {
        for (j, w) in window.iter_mut().enumerate() {
            *w = at(k as isize + center as isize - j as isize);
        }
        let mut y = bias;
        for (w, x) in ffe.iter().zip(&window) {
            y += w * x;
        }
        for (d, b) in dfe.iter().enumerate() {
            if k > d {
                y -= b * decisions[k - d - 1];
            }
        }
        let target = if k < config.training_symbols {
            reference[k]
        } else {
            decide(y, &config.thresholds, &config.levels)
        };
        let e = target - y;
        if mu > 0.0 {
            let g = mu * e;
            for (w, x) in ffe.iter_mut().zip(&window) {
                *w += g * x;
            }
            for (d, b) in dfe.iter_mut().enumerate() {
                if k > d {
                    *b -= g * decisions[k - d - 1];
                }
            }
            bias += g;
        }
        decisions[k] = target;
        soft[k] = y;
    }

    let half = config.training_symbols / 2;
    let (input_mse, training_mse) = if config.training_symbols > half {
        let range = half..config.training_symbols;
        let count = range.len() as f64;
        let mse = |v: &[f64]| {
            range
                .clone()
                .map(|i| (v[i] - reference[i]).powi(2))
                .sum::<f64>()
                / count
        };
        (mse(received), mse(&soft))
    } else {
        (0.0, 0.0)
    };
    if !(training_mse <= input_mse) {
        return Err(Error::Divergence {
            input_mse,
            output_mse: training_mse,
        });
    }
    Ok(Equalized {
        soft,
        ffe,
        dfe,
        bias,
        input_mse,
        training_mse,
    })
}
