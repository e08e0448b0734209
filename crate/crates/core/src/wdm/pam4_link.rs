//! PAM4 transceiver around the shared optical path.

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::LinkConfig;
use super::path::{detect, modulate_channels, propagate, scale_to_peak};
use super::report::{ChannelReport, LinkReport};
use crate::channel::{adc, agc, dac};
use crate::error::{Error, Result};
use crate::pam4::{ffe_dfe_equalize, level_adjust, pam4_demap, pam4_map, pre_equalize, Pam4RxConfig};
use crate::sigcore::spectrum::circular_lag;
use super::path::prbs_bits;
use crate::sigcore::{ber_count, BitSequence, KR4_FEC_THRESHOLD};

struct Tx {
    bits: BitSequence,
    symbols: Vec<f64>,
}

fn transmit(cfg: &LinkConfig, index: usize, levels: &[f64; 4]) -> Result<(Tx, crate::sigcore::Waveform)> {
    let n_bits = cfg.bit_budget.div_ceil(2) * 2;
    let bits = prbs_bits(cfg, index, n_bits)?;
    let symbols = pam4_map(&bits, levels)?;
    let shaped = pre_equalize(&symbols, &cfg.pam4.tx.pre_eq_taps)?;
    let dac_spec = &cfg.front_ends.dac;
    let drive = dac(&scale_to_peak(&shaped, 0.95 * dac_spec.full_scale), dac_spec, cfg.pam4.tx.baud)?;
    Ok((Tx { bits, symbols }, drive))
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64;
    (m, var.sqrt())
}

/// Match mean and spread of `y` to the reference symbols, then rotate it
/// into alignment with them.
fn normalize_and_align(y: &[f64], reference: &[f64]) -> Vec<f64> {
    let (my, sy) = mean_std(y);
    let (mr, sr) = mean_std(reference);
    let g = if sy > 0.0 { sr / sy } else { 1.0 };
    let mut z: Vec<f64> = y.iter().map(|x| (x - my) * g + mr).collect();
    let zc: Vec<Complex64> = z.iter().map(|&x| Complex64::new(x - mr, 0.0)).collect();
    let rc: Vec<Complex64> = reference.iter().map(|&x| Complex64::new(x - mr, 0.0)).collect();
    let lag = circular_lag(&zc, &rc);
    z.rotate_left(lag);
    z
}

fn receive(cfg: &LinkConfig, index: usize, tx: &Tx, levels: &[f64; 4], current: &crate::sigcore::Waveform) -> Result<ChannelReport> {
    let adc_spec = &cfg.front_ends.adc;
    let baud = cfg.pam4.tx.baud;
    let thresholds = [
        (levels[0] + levels[1]) / 2.0,
        (levels[1] + levels[2]) / 2.0,
        (levels[2] + levels[3]) / 2.0,
    ];
    let rx_cfg = Pam4RxConfig {
        levels: *levels,
        thresholds,
        ..cfg.pam4.rx.clone()
    };
    let conditioned = agc(current, adc_spec.full_scale / 4.0)?;
    let sps = (current.sample_rate() / baud).round() as usize;
    let train = rx_cfg.training_symbols;

    // sampling phase with the lowest training error
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut last_err = None;
    for phase in 0..sps {
        let y = adc(&conditioned, adc_spec, baud, phase)?;
        let aligned = normalize_and_align(&y, &tx.symbols);
        match ffe_dfe_equalize(&aligned[..train], &tx.symbols[..train], &rx_cfg) {
            Ok(eq) if best.as_ref().is_none_or(|(m, _)| eq.training_mse < *m) => {
                best = Some((eq.training_mse, aligned))
            }
            Ok(_) => {}
            Err(e) => last_err = Some(e),
        }
    }
    let Some((_, aligned)) = best else {
        return Err(last_err.unwrap_or_else(|| Error::param("samples_per_symbol", "no sampling phase")));
    };
    let eq = ffe_dfe_equalize(&aligned, &tx.symbols, &rx_cfg)?;
    let detected = pam4_demap(&eq.soft[train..], &thresholds, levels)?;
    let sent = BitSequence::new(tx.bits.bits()[2 * train..].to_vec())?;
    Ok(ChannelReport {
        index,
        seed: cfg.channel_seed(index),
        ber: ber_count(&sent, &detected, KR4_FEC_THRESHOLD)?,
        bits_per_symbol: None,
        line_rate: 2.0 * baud,
        table: None,
    })
}

pub(crate) fn run(cfg: &LinkConfig) -> Result<LinkReport> {
    let levels = level_adjust(&cfg.pam4.tx.levels, &cfg.pam4.level_adjust)?;
    let (txs, drives): (Vec<Tx>, Vec<_>) = (0..cfg.plan.channel_count)
        .into_par_iter()
        .map(|i| transmit(cfg, i, &levels).map_err(|e| e.in_channel(i)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let fields = modulate_channels(cfg, &drives)?;
    drop(drives);
    let out = propagate(cfg, fields, 0)?;
    let channels = out
        .channels
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            detect(cfg, f, i, 0)
                .and_then(|current| receive(cfg, i, &txs[i], &levels, &current))
                .map_err(|e| e.in_channel(i))
        })
        .collect();
    Ok(LinkReport {
        channels,
        osnr_db: out.osnr_db,
        composite_rate: cfg.composite_rate(),
    })
}
