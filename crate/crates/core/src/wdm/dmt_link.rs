//! DMT transceiver around the shared optical path: a probe transmission
//! measures per-carrier SNR, the loader builds a table, and a second
//! transmission carries data under that table.

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::LinkConfig;
use super::path::{detect, modulate_channels, prbs_bits, propagate, scale_to_peak};
use super::report::{ChannelReport, LinkReport};
use crate::channel::{adc, agc, dac};
use crate::dmt::{
    demodulate_blocks, detect_blocks, estimate_from_blocks, gap_for_ber, levin_campello_load, map_blocks,
    modulate_blocks, qpsk_blocks, snr_from_blocks, BitLoadingTable, DmtConfig, SnrProfile,
};
use crate::error::{Error, Result};
use crate::sigcore::spectrum::circular_xcorr;
use crate::sigcore::{ber_count, derive_seed, Waveform, HD_FEC_THRESHOLD};

const PREAMBLE_STREAM: u64 = 10;
const PROBE_STREAM: u64 = 11;
const TRAINING_STREAM: u64 = 12;
/// Bounds the data frame when the loaded rate is tiny; fewer bits than the
/// budget are then compared.
const MAX_DATA_BLOCKS: usize = 4096;

fn preamble(cfg: &LinkConfig, index: usize) -> Vec<Complex64> {
    let m = &cfg.dmt.modem;
    qpsk_blocks(1, m.active_count(), derive_seed(cfg.channel_seed(index), PREAMBLE_STREAM, 0)).remove(0)
}

/// Frame of blocks → DAC output.
fn to_drive(cfg: &LinkConfig, blocks: &[Vec<Complex64>]) -> Result<Waveform> {
    let m = &cfg.dmt.modem;
    let digital = modulate_blocks(blocks, m)?;
    let dac_spec = &cfg.front_ends.dac;
    dac(&scale_to_peak(digital.samples(), 0.95 * dac_spec.full_scale), dac_spec, m.sample_rate)
}

/// Start of the `width`-sample circular window holding the most correlation
/// energy: the timing that keeps the most of a dispersed response inside the
/// cyclic prefix.
fn window_start(xcorr: &[Complex64], width: usize) -> usize {
    let n = xcorr.len();
    let e: Vec<f64> = xcorr.iter().map(|c| c.norm_sqr()).collect();
    let mut acc: f64 = (0..width).map(|j| e[j % n]).sum();
    let (mut best, mut best_at) = (acc, 0);
    for d in 1..n {
        acc += e[(d + width - 1) % n] - e[d - 1];
        if acc > best {
            best = acc;
            best_at = d;
        }
    }
    best_at
}

/// Photocurrent → DMT-rate samples aligned so the frame starts at 0.
fn to_blocks(cfg: &LinkConfig, current: &Waveform, preamble_block: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
    let m = &cfg.dmt.modem;
    let adc_spec = &cfg.front_ends.adc;
    let y = adc(&agc(current, adc_spec.full_scale / 4.0)?, adc_spec, m.sample_rate, 0)?;
    let template = modulate_blocks(&[preamble_block.to_vec()], &DmtConfig {
        clipping_ratio: f64::INFINITY,
        ..m.clone()
    })?;
    let yc: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let tc: Vec<Complex64> = template.samples().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let start = window_start(&circular_xcorr(&yc, &tc), m.cp_length + 1);
    let mut aligned = y;
    aligned.rotate_left(start);
    demodulate_blocks(&aligned, m)
}

/// Per-channel SNR profiles measured with a uniform QPSK probe over the full link.
pub fn probe_snr(cfg: &LinkConfig) -> Result<Vec<Result<SnrProfile>>> {
    let m = &cfg.dmt.modem;
    let n = cfg.plan.channel_count;
    let known: Vec<Vec<Vec<Complex64>>> = (0..n)
        .map(|i| qpsk_blocks(cfg.dmt.probe_symbols, m.active_count(), derive_seed(cfg.channel_seed(i), PROBE_STREAM, 0)))
        .collect();
    let drives = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut frame = vec![preamble(cfg, i)];
            frame.extend(known[i].iter().cloned());
            to_drive(cfg, &frame).map_err(|e| e.in_channel(i))
        })
        .collect::<Result<Vec<_>>>()?;
    let out = propagate(cfg, modulate_channels(cfg, &drives)?, 0)?;
    Ok(out
        .channels
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let current = detect(cfg, f, i, 0)?;
            let rx = to_blocks(cfg, &current, &preamble(cfg, i))?;
            SnrProfile::new(snr_from_blocks(&rx[1..], &known[i]), cfg.dmt.probe_symbols)
        }
        .map_err(|e: Error| e.in_channel(i)))
        .collect())
}

/// Probe the link and derive a loading table per channel.
pub fn load_tables(cfg: &LinkConfig) -> Result<Vec<Result<BitLoadingTable>>> {
    let gap = gap_for_ber(cfg.dmt.target_ber)?;
    let first = cfg.dmt.modem.first_subcarrier;
    Ok(probe_snr(cfg)?
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let t = p.and_then(|p| levin_campello_load(&p, first, gap, cfg.dmt.loading).map_err(|e| e.in_channel(i)))?;
            if t.total_bits() == 0 {
                return Err(Error::Infeasible { target: 1, max_achievable: 0 }.in_channel(i));
            }
            Ok(t)
        })
        .collect())
}

fn training_blocks(cfg: &LinkConfig, index: usize, table: &BitLoadingTable) -> Vec<Vec<Complex64>> {
    let m = &cfg.dmt.modem;
    let mut blocks = qpsk_blocks(cfg.dmt.training_symbols, m.active_count(), derive_seed(cfg.channel_seed(index), TRAINING_STREAM, 0));
    for b in &mut blocks {
        for (v, &p) in b.iter_mut().zip(&table.power) {
            *v *= p.sqrt();
        }
    }
    blocks
}

pub(crate) fn run(cfg: &LinkConfig) -> Result<LinkReport> {
    let m = &cfg.dmt.modem;
    let n = cfg.plan.channel_count;
    let tables = load_tables(cfg)?;
    // failed channels still transmit (uniform QPSK) so their crosstalk is kept
    let fallback = BitLoadingTable::uniform(m, 2);
    let used: Vec<&BitLoadingTable> = tables.iter().map(|t| t.as_ref().unwrap_or(&fallback)).collect();
    let data_blocks = used
        .iter()
        .map(|t| cfg.bit_budget.div_ceil(t.total_bits()))
        .max()
        .unwrap_or(1)
        .min(MAX_DATA_BLOCKS);

    let frames = (0..n)
        .into_par_iter()
        .map(|i| {
            let bits = prbs_bits(cfg, i, data_blocks * used[i].total_bits())?;
            let training = training_blocks(cfg, i, used[i]);
            let mut frame = vec![preamble(cfg, i)];
            frame.extend(training.iter().cloned());
            frame.extend(map_blocks(&bits, used[i], m)?);
            Ok((bits, training, to_drive(cfg, &frame)?))
        }
        .map_err(|e: Error| e.in_channel(i)))
        .collect::<Result<Vec<_>>>()?;
    let drives: Vec<Waveform> = frames.iter().map(|f| f.2.clone()).collect();
    let out = propagate(cfg, modulate_channels(cfg, &drives)?, 1)?;
    drop(drives);

    let t = cfg.dmt.training_symbols;
    let channels = out
        .channels
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let table = tables[i].clone()?;
            let (bits, training, _) = &frames[i];
            let current = detect(cfg, f, i, 1).map_err(|e| e.in_channel(i))?;
            let rx = to_blocks(cfg, &current, &preamble(cfg, i)).map_err(|e| e.in_channel(i))?;
            let est = estimate_from_blocks(&rx[1..=t], training);
            let detected = detect_blocks(&rx[1 + t..], &table, &est.gains).map_err(|e| e.in_channel(i))?;
            let ber = ber_count(bits, &detected, HD_FEC_THRESHOLD).map_err(|e| e.in_channel(i))?;
            Ok(ChannelReport {
                index: i,
                seed: cfg.channel_seed(i),
                ber,
                bits_per_symbol: Some(table.total_bits()),
                line_rate: table.line_rate(m),
                table: Some(table),
            })
        })
        .collect();
    Ok(LinkReport {
        channels,
        osnr_db: out.osnr_db,
        composite_rate: cfg.composite_rate(),
    })
}
