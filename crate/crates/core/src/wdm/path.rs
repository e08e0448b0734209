//! Shared optical path: modulate, multiplex, amplify, propagate, compensate,
//! noise-load, demultiplex, detect.

use rayon::prelude::*;

use super::config::{AmplifierPlacement, FilterPlacement, LinkConfig};
use super::mux::{demultiplex_all, multiplex};
use crate::channel::{
    apply_dispersion, ase_psd_for_osnr, edfa, intensity_modulate, optical_filter, osnr_db, photodiode, tdcm,
    AmplifierSpec, OpticalFilterSpec,
};
use crate::error::{Error, Result};
use crate::sigcore::{add_complex_noise, derive_seed, BitSequence, OpticalField, Prbs, Waveform};

pub(crate) const NOISE_STREAM: u64 = 3;
pub(crate) const RX_STREAM: u64 = 2;

fn dbm_to_w(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

/// The first `n` bits of channel `index`'s PRBS.
pub(crate) fn prbs_bits(cfg: &LinkConfig, index: usize, n: usize) -> Result<BitSequence> {
    let p = Prbs::from_integer_seed(cfg.prbs_order, cfg.channel_seed(index))?;
    Ok(BitSequence::from_trusted(p.take(n).collect()))
}

/// Scale a waveform so its peak magnitude equals `peak`.
pub(crate) fn scale_to_peak(samples: &[f64], peak: f64) -> Vec<f64> {
    let m = samples.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let g = if m > 0.0 { peak / m } else { 1.0 };
    samples.iter().map(|x| x * g).collect()
}

/// Drive waveforms to per-channel optical fields.
pub(crate) fn modulate_channels(cfg: &LinkConfig, drives: &[Waveform]) -> Result<Vec<OpticalField>> {
    let p = dbm_to_w(cfg.laser.power_dbm);
    let tx_filter = cfg.filter(FilterPlacement::Transmitter).map(|f| f.spec());
    drives
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            let drive = d.with_samples(scale_to_peak(d.samples(), cfg.laser.drive_swing))?;
            let f = intensity_modulate(&drive, p, cfg.laser.extinction_ratio_db, cfg.plan.channel_wavelength(i))
                .map_err(|e| e.in_channel(i))?;
            match &tx_filter {
                Some(spec) => optical_filter(&f, spec).map_err(|e| e.in_channel(i)),
                None => Ok(f),
            }
        })
        .collect()
}

/// What the receiver sees of the shared path.
#[derive(Debug, Clone)]
pub(crate) struct PathOutput {
    pub channels: Vec<OpticalField>,
    /// OSNR per channel at the demultiplexer input.
    pub osnr_db: f64,
}

struct Amp<'a> {
    cfg: &'a LinkConfig,
    /// Co-polarized ASE density accumulated so far, W/Hz.
    ase: f64,
    stage: u64,
    seed: u64,
}

impl Amp<'_> {
    fn apply(&mut self, field: OpticalField, placement: AmplifierPlacement, auto_gain_db: f64) -> Result<OpticalField> {
        let Some(a) = self.cfg.amplifier(placement) else {
            return Ok(field);
        };
        let spec = AmplifierSpec {
            gain_db: a.gain_db.unwrap_or(auto_gain_db),
            noise_figure_db: a.noise_figure_db,
        };
        self.stage += 1;
        let out = edfa(&field, &spec, derive_seed(self.seed, NOISE_STREAM, self.stage))?;
        self.ase = self.ase * spec.gain_linear() + spec.ase_psd(field.center_wavelength());
        Ok(out)
    }
}

/// Run the composite from the multiplexer to the per-channel demux outputs.
/// `phase` separates the noise of successive transmissions in one run.
pub(crate) fn propagate(cfg: &LinkConfig, channels: Vec<OpticalField>, phase: u64) -> Result<PathOutput> {
    let interleaver = cfg.filter(FilterPlacement::Interleaver).map(|f| f.spec());
    let mut field = multiplex(&channels, &cfg.plan, cfg.composite_rate(), interleaver.as_ref())?;
    drop(channels);
    let mut amp = Amp {
        cfg,
        ase: 0.0,
        stage: 0,
        seed: derive_seed(cfg.seed, NOISE_STREAM, phase),
    };
    field = amp.apply(field, AmplifierPlacement::Booster, 0.0)?;

    let spans = cfg.span_count();
    let span_km = cfg.fiber.length_km / spans as f64;
    let span_loss_db = cfg.fiber.attenuation * span_km;
    for s in 0..spans {
        let d = cfg.fiber.dispersion * span_km;
        if span_km > 0.0 {
            field = apply_dispersion(&field, d, span_loss_db)?;
            amp.ase *= 10f64.powf(-span_loss_db / 10.0);
        }
        if s + 1 < spans {
            field = amp.apply(field, AmplifierPlacement::Inline, span_loss_db)?;
        }
    }
    if cfg.tdcm_ps_nm != 0.0 {
        field = tdcm(&field, cfg.tdcm_ps_nm)?;
    }
    field = amp.apply(field, AmplifierPlacement::Preamp, span_loss_db)?;

    let fs = field.sample_rate();
    let per_channel = ((field.mean_power() - amp.ase * fs) / cfg.plan.channel_count as f64).max(0.0);
    if let Some(target) = cfg.osnr_db {
        let wanted = ase_psd_for_osnr(per_channel, target);
        if wanted < amp.ase * (1.0 - 1e-9) {
            return Err(Error::OsnrUnreachable {
                target_db: target,
                achieved_db: osnr_db(per_channel, amp.ase),
            });
        }
        let extra = (wanted - amp.ase).max(0.0);
        if extra > 0.0 {
            let mut s = field.into_samples();
            add_complex_noise(&mut s, (extra * fs / 2.0).sqrt(), derive_seed(amp.seed, NOISE_STREAM, 1000));
            field = OpticalField::new(s, fs, cfg.plan.center_wavelength)?;
        }
        amp.ase = wanted;
    }
    let osnr = osnr_db(per_channel, amp.ase);

    let open = OpticalFilterSpec::super_gaussian(1, f64::INFINITY, 0.0);
    let demux = cfg.filter(FilterPlacement::Demux).map(|f| f.spec()).unwrap_or(open);
    let channels = demultiplex_all(&field, &cfg.plan, &demux, cfg.channel_rate())?;
    Ok(PathOutput { channels, osnr_db: osnr })
}

/// Receive VOA and photodiode for channel `index`.
pub(crate) fn detect(cfg: &LinkConfig, field: &OpticalField, index: usize, phase: u64) -> Result<Waveform> {
    let field = match cfg.receiver.power_dbm {
        Some(dbm) => {
            let p = field.mean_power();
            let g = if p > 0.0 { (dbm_to_w(dbm) / p).sqrt() } else { 1.0 };
            field.with_samples(field.samples().iter().map(|s| s * g).collect())?
        }
        None => field.clone(),
    };
    let seed = derive_seed(cfg.channel_seed(index), RX_STREAM, phase);
    photodiode(&field, cfg.receiver.responsivity, cfg.receiver.thermal_sigma, seed)
}
