//! Spectral multiplexing onto a shared composite grid.
//!
//! Channels are resampled by spectral zero-padding and shifted by an integer
//! number of bins, so offsets are realized to within half a bin
//! (`channel_rate / channel_len`).

use num_complex::Complex64;
use rayon::prelude::*;

use super::plan::ChannelPlan;
use crate::channel::OpticalFilterSpec;
use crate::error::{Error, Result};
use crate::sigcore::spectrum::{bin_frequency, fft, fft_in_place, ifft_in_place, resample_spectrum};
use crate::sigcore::OpticalField;

fn integer_ratio(composite_rate: f64, channel_rate: f64) -> Result<usize> {
    let r = composite_rate / channel_rate;
    let m = r.round();
    if m < 1.0 || (r - m).abs() > 1e-9 * r {
        return Err(Error::Rate {
            sample_rate: composite_rate,
            symbol_rate: channel_rate,
        });
    }
    Ok(m as usize)
}

fn offset_bins(offset: f64, len: usize, rate: f64) -> isize {
    (offset * len as f64 / rate).round() as isize
}

fn check_bandwidth(plan: &ChannelPlan, composite_rate: f64) -> Result<()> {
    if plan.occupied_bandwidth() > composite_rate {
        return Err(Error::Bandwidth {
            required: plan.occupied_bandwidth(),
            available: composite_rate,
        });
    }
    Ok(())
}

fn shape(spectrum: &mut [Complex64], rate: f64, filter: &OpticalFilterSpec) {
    if filter.bandwidth_3db.is_infinite() {
        return;
    }
    let n = spectrum.len();
    for (k, x) in spectrum.iter_mut().enumerate() {
        *x *= filter.amplitude(bin_frequency(k, n, rate));
    }
}

/// Resample each channel to `composite_rate` (an integer multiple of the
/// channel rate), shift it to its plan offset and sum. With `interleaver`
/// set, each channel first passes the interleaver port passband centered on
/// its own grid slot.
pub fn multiplex(
    channels: &[OpticalField],
    plan: &ChannelPlan,
    composite_rate: f64,
    interleaver: Option<&OpticalFilterSpec>,
) -> Result<OpticalField> {
    plan.validate()?;
    if channels.len() != plan.channel_count {
        return Err(Error::ChannelIndex {
            index: channels.len(),
            count: plan.channel_count,
        });
    }
    let len = channels[0].len();
    let rate = channels[0].sample_rate();
    if let Some(c) = channels.iter().find(|c| c.len() != len || c.sample_rate() != rate) {
        return Err(Error::Alignment {
            left: len,
            right: c.len(),
        });
    }
    if let Some(f) = interleaver {
        f.validate()?;
    }
    let m = integer_ratio(composite_rate, rate)?;
    check_bandwidth(plan, composite_rate)?;
    let out_len = len * m;

    let spectra: Vec<Vec<Complex64>> = channels
        .par_iter()
        .enumerate()
        .map(|(i, ch)| {
            let mut x = fft(ch.samples());
            if let Some(f) = interleaver {
                shape(&mut x, rate, f);
            }
            let mut y = resample_spectrum(&x, out_len);
            crate::sigcore::spectrum::rotate_bins(&mut y, offset_bins(plan.offset(i), len, rate));
            y
        })
        .collect();
    // fixed summation order keeps the result independent of the thread count
    let mut sum = vec![Complex64::new(0.0, 0.0); out_len];
    for s in &spectra {
        for (a, b) in sum.iter_mut().zip(s) {
            *a += b;
        }
    }
    ifft_in_place(&mut sum);
    OpticalField::new(sum, rate * m as f64, plan.center_wavelength)
}

fn extract(
    spectrum: &[Complex64],
    composite_rate: f64,
    plan: &ChannelPlan,
    index: usize,
    filter: &OpticalFilterSpec,
    channel_len: usize,
) -> Result<OpticalField> {
    let n = spectrum.len();
    let channel_rate = composite_rate * channel_len as f64 / n as f64;
    let mut x = spectrum.to_vec();
    crate::sigcore::spectrum::rotate_bins(&mut x, -offset_bins(plan.offset(index), channel_len, channel_rate));
    shape(&mut x, composite_rate, filter);
    let mut y = resample_spectrum(&x, channel_len);
    ifft_in_place(&mut y);
    OpticalField::new(y, channel_rate, plan.channel_wavelength(index))
}

fn demux_checks(
    composite: &OpticalField,
    plan: &ChannelPlan,
    filter: &OpticalFilterSpec,
    channel_rate: f64,
) -> Result<usize> {
    plan.validate()?;
    filter.validate()?;
    let m = integer_ratio(composite.sample_rate(), channel_rate)?;
    if !composite.len().is_multiple_of(m) {
        return Err(Error::Alignment {
            left: composite.len(),
            right: m,
        });
    }
    Ok(composite.len() / m)
}

/// Shift channel `index` to baseband, apply `filter` and resample to
/// `channel_rate`.
pub fn demultiplex(
    composite: &OpticalField,
    plan: &ChannelPlan,
    index: usize,
    filter: &OpticalFilterSpec,
    channel_rate: f64,
) -> Result<OpticalField> {
    if index >= plan.channel_count {
        return Err(Error::ChannelIndex {
            index,
            count: plan.channel_count,
        });
    }
    let len = demux_checks(composite, plan, filter, channel_rate)?;
    extract(&fft(composite.samples()), composite.sample_rate(), plan, index, filter, len)
}

/// Every channel of the plan from one shared transform of the composite.
pub fn demultiplex_all(
    composite: &OpticalField,
    plan: &ChannelPlan,
    filter: &OpticalFilterSpec,
    channel_rate: f64,
) -> Result<Vec<OpticalField>> {
    let len = demux_checks(composite, plan, filter, channel_rate)?;
    let mut x = composite.samples().to_vec();
    fft_in_place(&mut x);
    (0..plan.channel_count)
        .into_par_iter()
        .map(|i| extract(&x, composite.sample_rate(), plan, i, filter, len))
        .collect()
}
