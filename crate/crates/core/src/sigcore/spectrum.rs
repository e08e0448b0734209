//! DFT helpers and frequency-domain filtering.
//!
//! Convention: the forward DFT uses `e^{-j2πkn/N}` and is unnormalized; the
//! inverse carries the `1/N`. All filtering is circular. Callers that need
//! linear-convolution semantics pad with guard samples covering the filter
//! memory.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::signal::Sampled;
use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place unnormalized forward DFT.
pub fn fft_in_place(buf: &mut [Complex64]) {
    if buf.len() < 2 {
        return;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    fft.process(buf);
}

/// In-place inverse DFT including the `1/N` factor.
pub fn ifft_in_place(buf: &mut [Complex64]) {
    let n = buf.len();
    if n < 2 {
        return;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n));
    fft.process(buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|x| *x *= scale);
}

pub fn fft(input: &[Complex64]) -> Vec<Complex64> {
    let mut buf = input.to_vec();
    fft_in_place(&mut buf);
    buf
}

pub fn ifft(input: &[Complex64]) -> Vec<Complex64> {
    let mut buf = input.to_vec();
    ifft_in_place(&mut buf);
    buf
}

/// Frequency in Hz of DFT bin `k` for an `n`-point transform. Bins at or above
/// `n/2` map to negative frequencies, so the Nyquist bin sits at `-fs/2`.
pub fn bin_frequency(k: usize, n: usize, sample_rate: f64) -> f64 {
    let k = k as f64;
    let n_f = n as f64;
    if k < n_f / 2.0 {
        k * sample_rate / n_f
    } else {
        (k - n_f) * sample_rate / n_f
    }
}

/// Multiply a spectrum in place by `response` sampled on the bin grid.
pub fn shape_spectrum<F>(spectrum: &mut [Complex64], sample_rate: f64, response: F)
where
    F: Fn(f64) -> Complex64,
{
    let n = spectrum.len();
    for (k, x) in spectrum.iter_mut().enumerate() {
        *x *= response(bin_frequency(k, n, sample_rate));
    }
}

/// `IDFT(DFT(x) · H(f_k))` with circular convolution semantics.
///
/// For real [`Waveform`](super::Waveform)s the response should be Hermitian;
/// any imaginary residue is discarded.
pub fn apply_frequency_response<S, F>(signal: &S, response: F) -> Result<S>
where
    S: Sampled,
    F: Fn(f64) -> Complex64,
{
    if signal.len() < 2 {
        return Err(Error::param("signal", "needs at least two samples"));
    }
    let mut buf = signal.to_complex();
    fft_in_place(&mut buf);
    shape_spectrum(&mut buf, signal.sample_rate(), response);
    ifft_in_place(&mut buf);
    signal.rebuild_from_complex(buf)
}

/// Gaussian lowpass amplitude response with 3-dB (half-power) frequency `f3db`.
/// A non-finite or non-positive bandwidth disables the filter.
pub fn gaussian_lowpass(f3db: f64) -> impl Fn(f64) -> Complex64 {
    move |f: f64| {
        if !(f3db.is_finite() && f3db > 0.0) {
            return Complex64::new(1.0, 0.0);
        }
        let x = f / f3db;
        Complex64::new((-std::f64::consts::LN_2 / 2.0 * x * x).exp(), 0.0)
    }
}

/// Band-limited resampling by spectral zero-padding or truncation. The
/// output has `new_len` samples; amplitudes are preserved.
pub fn resample_spectrum(spectrum: &[Complex64], new_len: usize) -> Vec<Complex64> {
    let n = spectrum.len();
    let mut out = vec![Complex64::new(0.0, 0.0); new_len];
    let keep = n.min(new_len);
    // positive half incl. DC, then the negative half
    let pos = keep.div_ceil(2);
    let neg = keep / 2;
    out[..pos].copy_from_slice(&spectrum[..pos]);
    for i in 1..=neg {
        out[new_len - i] = spectrum[n - i];
    }
    // Split an unpaired Nyquist bin when growing an even-length spectrum.
    if new_len > n && n.is_multiple_of(2) {
        let nyq = spectrum[n / 2];
        out[n / 2] = nyq * 0.5;
        out[new_len - n / 2] = nyq * 0.5;
    }
    // Fold both halves onto the Nyquist bin when shrinking to an even length.
    if new_len < n && new_len.is_multiple_of(2) {
        out[new_len / 2] += spectrum[new_len / 2];
    }
    let scale = new_len as f64 / n as f64;
    out.iter_mut().for_each(|x| *x *= scale);
    out
}

/// Circularly rotate a spectrum so content at bin `k` moves to bin `k + shift`.
pub fn rotate_bins(spectrum: &mut [Complex64], shift: isize) {
    let n = spectrum.len() as isize;
    if n == 0 {
        return;
    }
    let s = shift.rem_euclid(n) as usize;
    spectrum.rotate_right(s);
}

/// Circular cross-correlation `c[l] = Σ_n received[n + l] · conj(template[n])`,
/// with `template` zero-padded to the length of `received`.
pub fn circular_xcorr(received: &[Complex64], template: &[Complex64]) -> Vec<Complex64> {
    let n = received.len();
    let mut t = vec![Complex64::new(0.0, 0.0); n];
    let m = template.len().min(n);
    t[..m].copy_from_slice(&template[..m]);
    let mut r = received.to_vec();
    fft_in_place(&mut r);
    fft_in_place(&mut t);
    for (a, b) in r.iter_mut().zip(&t) {
        *a *= b.conj();
    }
    ifft_in_place(&mut r);
    r
}

/// Lag (in samples) maximizing the circular cross-correlation magnitude of
/// `received` against `template`; `received[n + lag] ≈ template[n]`.
pub fn circular_lag(received: &[Complex64], template: &[Complex64]) -> usize {
    circular_xcorr(received, template)
        .iter()
        .enumerate()
        .fold((0usize, f64::MIN), |(bi, bv), (i, v)| {
            let m = v.norm_sqr();
            if m > bv {
                (i, m)
            } else {
                (bi, bv)
            }
        })
        .0
}

/// Power spectrum `|X_k|²` of a complex sequence.
pub fn power_spectrum(samples: &[Complex64]) -> Vec<f64> {
    fft(samples).into_iter().map(|x| x.norm_sqr()).collect()
}
