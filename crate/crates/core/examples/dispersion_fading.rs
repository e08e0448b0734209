//! Power fading of a double-sideband intensity-modulated signal after
//! dispersion, and its removal by a TDCM.

use num_complex::Complex64;

use ddlink::channel::{apply_dispersion, fading_null_frequency, intensity_modulate, photodiode, tdcm};
use ddlink::sigcore::{Waveform, OpticalField};

/// Small-signal RF gain of modulator → dispersion → photodiode at tone `k`.
fn rf_gain(k: usize, dl: f64, compensate: bool) -> ddlink::Result<f64> {
    let n = 4096;
    let fs = 100e9;
    let tone: Vec<f64> = (0..n)
        .map(|i| 0.02 * (std::f64::consts::TAU * (k * i) as f64 / n as f64).cos())
        .collect();
    let field: OpticalField = intensity_modulate(&Waveform::new(tone, fs)?, 1e-3, f64::INFINITY, 1550e-9)?;
    let mut f = apply_dispersion(&field, dl, 0.0)?;
    if compensate {
        f = tdcm(&f, dl)?;
    }
    let i = photodiode(&f, 1.0, 0.0, 0)?;
    let y: Complex64 = i
        .samples()
        .iter()
        .enumerate()
        .map(|(m, &v)| v * Complex64::from_polar(1.0, -std::f64::consts::TAU * (k * m) as f64 / n as f64))
        .sum();
    // back-to-back amplitude of the tone is 0.02·1e-3·n/2
    Ok(y.norm() / (0.02e-3 * n as f64 / 2.0))
}

fn main() -> ddlink::Result<()> {
    for dl in [680.0, 1360.0] {
        let nulls: Vec<String> = (0..3)
            .map(|k| format!("{:.2}", fading_null_frequency(1550e-9, dl, k) / 1e9))
            .collect();
        println!("D·L = {dl} ps/nm: fading nulls at {} GHz", nulls.join(", "));
        for k in [41, 164, 278, 328] {
            let f = k as f64 * 100e9 / 4096.0;
            println!(
                "  {:6.2} GHz  gain {:.3}  with TDCM {:.3}",
                f / 1e9,
                rf_gain(k, dl, false)?,
                rf_gain(k, dl, true)?
            );
        }
    }
    Ok(())
}
