use crate::error::{Error, Result};

/// 3-tap transmit FIR `y[n] = t0·x[n+1] + t1·x[n] + t2·x[n-1]` (zero beyond
/// the edges), rescaled so the output peak magnitude equals the input peak.
pub fn pre_equalize(symbols: &[f64], taps: &[f64]) -> Result<Vec<f64>> {
    if taps.len() != 3 {
        return Err(Error::param("taps", format!("expected 3 taps, got {}", taps.len())));
    }
    let n = symbols.len();
    let at = |i: isize| -> f64 {
        if i < 0 || i as usize >= n {
            0.0
        } else {
            symbols[i as usize]
        }
    };
    let mut out: Vec<f64> = (0..n as isize)
        .map(|i| taps[0] * at(i + 1) + taps[1] * at(i) + taps[2] * at(i - 1))
        .collect();
    let peak_in = symbols.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let peak_out = out.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if peak_out > 0.0 {
        let g = peak_in / peak_out;
        out.iter_mut().for_each(|x| *x *= g);
    }
    Ok(out)
}

/// Magnitude of the 3-tap response at normalized frequency `nu` (cycles per
/// symbol).
pub fn pre_eq_magnitude(taps: &[f64; 3], nu: f64) -> f64 {
    let w = 2.0 * std::f64::consts::PI * nu;
    let re = taps[0] * w.cos() + taps[1] + taps[2] * w.cos();
    let im = taps[0] * w.sin() - taps[2] * w.sin();
    (re * re + im * im).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_spike_is_identity() {
        let s = vec![3.0, -1.0, 1.0, -3.0, 1.0];
        assert_eq!(pre_equalize(&s, &[0.0, 1.0, 0.0]).unwrap(), s);
    }

    #[test]
    fn hand_convolution() {
        // before rescale: [0.9, 1.0, -1.1]; peak 1.1 → scale 1/1.1
        let out = pre_equalize(&[1.0, 1.0, -1.0], &[-0.1, 1.0, -0.1]).unwrap();
        let expect = [0.9 / 1.1, 1.0 / 1.1, -1.0];
        for (a, b) in out.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        let out = pre_equalize(&[1.0, 1.0, -1.0, 3.0, -3.0], &[-0.1, 1.0, -0.1]).unwrap();
        // raw: [0.9, 1.0, -1.4, 3.4, -3.3], peak 3.4 → scale 3/3.4
        let raw = [0.9, 1.0, -1.4, 3.4, -3.3];
        for (a, b) in out.iter().zip(raw) {
            assert!((a - b * 3.0 / 3.4).abs() < 1e-12);
        }
    }

    #[test]
    fn nyquist_boost() {
        for a in [0.05, 0.1, 0.2] {
            let t = [-a, 1.0, -a];
            let ratio = pre_eq_magnitude(&t, 0.5) / pre_eq_magnitude(&t, 0.0);
            assert!((ratio - (1.0 + 2.0 * a) / (1.0 - 2.0 * a)).abs() < 1e-12);
        }
    }

    #[test]
    fn wrong_tap_count() {
        assert!(pre_equalize(&[1.0], &[1.0, 0.0]).is_err());
    }
}
