use statrs::function::erf::erfc;

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Gray-coded PAM4 bit error ratio in AWGN: the symbol error probability
/// `1.5·Q(d/σ)` spread over two bits, with `SNR = E_s/σ² = 5·d²/σ²` for
/// equally spaced levels.
pub fn pam4_ber_awgn(snr_linear: f64) -> f64 {
    0.75 * q_function((snr_linear / 5.0).sqrt())
}

/// Exact Gray PAM4 BER including the rarer two-level errors.
pub fn pam4_ber_awgn_exact(snr_linear: f64) -> f64 {
    let x = (snr_linear / 5.0).sqrt();
    (3.0 * q_function(x) + 2.0 * q_function(3.0 * x) - q_function(5.0 * x)) / 4.0
}

/// SNR in dB at which [`pam4_ber_awgn`] equals `ber` (bisection).
pub fn pam4_snr_for_ber(ber: f64) -> f64 {
    let (mut lo, mut hi) = (-10.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if pam4_ber_awgn(10f64.powf(mid / 10.0)) > ber {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_values() {
        assert!((q_function(0.0) - 0.5).abs() < 1e-15);
        let q3 = q_function(3.0);
        assert!((q3 / 1.349_898_031_630_094_6e-3 - 1.0).abs() < 1e-9, "{q3:e}");
    }

    #[test]
    fn approximation_close_at_high_snr() {
        let s = 10f64.powf(20.0 / 10.0);
        let r = pam4_ber_awgn(s) / pam4_ber_awgn_exact(s);
        assert!((r - 1.0).abs() < 1e-6);
    }

    #[test]
    fn inverse() {
        let snr = pam4_snr_for_ber(1e-3);
        assert!((pam4_ber_awgn(10f64.powf(snr / 10.0)) - 1e-3).abs() < 1e-12);
    }
}
