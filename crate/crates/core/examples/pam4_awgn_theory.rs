//! Back-to-back PAM4 in white Gaussian noise against the Gray-coded formula.

use ddlink::pam4::theory::pam4_ber_awgn;
use ddlink::pam4::{pam4_demap, pam4_map, NOMINAL_LEVELS, NOMINAL_THRESHOLDS};
use ddlink::sigcore::{add_awgn, ber_count, BitSequence, Prbs, Waveform};

fn main() -> ddlink::Result<()> {
    let bits = BitSequence::new(Prbs::from_integer_seed(23, 1)?.take(1 << 21).collect())?;
    let symbols = Waveform::new(pam4_map(&bits, &NOMINAL_LEVELS)?, 1.0)?;
    println!("{:>8} {:>12} {:>12}", "SNR dB", "simulated", "theory");
    for snr_db in [12.0, 14.0, 16.0, 18.0, 20.0] {
        let snr = 10f64.powf(snr_db / 10.0);
        // mean symbol energy of ±1, ±3 is 5
        let rx = add_awgn(&symbols, (5.0 / snr).sqrt(), 7)?;
        let detected = pam4_demap(rx.samples(), &NOMINAL_THRESHOLDS, &NOMINAL_LEVELS)?;
        let r = ber_count(&bits, &detected, 1e-3)?;
        println!("{snr_db:>8.1} {:>12.3e} {:>12.3e}", r.ber, pam4_ber_awgn(snr));
    }
    Ok(())
}
