//! Probe an electrical channel with a high-frequency roll-off, load it with
//! Levin-Campello and check the BER the gap approximation promised.

use num_complex::Complex64;

use ddlink::dmt::{
    dmt_demodulate, dmt_modulate, gap_for_ber, levin_campello_load, modulate_blocks, one_tap_estimate, qpsk_blocks,
    snr_probe, DmtConfig, LoadingMode,
};
use ddlink::sigcore::{add_awgn, apply_frequency_response, ber_count, BitSequence, Prbs, Waveform};

fn main() -> ddlink::Result<()> {
    let cfg = DmtConfig {
        clipping_ratio: f64::INFINITY,
        ..DmtConfig::default()
    };
    let channel = |w: &Waveform, seed| {
        let rolled = apply_frequency_response(w, |f| Complex64::new((-0.35 * (f / 15e9).powi(2)).exp(), 0.0))?;
        add_awgn(&rolled, 3e-3, seed)
    };

    let profile = snr_probe(|w| channel(w, 1), &cfg, 128, 2)?;
    let target = 3.8e-3;
    let table = levin_campello_load(&profile, cfg.first_subcarrier, gap_for_ber(target)?, LoadingMode::default())?;
    for k in (0..table.bits.len()).step_by(32) {
        println!(
            "subcarrier {:3}: SNR {:5.1} dB  {} bits  power {:.2}",
            table.first_subcarrier + k,
            profile.snr_db()[k],
            table.bits[k],
            table.power[k]
        );
    }
    println!("{} bits/symbol = {:.1} Gb/s", table.total_bits(), table.line_rate(&cfg) / 1e9);

    let training: Vec<Vec<Complex64>> = qpsk_blocks(16, cfg.active_count(), 3)
        .into_iter()
        .map(|b| b.iter().zip(&table.power).map(|(v, p)| v * p.sqrt()).collect())
        .collect();
    let est = one_tap_estimate(&channel(&modulate_blocks(&training, &cfg)?, 4)?, &training, &cfg)?;
    let bits = BitSequence::new(Prbs::from_integer_seed(23, 5)?.take(400 * table.total_bits()).collect())?;
    let rx = dmt_demodulate(&channel(&dmt_modulate(&bits, &table, &cfg)?, 6)?, &table, &cfg, &est.gains)?;
    let r = ber_count(&bits, &rx, target)?;
    println!("measured BER {:.2e} over {} bits (target {target:.1e})", r.ber, r.bits_compared);
    Ok(())
}
