//! OSNR after a booster, spans with inline amplifiers and a preamplifier.

use ddlink::channel::{osnr_db, AmplifierSpec};

fn main() -> ddlink::Result<()> {
    let wavelength = 1550e-9;
    // power after the booster
    let launch_dbm = 0.0;
    let span_loss_db = 16.0;
    let p = 1e-3 * 10f64.powf(launch_dbm / 10.0);
    let inline = AmplifierSpec {
        gain_db: span_loss_db,
        noise_figure_db: 5.0,
    };
    let booster = AmplifierSpec {
        gain_db: 10.0,
        noise_figure_db: 5.0,
    };
    let mut ase = booster.ase_psd(wavelength);
    println!("after booster: OSNR {:.1} dB", osnr_db(p, ase));
    for span in 1..=4 {
        // span loss and the following amplifier cancel on the signal
        ase += inline.ase_psd(wavelength);
        println!("after span {span}: OSNR {:.1} dB", osnr_db(p, ase));
    }
    Ok(())
}
