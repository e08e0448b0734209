//! DMT rate versus reach with VSB filtering, and the double-sideband
//! comparison at 80 km.

use ddlink::wdm::{run_link, FilterPlacement, LinkConfig};

fn main() -> ddlink::Result<()> {
    for km in [40.0, 80.0, 160.0, 240.0] {
        let mut c = LinkConfig::dmt();
        c.fiber.length_km = km;
        let r = run_link(&c)?;
        let ch = r.channels[0].clone()?;
        println!(
            "{km:>5} km VSB: {:6.1} Gb/s  BER {:.2e}  OSNR {:.1} dB",
            ch.line_rate / 1e9,
            ch.ber.ber,
            r.osnr_db
        );
    }
    let mut dsb = LinkConfig::dmt();
    let f = dsb.filter_mut(FilterPlacement::Demux).expect("default has a demux filter");
    f.bandwidth_3db = 60e9;
    f.center_offset = 0.0;
    let ch = run_link(&dsb)?.channels[0].clone()?;
    println!("   80 km DSB: {:6.1} Gb/s  BER {:.2e}", ch.line_rate / 1e9, ch.ber.ber);
    Ok(())
}
