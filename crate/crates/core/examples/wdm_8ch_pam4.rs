//! Eight interleaved PAM4 channels on a 50 GHz grid over 80 km.

use ddlink::wdm::{run_link, FilterPlacement, LinkConfig, PlacedFilter};

fn main() -> ddlink::Result<()> {
    let mut c = LinkConfig::pam4();
    c.tdcm_ps_nm = 1360.0;
    c.osnr_db = Some(29.0);
    c.plan.channel_count = 8;
    c.filters.push(PlacedFilter::super_gaussian(FilterPlacement::Interleaver, 3, 44e9, 0.0));
    let r = run_link(&c)?;
    println!("composite rate {:.1} GS/s, OSNR {:.1} dB", r.composite_rate / 1e9, r.osnr_db);
    for (i, ch) in r.channels.iter().enumerate() {
        match ch {
            Ok(ch) => println!(
                "channel {i} ({:+.0} GHz): BER {:.2e} ({} errors)",
                c.plan.offset(i) / 1e9,
                ch.ber.ber,
                ch.ber.bit_errors
            ),
            Err(e) => println!("channel {i}: {e}"),
        }
    }
    Ok(())
}
