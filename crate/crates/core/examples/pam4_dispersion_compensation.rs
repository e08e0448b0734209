//! 80 km PAM4 with and without the TDCM across OSNR.

use ddlink::wdm::{run_link, LinkConfig};

fn main() -> ddlink::Result<()> {
    println!("{:>6} {:>14} {:>14}", "OSNR", "tdcm 0", "tdcm 1360");
    for osnr in [24.0, 28.0, 32.0] {
        let mut c = LinkConfig::pam4();
        c.osnr_db = Some(osnr);
        let bare = run_link(&c)?.bers()[0];
        c.tdcm_ps_nm = c.fiber.accumulated_dispersion();
        let comp = run_link(&c)?.bers()[0];
        println!("{osnr:>6.1} {bare:>14.3e} {comp:>14.3e}");
    }
    Ok(())
}
