//! Grid search over PAM4 level adjustment on a compensated 80 km link.

use ddlink::harness::{optimize_knob, ExperimentConfig, Knob};
use ddlink::wdm::LinkConfig;

fn main() -> ddlink::Result<()> {
    let mut link = LinkConfig::pam4();
    link.tdcm_ps_nm = 1360.0;
    link.osnr_db = Some(28.0);
    let cfg = ExperimentConfig::new(link);
    let grid = Knob::LevelAdjust.parse_grid("0:0:0:0, 0:0.1:0.2:0, 0:-0.1:-0.2:0, 0:-0.2:-0.3:0, 0:-0.3:-0.4:0, 0:-0.3:-0.5:0")?;
    let best = optimize_knob(&cfg, Knob::LevelAdjust, &grid)?;
    for (v, m) in &best.medians {
        println!("{v:>20}: median BER {m:.3e}");
    }
    println!("best: {} ({:.3e})", best.best, best.best_median_ber);
    Ok(())
}
