//! Residual-dispersion tolerance of 50G PAM4 after 80 km, through the
//! experiment harness (a reduced version of `presets/pam4_cd_tolerance.toml`).

use ddlink::harness::{parse_config_str, run_experiment, summary_table};

fn main() -> ddlink::Result<()> {
    let cfg = parse_config_str(
        r#"
        format = "pam4"
        osnr_db = 31.0
        bit_budget = 262144
        replicate_seeds = 2
        [sweep]
        axis = "residual_dispersion"
        values = [-300.0, -200.0, -100.0, 0.0, 100.0, 200.0, 300.0]
        "#,
    )?;
    let rows = run_experiment(&cfg)?;
    print!("{}", summary_table(&rows));
    Ok(())
}
