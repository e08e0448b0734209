//! Sweep execution, CSV rows and the summary table.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::sigcore::wilson_interval;
use crate::wdm::{run_link, LinkConfig};

/// One CSV row: a (sweep point, channel, seed) outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sweep_axis: String,
    pub sweep_value: String,
    pub channel: usize,
    /// PRBS seed of the channel.
    pub seed: u64,
    pub ber: Option<f64>,
    pub bits: Option<u64>,
    pub errors: Option<u64>,
    pub pass: Option<bool>,
    /// Loaded bits per DMT symbol; empty for PAM4.
    pub achieved_rate: Option<usize>,
    pub wilson_low: Option<f64>,
    pub wilson_high: Option<f64>,
    /// `ok`, or the error that stopped this channel or point.
    pub status: String,
    #[serde(skip)]
    pub point: usize,
    #[serde(skip)]
    pub replicate: usize,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Run one link and turn it into rows; a link-level failure becomes one
/// error row per channel.
pub fn link_rows(link: &LinkConfig, axis: &str, label: &str, point: usize, replicate: usize) -> Vec<SweepRow> {
    let blank = |channel: usize, status: String| SweepRow {
        sweep_axis: axis.to_string(),
        sweep_value: label.to_string(),
        channel,
        seed: link.channel_seed(channel),
        ber: None,
        bits: None,
        errors: None,
        pass: None,
        achieved_rate: None,
        wilson_low: None,
        wilson_high: None,
        status,
        point,
        replicate,
    };
    match run_link(link) {
        Ok(report) => report
            .channels
            .iter()
            .enumerate()
            .map(|(i, ch)| match ch {
                Ok(c) => {
                    let (lo, hi) = wilson_interval(c.ber.bit_errors, c.ber.bits_compared, 1.96);
                    SweepRow {
                        ber: Some(c.ber.ber),
                        bits: Some(c.ber.bits_compared),
                        errors: Some(c.ber.bit_errors),
                        pass: Some(c.ber.pass),
                        achieved_rate: c.bits_per_symbol,
                        wilson_low: Some(lo),
                        wilson_high: Some(hi),
                        ..blank(i, "ok".into())
                    }
                }
                Err(e) => blank(i, e.to_string()),
            })
            .collect(),
        Err(e) => {
            if label.is_empty() {
                log::warn!("replicate {replicate}: {e}");
            } else {
                log::warn!("{axis} = {label}, replicate {replicate}: {e}");
            }
            (0..link.plan.channel_count).map(|i| blank(i, e.to_string())).collect()
        }
    }
}

fn label(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Run every sweep point for every replicate seed. Rows come back sorted by
/// (sweep value, channel, replicate) regardless of completion order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let points = cfg.sweep.points();
    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..cfg.replicate_seeds).map(move |r| (p, r)))
        .collect();
    let axis = cfg.sweep.axis.name();
    let mut rows: Vec<SweepRow> = jobs
        .par_iter()
        .flat_map_iter(|&(p, r)| link_rows(&cfg.point(points[p], r), axis, &label(points[p]), p, r))
        .collect();
    rows.sort_by_key(|r| (r.point, r.channel, r.replicate));
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(rows: &[SweepRow], path: &Path) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    write_csv(rows, std::io::BufWriter::new(f))
}

/// Median of the finite values; failed rows count as BER 1.
pub fn median_ber<'a>(rows: impl IntoIterator<Item = &'a SweepRow>) -> f64 {
    let mut v: Vec<f64> = rows.into_iter().map(|r| r.ber.unwrap_or(1.0)).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Per-point summary: median, min and max BER, pass fraction and mean
/// loaded rate.
pub fn summary_table(rows: &[SweepRow]) -> String {
    let mut s = String::new();
    let axis = rows.first().map(|r| r.sweep_axis.as_str()).unwrap_or("none");
    s.push_str(&format!(
        "{:>20} {:>6} {:>11} {:>11} {:>11} {:>6} {:>8}\n",
        axis, "rows", "median_ber", "min_ber", "max_ber", "pass", "rate"
    ));
    let mut i = 0;
    while i < rows.len() {
        let p = rows[i].point;
        let group: Vec<&SweepRow> = rows[i..].iter().take_while(|r| r.point == p).collect();
        i += group.len();
        let ok: Vec<&&SweepRow> = group.iter().filter(|r| r.is_ok()).collect();
        let bers = ok.iter().filter_map(|r| r.ber);
        let min = bers.clone().fold(f64::INFINITY, f64::min);
        let max = bers.fold(f64::NEG_INFINITY, f64::max);
        let passed = ok.iter().filter(|r| r.pass == Some(true)).count();
        let rates: Vec<usize> = ok.iter().filter_map(|r| r.achieved_rate).collect();
        let rate = if rates.is_empty() {
            "-".to_string()
        } else {
            format!("{:.1}", rates.iter().sum::<usize>() as f64 / rates.len() as f64)
        };
        let value = if group[0].sweep_value.is_empty() { "-" } else { &group[0].sweep_value };
        let sci = |x: f64| if x.is_finite() { format!("{x:.3e}") } else { "-".into() };
        s.push_str(&format!(
            "{:>20} {:>6} {:>11.3e} {:>11} {:>11} {:>3}/{:<2} {:>8}\n",
            value,
            group.len(),
            median_ber(group.iter().copied()),
            sci(min),
            sci(max),
            passed,
            group.len(),
            rate
        ));
        if ok.len() < group.len() {
            s.push_str(&format!("{:>20} {} row(s) failed: {}\n", "", group.len() - ok.len(), first_error(&group)));
        }
    }
    s
}

fn first_error(group: &[&SweepRow]) -> String {
    group.iter().find(|r| !r.is_ok()).map(|r| r.status.clone()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{Sweep, SweepAxis};

    fn loopback() -> ExperimentConfig {
        let mut link = LinkConfig::pam4();
        link.fiber.length_km = 0.0;
        link.bit_budget = 1 << 14;
        ExperimentConfig::new(link)
    }

    #[test]
    fn loopback_gives_one_clean_row() {
        let rows = run_experiment(&loopback()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].ber, Some(0.0));
        assert_eq!(rows[0].status, "ok");
        assert_eq!(rows[0].sweep_axis, "none");
    }

    #[test]
    fn rows_are_ordered_and_reproducible() {
        let mut cfg = loopback();
        cfg.link.plan.channel_count = 2;
        cfg.link.receiver.thermal_sigma = 8e-5;
        cfg.replicate_seeds = 2;
        cfg.sweep = Sweep {
            axis: SweepAxis::FiberLength,
            values: vec![0.0, 1.0],
        };
        let a = run_experiment(&cfg).unwrap();
        assert_eq!(a.len(), 2 * 2 * 2);
        let keys: Vec<(usize, usize, usize)> = a.iter().map(|r| (r.point, r.channel, r.replicate)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let b = run_experiment(&cfg).unwrap();
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        write_csv(&a, &mut ca).unwrap();
        write_csv(&b, &mut cb).unwrap();
        assert_eq!(ca, cb);
        let text = String::from_utf8(ca).unwrap();
        assert!(text.starts_with(
            "sweep_axis,sweep_value,channel,seed,ber,bits,errors,pass,achieved_rate,wilson_low,wilson_high,status\n"
        ));
    }

    #[test]
    fn failed_points_become_error_rows() {
        let mut cfg = loopback();
        cfg.sweep = Sweep {
            axis: SweepAxis::Osnr,
            values: vec![30.0, 90.0],
        };
        let rows = run_experiment(&cfg).unwrap();
        assert!(rows[0].is_ok());
        assert!(!rows[1].is_ok());
        assert!(rows[1].status.contains("OSNR"));
        assert!(summary_table(&rows).contains("failed"));
    }

    #[test]
    fn median_counts_failures_as_worst() {
        let mut cfg = loopback();
        cfg.sweep = Sweep {
            axis: SweepAxis::Osnr,
            values: vec![90.0],
        };
        let rows = run_experiment(&cfg).unwrap();
        assert_eq!(median_ber(&rows), 1.0);
    }
}
