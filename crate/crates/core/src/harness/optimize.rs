//! Grid search over one link knob.

use std::fmt;
use std::str::FromStr;

use super::config::ExperimentConfig;
use super::sweep::{median_ber, run_experiment, SweepRow};
use crate::error::{Error, Result};
use crate::wdm::{FilterPlacement, LinkConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Knob {
    /// PAM4 transmit level offsets, written `a:b:c:d`.
    LevelAdjust,
    /// Demux filter center offset, Hz.
    VsbOffset,
    /// TDCM compensation, ps/nm.
    Tdcm,
}

impl Knob {
    pub fn name(self) -> &'static str {
        match self {
            Knob::LevelAdjust => "level_adjust",
            Knob::VsbOffset => "vsb_offset",
            Knob::Tdcm => "tdcm",
        }
    }

    /// Parse a comma-separated grid.
    pub fn parse_grid(self, text: &str) -> Result<Vec<KnobValue>> {
        let grid = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| self.parse_value(s))
            .collect::<Result<Vec<_>>>()?;
        if grid.is_empty() {
            return Err(Error::validation("grid", "must not be empty"));
        }
        Ok(grid)
    }

    fn parse_value(self, s: &str) -> Result<KnobValue> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::validation("grid", format!("`{t}` is not a number")))
        };
        match self {
            Knob::LevelAdjust => {
                let v = s.split(':').map(num).collect::<Result<Vec<_>>>()?;
                let a: [f64; 4] = v
                    .try_into()
                    .map_err(|_| Error::validation("grid", format!("`{s}`: level_adjust takes four values a:b:c:d")))?;
                Ok(KnobValue::Levels(a))
            }
            _ => Ok(KnobValue::Scalar(num(s)?)),
        }
    }

    /// `link` with the knob set to `value`.
    pub fn apply(self, link: &LinkConfig, value: &KnobValue) -> Result<LinkConfig> {
        let mut c = link.clone();
        match (self, value) {
            (Knob::LevelAdjust, KnobValue::Levels(a)) => c.pam4.level_adjust = *a,
            (Knob::VsbOffset, KnobValue::Scalar(v)) => {
                c.filter_mut(FilterPlacement::Demux)
                    .ok_or_else(|| Error::validation("filters", "vsb_offset needs a demux filter"))?
                    .center_offset = *v
            }
            (Knob::Tdcm, KnobValue::Scalar(v)) => c.tdcm_ps_nm = *v,
            _ => return Err(Error::validation("grid", format!("value {value} does not fit knob {}", self.name()))),
        }
        Ok(c)
    }
}

impl FromStr for Knob {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "level_adjust" => Ok(Knob::LevelAdjust),
            "vsb_offset" => Ok(Knob::VsbOffset),
            "tdcm" => Ok(Knob::Tdcm),
            _ => Err(Error::validation("knob", format!("`{s}`; expected level_adjust, vsb_offset or tdcm"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KnobValue {
    Scalar(f64),
    Levels([f64; 4]),
}

impl KnobValue {
    /// Size used to break ties toward the least intervention.
    pub fn magnitude(&self) -> f64 {
        match self {
            KnobValue::Scalar(v) => v.abs(),
            KnobValue::Levels(a) => a.iter().map(|x| x.abs()).sum(),
        }
    }
}

impl fmt::Display for KnobValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnobValue::Scalar(v) => write!(f, "{v}"),
            KnobValue::Levels(a) => write!(f, "{}:{}:{}:{}", a[0], a[1], a[2], a[3]),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Optimum {
    pub best: KnobValue,
    pub best_median_ber: f64,
    /// Median BER per grid value, in grid order.
    pub medians: Vec<(KnobValue, f64)>,
    /// Every row of every grid value; `sweep_axis` names the knob.
    pub rows: Vec<SweepRow>,
}

/// Run the experiment at every grid value and keep the one with the lowest
/// median BER over all rows; ties go to the smallest knob magnitude.
pub fn optimize_knob(cfg: &ExperimentConfig, knob: Knob, grid: &[KnobValue]) -> Result<Optimum> {
    if grid.is_empty() {
        return Err(Error::validation("grid", "must not be empty"));
    }
    let mut medians = Vec::with_capacity(grid.len());
    let mut rows = Vec::new();
    for (gi, value) in grid.iter().enumerate() {
        let mut point = cfg.clone();
        point.link = knob.apply(&cfg.link, value)?;
        let mut r = run_experiment(&point)?;
        let m = median_ber(&r);
        log::info!("{} = {value}: median BER {m:.3e}", knob.name());
        let sweep_label = |row: &SweepRow| {
            if row.sweep_value.is_empty() {
                String::new()
            } else {
                format!(";{}={}", row.sweep_axis, row.sweep_value)
            }
        };
        for row in &mut r {
            row.sweep_value = format!("{value}{}", sweep_label(row));
            row.sweep_axis = knob.name().to_string();
            row.point += gi * (cfg.sweep.points().len());
        }
        medians.push((value.clone(), m));
        rows.extend(r);
    }
    let (best, best_median_ber) = medians
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.magnitude().total_cmp(&b.0.magnitude())))
        .cloned()
        .expect("grid is nonempty");
    Ok(Optimum {
        best,
        best_median_ber,
        medians,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(
            Knob::Tdcm.parse_grid("0, 680,1360").unwrap(),
            vec![KnobValue::Scalar(0.0), KnobValue::Scalar(680.0), KnobValue::Scalar(1360.0)]
        );
        assert_eq!(
            Knob::LevelAdjust.parse_grid("0:0:0:0,0:0.02:0.04:0").unwrap()[1],
            KnobValue::Levels([0.0, 0.02, 0.04, 0.0])
        );
        assert!(Knob::LevelAdjust.parse_grid("0:1").is_err());
        assert!(Knob::Tdcm.parse_grid("").is_err());
        assert!(Knob::Tdcm.parse_grid("x").is_err());
        assert!("gain".parse::<Knob>().is_err());
    }

    #[test]
    fn single_value_grid_returns_it() {
        let mut link = LinkConfig::pam4();
        link.fiber.length_km = 0.0;
        link.bit_budget = 1 << 14;
        let cfg = ExperimentConfig::new(link);
        let o = optimize_knob(&cfg, Knob::Tdcm, &[KnobValue::Scalar(0.0)]).unwrap();
        assert_eq!(o.best, KnobValue::Scalar(0.0));
        assert_eq!(o.rows.len(), 1);
        assert_eq!(o.rows[0].sweep_axis, "tdcm");
    }

    #[test]
    fn ties_prefer_small_magnitude() {
        let mut link = LinkConfig::pam4();
        link.fiber.length_km = 0.0;
        link.bit_budget = 1 << 14;
        let cfg = ExperimentConfig::new(link);
        let grid = Knob::Tdcm.parse_grid("-20,10,-5").unwrap();
        let o = optimize_knob(&cfg, Knob::Tdcm, &grid).unwrap();
        assert!(o.medians.iter().all(|m| m.1 == 0.0));
        assert_eq!(o.best, KnobValue::Scalar(-5.0));
    }

    #[test]
    fn tdcm_search_finds_full_compensation() {
        let mut link = LinkConfig::pam4();
        link.osnr_db = Some(30.0);
        link.bit_budget = 1 << 16;
        let cfg = ExperimentConfig::new(link);
        let grid = Knob::Tdcm.parse_grid("0,340,680,1020,1360,1700").unwrap();
        let o = optimize_knob(&cfg, Knob::Tdcm, &grid).unwrap();
        assert_eq!(o.best, KnobValue::Scalar(1360.0), "{:?}", o.medians);
    }

    #[test]
    fn level_adjust_helps_on_square_law_link() {
        let mut link = LinkConfig::pam4();
        link.tdcm_ps_nm = 1360.0;
        link.osnr_db = Some(28.0);
        let cfg = ExperimentConfig::new(link);
        let grid = Knob::LevelAdjust.parse_grid("0:0:0:0,0:-0.2:-0.3:0").unwrap();
        let o = optimize_knob(&cfg, Knob::LevelAdjust, &grid).unwrap();
        assert_ne!(o.best, KnobValue::Levels([0.0; 4]));
        assert!(o.best_median_ber <= o.medians[0].1);
    }

    #[test]
    fn wrong_value_kind_is_rejected() {
        let link = LinkConfig::pam4();
        assert!(Knob::Tdcm.apply(&link, &KnobValue::Levels([0.0; 4])).is_err());
    }
}
