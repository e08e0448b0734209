//! Experiment files: a TOML document holding the link (any `LinkConfig`
//! field at top level, layered over the defaults of its `format`) plus the
//! sweep definition.
//!
//! ```toml
//! format = "pam4"
//! tdcm_ps_nm = 1360.0
//! osnr_db = 31.0
//! replicate_seeds = 5
//! output_path = "cd.csv"
//!
//! [sweep]
//! axis = "residual_dispersion"
//! values = [-300.0, -150.0, 0.0, 150.0, 300.0]
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::wdm::{Format, LinkConfig};

/// Which `LinkConfig` knob a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    #[default]
    None,
    /// Net dispersion left after the TDCM, ps/nm.
    ResidualDispersion,
    /// Total fiber length, km.
    FiberLength,
    /// Noise-loaded OSNR, dB in 0.1 nm.
    Osnr,
    ChannelCount,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::None => "none",
            SweepAxis::ResidualDispersion => "residual_dispersion",
            SweepAxis::FiberLength => "fiber_length",
            SweepAxis::Osnr => "osnr",
            SweepAxis::ChannelCount => "channel_count",
        }
    }

    /// `base` with the axis set to `value`.
    pub fn apply(self, base: &LinkConfig, value: f64) -> LinkConfig {
        let mut c = base.clone();
        match self {
            SweepAxis::None => {}
            SweepAxis::ResidualDispersion => c.tdcm_ps_nm = c.fiber.accumulated_dispersion() - value,
            SweepAxis::FiberLength => c.fiber.length_km = value,
            SweepAxis::Osnr => c.osnr_db = Some(value),
            SweepAxis::ChannelCount => {
                c.plan.channel_count = value as usize;
                c.channel_seeds = None;
            }
        }
        c
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

impl Sweep {
    pub fn validate(&self) -> Result<()> {
        if self.axis == SweepAxis::None {
            return Ok(());
        }
        if self.values.is_empty() {
            return Err(Error::validation("sweep.values", "must not be empty"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("sweep.values", "must be finite"));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation("sweep.values", "must be strictly increasing"));
        }
        if self.axis == SweepAxis::ChannelCount && self.values.iter().any(|v| v.fract() != 0.0 || *v < 1.0) {
            return Err(Error::validation("sweep.values", "channel counts must be positive integers"));
        }
        Ok(())
    }

    /// Points to run; a single unnamed point when there is no sweep.
    pub fn points(&self) -> Vec<Option<f64>> {
        match self.axis {
            SweepAxis::None => vec![None],
            _ => self.values.iter().map(|&v| Some(v)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub link: LinkConfig,
    pub sweep: Sweep,
    pub output_path: Option<PathBuf>,
    /// Independent repetitions per point; repetition `r` offsets every seed by `r`.
    pub replicate_seeds: usize,
}

impl ExperimentConfig {
    pub fn new(link: LinkConfig) -> Self {
        Self {
            link,
            sweep: Sweep::default(),
            output_path: None,
            replicate_seeds: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.link.validate()?;
        self.sweep.validate()?;
        if self.replicate_seeds < 1 {
            return Err(Error::validation("replicate_seeds", "must be at least 1"));
        }
        for v in self.sweep.points().into_iter().flatten() {
            self.sweep.axis.apply(&self.link, v).validate()?;
        }
        Ok(())
    }

    /// The link for sweep point `value` and repetition `replicate`.
    pub fn point(&self, value: Option<f64>, replicate: usize) -> LinkConfig {
        let mut c = match value {
            Some(v) => self.sweep.axis.apply(&self.link, v),
            None => self.link.clone(),
        };
        let r = replicate as u64;
        c.seed = c.seed.wrapping_add(r);
        if let Some(s) = &mut c.channel_seeds {
            s.iter_mut().for_each(|x| *x = x.wrapping_add(r));
        }
        c
    }
}

/// Parse an experiment document. Unknown keys and out-of-range values are
/// validation errors naming the field.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let mut doc: Table = text.parse().map_err(|e: toml::de::Error| Error::validation(span_key(&e), e.message()))?;

    let sweep = match doc.remove("sweep") {
        Some(v) => Sweep::deserialize(v).map_err(|e| Error::validation("sweep", e.to_string()))?,
        None => Sweep::default(),
    };
    let output_path = match doc.remove("output_path") {
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => return Err(Error::validation("output_path", "must be a string")),
        None => None,
    };
    let replicate_seeds = match doc.remove("replicate_seeds") {
        Some(Value::Integer(n)) if n >= 1 => n as usize,
        Some(_) => return Err(Error::validation("replicate_seeds", "must be an integer ≥ 1")),
        None => 1,
    };

    let format = match doc.get("format") {
        Some(v) => Format::deserialize(v.clone()).map_err(|e| Error::validation("format", e.to_string()))?,
        None => Format::Pam4,
    };
    let defaults = Value::try_from(LinkConfig::default_for(format)).map_err(|e| Error::validation("format", e.to_string()))?;
    let Value::Table(mut merged) = defaults else {
        unreachable!("LinkConfig serializes to a table")
    };
    log_defaults(&merged, &doc, "");
    merge(&mut merged, doc);
    let link = LinkConfig::deserialize(Value::Table(merged)).map_err(|e| Error::validation(field_of(&e), e.message()))?;

    let cfg = ExperimentConfig {
        link,
        sweep,
        output_path,
        replicate_seeds,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config_str(&text)
}

/// Overlay `user` onto `base`: tables merge key by key, anything else
/// (arrays included) replaces the default wholesale.
fn merge(base: &mut Table, user: Table) {
    for (k, v) in user {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(u)) => merge(b, u),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn log_defaults(defaults: &Table, user: &Table, prefix: &str) {
    for (k, v) in defaults {
        let path = join(prefix, k);
        match (v, user.get(k)) {
            (Value::Table(d), Some(Value::Table(u))) => log_defaults(d, u, &path),
            (_, Some(_)) => {}
            (v, None) => log::info!("default {path} = {v}"),
        }
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

/// Field named by a deserialization error, e.g. "unknown field `foo`".
fn field_of(e: &toml::de::Error) -> String {
    let msg = e.message();
    if let Some(start) = msg.find('`') {
        if let Some(len) = msg[start + 1..].find('`') {
            return msg[start + 1..start + 1 + len].to_string();
        }
    }
    "config".into()
}

fn span_key(e: &toml::de::Error) -> String {
    match e.span() {
        Some(s) => format!("config (byte {})", s.start),
        None => "config".into(),
    }
}
