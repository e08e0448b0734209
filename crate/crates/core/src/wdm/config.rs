//! Declarative description of one simulated link.

use serde::{Deserialize, Serialize};

use super::plan::ChannelPlan;
use crate::channel::{AmplifierSpec, FiberSpec, FilterShape, FrontEndSpec, OpticalFilterSpec};
use crate::dmt::{DmtConfig, LoadingMode, DEFAULT_TARGET_BER};
use crate::error::{Error, Result};
use crate::pam4::{Pam4RxConfig, Pam4TxConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Pam4,
    Dmt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplifierPlacement {
    /// After the multiplexer.
    Booster,
    /// Between fiber spans; needs `span_length_km`.
    Inline,
    /// Before the demultiplexer.
    Preamp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacedAmplifier {
    pub placement: AmplifierPlacement,
    /// Omitted for inline and preamp stages: the gain then equals the loss of
    /// the span before it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain_db: Option<f64>,
    pub noise_figure_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterPlacement {
    /// Per channel, right after the modulator (e.g. a transmit-side VSB filter).
    Transmitter,
    /// Interleaver passband applied per channel when multiplexing.
    Interleaver,
    /// Receive-side channel selection (and VSB when offset).
    Demux,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Gaussian,
    SuperGaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacedFilter {
    pub placement: FilterPlacement,
    pub shape: ShapeKind,
    #[serde(default = "one")]
    pub order: u32,
    pub bandwidth_3db: f64,
    #[serde(default)]
    pub center_offset: f64,
}

fn one() -> u32 {
    1
}

impl PlacedFilter {
    pub fn super_gaussian(placement: FilterPlacement, order: u32, bandwidth_3db: f64, center_offset: f64) -> Self {
        Self {
            placement,
            shape: ShapeKind::SuperGaussian,
            order,
            bandwidth_3db,
            center_offset,
        }
    }

    pub fn spec(&self) -> OpticalFilterSpec {
        OpticalFilterSpec {
            shape: match self.shape {
                ShapeKind::Gaussian => FilterShape::Gaussian,
                ShapeKind::SuperGaussian => FilterShape::SuperGaussian(self.order),
            },
            bandwidth_3db: self.bandwidth_3db,
            center_offset: self.center_offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LaserConfig {
    /// Average optical power per channel at the modulator output.
    pub power_dbm: f64,
    pub extinction_ratio_db: f64,
    /// Peak drive amplitude in `(0, 1]` of the modulator input range.
    pub drive_swing: f64,
}

impl Default for LaserConfig {
    fn default() -> Self {
        Self {
            power_dbm: 0.0,
            extinction_ratio_db: 30.0,
            drive_swing: 0.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReceiverConfig {
    /// A/W.
    pub responsivity: f64,
    /// Thermal current noise, A rms per simulation sample.
    pub thermal_sigma: f64,
    /// Optical power set by the receive VOA; omitted means no attenuator.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_dbm: Option<f64>,
}

impl Default for ReceiverConfig {
    fn default() -> Self {
        Self {
            responsivity: 0.8,
            thermal_sigma: 3e-6,
            power_dbm: Some(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Pam4Settings {
    pub tx: Pam4TxConfig,
    pub rx: Pam4RxConfig,
    /// Offsets added to the transmit levels; the receiver slices midway
    /// between the adjusted levels.
    pub level_adjust: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DmtSettings {
    pub modem: DmtConfig,
    pub loading: LoadingMode,
    /// Target BER from which the SNR gap is derived.
    pub target_ber: f64,
    pub probe_symbols: usize,
    pub training_symbols: usize,
}

impl Default for DmtSettings {
    fn default() -> Self {
        Self {
            modem: DmtConfig::default(),
            loading: LoadingMode::default(),
            target_ber: DEFAULT_TARGET_BER,
            probe_symbols: 128,
            training_symbols: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontEnds {
    pub dac: FrontEndSpec,
    pub adc: FrontEndSpec,
}

impl FrontEnds {
    pub fn pam4() -> Self {
        let fe = FrontEndSpec {
            resolution_bits: 8,
            analog_bandwidth_3db: 20e9,
            full_scale: 1.0,
            samples_per_symbol: 4,
        };
        Self { dac: fe.clone(), adc: fe }
    }

    pub fn dmt() -> Self {
        let fe = FrontEndSpec {
            resolution_bits: 8,
            analog_bandwidth_3db: 18e9,
            full_scale: 1.0,
            samples_per_symbol: 2,
        };
        Self { dac: fe.clone(), adc: fe }
    }
}

impl Default for FrontEnds {
    fn default() -> Self {
        Self::pam4()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinkConfig {
    pub format: Format,
    pub plan: ChannelPlan,
    pub fiber: FiberSpec,
    /// Splits the fiber into equal spans of at most this length when inline
    /// amplifiers are present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span_length_km: Option<f64>,
    pub amplifiers: Vec<PlacedAmplifier>,
    pub filters: Vec<PlacedFilter>,
    /// Dispersion removed by the TDCM, ps/nm; 0 leaves it out.
    pub tdcm_ps_nm: f64,
    /// Noise-load to this OSNR (0.1 nm, both polarizations) before the demux.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub osnr_db: Option<f64>,
    /// Composite sample rate as a multiple of the channel rate; chosen from
    /// the plan when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composite_multiple: Option<usize>,
    pub laser: LaserConfig,
    pub receiver: ReceiverConfig,
    pub pam4: Pam4Settings,
    pub dmt: DmtSettings,
    pub front_ends: FrontEnds,
    pub prbs_order: u32,
    pub seed: u64,
    /// Per-channel PRBS and receiver-noise seeds; derived from `seed` when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel_seeds: Option<Vec<u64>>,
    /// Bits compared per channel (at least).
    pub bit_budget: usize,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self::pam4()
    }
}

/// Attach a config path to a module-level parameter error.
fn at(prefix: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::InvalidParameter { name, reason } => Error::validation(format!("{prefix}.{name}"), reason),
        Error::UnsupportedOrder(b) => Error::validation(prefix, format!("unsupported order {b}")),
        other => other,
    }
}

impl LinkConfig {
    /// 50G PAM4 over 80 km SSMF, uncompensated, booster and preamp.
    pub fn pam4() -> Self {
        Self {
            format: Format::Pam4,
            plan: ChannelPlan::default(),
            fiber: FiberSpec::ssmf(80.0),
            span_length_km: None,
            amplifiers: vec![
                PlacedAmplifier {
                    placement: AmplifierPlacement::Booster,
                    gain_db: Some(10.0),
                    noise_figure_db: 5.0,
                },
                PlacedAmplifier {
                    placement: AmplifierPlacement::Preamp,
                    gain_db: None,
                    noise_figure_db: 5.0,
                },
            ],
            filters: vec![PlacedFilter::super_gaussian(FilterPlacement::Demux, 3, 35e9, 0.0)],
            tdcm_ps_nm: 0.0,
            osnr_db: None,
            composite_multiple: None,
            laser: LaserConfig::default(),
            receiver: ReceiverConfig::default(),
            pam4: Pam4Settings::default(),
            dmt: DmtSettings::default(),
            front_ends: FrontEnds::pam4(),
            prbs_order: 15,
            seed: 1,
            channel_seeds: None,
            bit_budget: 1 << 18,
        }
    }

    /// DMT over 80 km SSMF spans with inline amplification and a receive-side
    /// VSB filter.
    pub fn dmt() -> Self {
        Self {
            format: Format::Dmt,
            span_length_km: Some(80.0),
            amplifiers: vec![
                PlacedAmplifier {
                    placement: AmplifierPlacement::Booster,
                    gain_db: Some(5.0),
                    noise_figure_db: 5.0,
                },
                PlacedAmplifier {
                    placement: AmplifierPlacement::Inline,
                    gain_db: None,
                    noise_figure_db: 5.0,
                },
                PlacedAmplifier {
                    placement: AmplifierPlacement::Preamp,
                    gain_db: None,
                    noise_figure_db: 5.0,
                },
            ],
            filters: vec![PlacedFilter::super_gaussian(FilterPlacement::Demux, 2, 35e9, 21e9)],
            laser: LaserConfig {
                power_dbm: 0.0,
                drive_swing: 0.7,
                ..LaserConfig::default()
            },
            dmt: DmtSettings {
                // clipping and signal-ASE beat noise cost about 2 dB over
                // the gap approximation
                loading: LoadingMode::RateAdaptive { margin_db: 2.0 },
                ..DmtSettings::default()
            },
            front_ends: FrontEnds::dmt(),
            ..Self::pam4()
        }
    }

    pub fn default_for(format: Format) -> Self {
        match format {
            Format::Pam4 => Self::pam4(),
            Format::Dmt => Self::dmt(),
        }
    }

    pub fn amplifier(&self, placement: AmplifierPlacement) -> Option<&PlacedAmplifier> {
        self.amplifiers.iter().find(|a| a.placement == placement)
    }

    pub fn filter(&self, placement: FilterPlacement) -> Option<&PlacedFilter> {
        self.filters.iter().find(|f| f.placement == placement)
    }

    /// Mutable access to the filter at `placement`, if any.
    pub fn filter_mut(&mut self, placement: FilterPlacement) -> Option<&mut PlacedFilter> {
        self.filters.iter_mut().find(|f| f.placement == placement)
    }

    /// Simulation rate of one channel.
    pub fn channel_rate(&self) -> f64 {
        let sps = self.front_ends.dac.samples_per_symbol as f64;
        match self.format {
            Format::Pam4 => self.pam4.tx.baud * sps,
            Format::Dmt => self.dmt.modem.sample_rate * sps,
        }
    }

    pub fn composite_rate(&self) -> f64 {
        let m = self
            .composite_multiple
            .unwrap_or_else(|| self.plan.composite_multiple(self.channel_rate()));
        self.channel_rate() * m as f64
    }

    /// Fiber spans: one unless inline amplifiers split the fiber.
    pub fn span_count(&self) -> usize {
        match (self.amplifier(AmplifierPlacement::Inline), self.span_length_km) {
            (Some(_), Some(s)) if self.fiber.length_km > 0.0 => {
                ((self.fiber.length_km / s) - 1e-9).ceil().max(1.0) as usize
            }
            _ => 1,
        }
    }

    pub fn channel_seed(&self, index: usize) -> u64 {
        match &self.channel_seeds {
            Some(s) => s[index],
            None => crate::sigcore::derive_seed(self.seed, 1, index as u64),
        }
    }

    /// Checks every field; errors name the offending field by its path.
    pub fn validate(&self) -> Result<()> {
        self.plan.validate().map_err(at("plan"))?;
        self.fiber.validate().map_err(at("fiber"))?;
        if let Some(s) = self.span_length_km {
            if !(s > 0.0) {
                return Err(Error::validation("span_length_km", "must be positive"));
            }
        }
        for placement in [AmplifierPlacement::Booster, AmplifierPlacement::Inline, AmplifierPlacement::Preamp] {
            if self.amplifiers.iter().filter(|a| a.placement == placement).count() > 1 {
                return Err(Error::validation("amplifiers", format!("more than one {placement:?} stage")));
            }
        }
        if self.amplifier(AmplifierPlacement::Inline).is_some() && self.span_length_km.is_none() {
            return Err(Error::validation("span_length_km", "required with an inline amplifier"));
        }
        for (i, a) in self.amplifiers.iter().enumerate() {
            let gain = match (a.placement, a.gain_db) {
                (AmplifierPlacement::Booster, None) => {
                    return Err(Error::validation(format!("amplifiers[{i}].gain_db"), "booster needs a gain"))
                }
                (_, g) => g.unwrap_or(0.0),
            };
            AmplifierSpec {
                gain_db: gain,
                noise_figure_db: a.noise_figure_db,
            }
            .validate()
            .map_err(at(&format!("amplifiers[{i}]")))?;
        }
        for placement in [FilterPlacement::Transmitter, FilterPlacement::Interleaver, FilterPlacement::Demux] {
            if self.filters.iter().filter(|f| f.placement == placement).count() > 1 {
                return Err(Error::validation("filters", format!("more than one {placement:?} filter")));
            }
        }
        for (i, f) in self.filters.iter().enumerate() {
            f.spec().validate().map_err(at(&format!("filters[{i}]")))?;
        }
        if !self.tdcm_ps_nm.is_finite() {
            return Err(Error::validation("tdcm_ps_nm", "must be finite"));
        }
        if let Some(o) = self.osnr_db {
            if !o.is_finite() {
                return Err(Error::validation("osnr_db", "must be finite"));
            }
        }
        if self.composite_multiple == Some(0) {
            return Err(Error::validation("composite_multiple", "must be at least 1"));
        }
        if !(self.laser.power_dbm.is_finite()) {
            return Err(Error::validation("laser.power_dbm", "must be finite"));
        }
        if !(self.laser.extinction_ratio_db > 0.0) {
            return Err(Error::validation("laser.extinction_ratio_db", "must be positive"));
        }
        if !(self.laser.drive_swing > 0.0 && self.laser.drive_swing <= 1.0) {
            return Err(Error::validation("laser.drive_swing", "must lie in (0, 1]"));
        }
        if !(self.receiver.responsivity > 0.0) {
            return Err(Error::validation("receiver.responsivity", "must be positive"));
        }
        if !(self.receiver.thermal_sigma >= 0.0) {
            return Err(Error::validation("receiver.thermal_sigma", "must be >= 0"));
        }
        if let Some(p) = self.receiver.power_dbm {
            if !p.is_finite() {
                return Err(Error::validation("receiver.power_dbm", "must be finite"));
            }
        }
        self.front_ends.dac.validate().map_err(at("front_ends.dac"))?;
        self.front_ends.adc.validate().map_err(at("front_ends.adc"))?;
        if ![7, 15, 23, 31].contains(&self.prbs_order) {
            return Err(Error::validation("prbs_order", "must be one of 7, 15, 23, 31"));
        }
        if let Some(s) = &self.channel_seeds {
            if s.len() != self.plan.channel_count {
                return Err(Error::validation("channel_seeds", "needs one seed per channel"));
            }
        }
        if self.bit_budget == 0 {
            return Err(Error::validation("bit_budget", "must be positive"));
        }
        match self.format {
            Format::Pam4 => self.validate_pam4()?,
            Format::Dmt => self.validate_dmt()?,
        }
        let rate = self.channel_rate();
        if self.plan.occupied_bandwidth() > self.composite_rate() {
            return Err(Error::validation(
                "composite_multiple",
                format!("composite rate {:e} Hz is below the plan bandwidth", self.composite_rate()),
            ));
        }
        if let Some(f) = self.filter(FilterPlacement::Transmitter) {
            if f.bandwidth_3db.is_finite() && f.bandwidth_3db >= rate {
                return Err(Error::validation("filters.bandwidth_3db", "transmit filter exceeds the channel rate"));
            }
        }
        Ok(())
    }

    fn validate_pam4(&self) -> Result<()> {
        self.pam4.tx.validate().map_err(at("pam4.tx"))?;
        self.pam4.rx.validate().map_err(at("pam4.rx"))?;
        crate::pam4::level_adjust(&self.pam4.tx.levels, &self.pam4.level_adjust)
            .map_err(|e| Error::validation("pam4.level_adjust", e.to_string()))?;
        let symbols = self.bit_budget / 2;
        if symbols <= self.pam4.rx.training_symbols {
            return Err(Error::validation("bit_budget", "must exceed the equalizer training length"));
        }
        Ok(())
    }

    fn validate_dmt(&self) -> Result<()> {
        self.dmt.modem.validate().map_err(at("dmt.modem"))?;
        if !(self.dmt.target_ber > 0.0 && self.dmt.target_ber < 0.5) {
            return Err(Error::validation("dmt.target_ber", "must lie in (0, 0.5)"));
        }
        if self.dmt.probe_symbols < 8 {
            return Err(Error::validation("dmt.probe_symbols", "needs at least 8"));
        }
        if self.dmt.training_symbols < 1 {
            return Err(Error::validation("dmt.training_symbols", "needs at least 1"));
        }
        match self.dmt.loading {
            LoadingMode::RateAdaptive { margin_db } if !margin_db.is_finite() => {
                Err(Error::validation("dmt.loading.margin_db", "must be finite"))
            }
            _ => Ok(()),
        }
    }
}
