use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid PRBS seed: the register must not be all zeros")]
    InvalidSeed,
    #[error("unsupported order {0}")]
    UnsupportedOrder(u32),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("sequence length mismatch: {left} vs {right}")]
    Alignment { left: usize, right: usize },
    #[error("framing error: {0}")]
    Framing(String),
    #[error("sample rate {sample_rate} Hz is not an integer multiple of {symbol_rate} Hz")]
    Rate { sample_rate: f64, symbol_rate: f64 },
    #[error("drive sample {value} at index {index} outside [-1, +1]")]
    Range { index: usize, value: f64 },
    #[error("adjusted PAM4 levels are not strictly increasing: {0:?}")]
    InvalidAdjustment([f64; 4]),
    #[error("equalizer diverged: output MSE {output_mse:.4e} exceeds input MSE {input_mse:.4e}")]
    Divergence { input_mse: f64, output_mse: f64 },
    #[error("target of {target} bits is infeasible; at most {max_achievable} bits can be loaded")]
    Infeasible { target: usize, max_achievable: usize },
    #[error("channel plan spans {required:.4e} Hz but the composite band is only {available:.4e} Hz")]
    Bandwidth { required: f64, available: f64 },
    #[error("channel index {index} out of range for {count} channels")]
    ChannelIndex { index: usize, count: usize },
    #[error("OSNR target {target_db:.2} dB unreachable: amplifier ASE alone gives {achieved_db:.2} dB")]
    OsnrUnreachable { target_db: f64, achieved_db: f64 },
    #[error("channel {index}: {source}")]
    Channel {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("{0}")]
    Io(String),
    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn in_channel(self, index: usize) -> Self {
        Error::Channel {
            index,
            source: Box::new(self),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
