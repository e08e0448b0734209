//! Signal types, PRBS sources, spectral filtering, noise and error counting.

mod ber;
mod noise;
mod prbs;
mod signal;
pub mod spectrum;

pub use ber::{ber_count, wilson_interval, BerReport, HD_FEC_THRESHOLD, KR4_FEC_THRESHOLD};
pub use noise::{add_awgn, derive_seed, rng, splitmix64, AddNoise, SimRng};
pub(crate) use noise::add_complex_noise;
pub use prbs::{prbs_generate, Prbs};
pub use signal::{
    BitSequence, OpticalField, Sampled, Waveform, C_BAND_MAX, C_BAND_MIN, PLANCK, SPEED_OF_LIGHT,
};
pub use spectrum::{apply_frequency_response, gaussian_lowpass};
