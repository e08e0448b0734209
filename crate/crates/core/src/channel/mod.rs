//! Analog and optical impairments between the transmit DSP and the receive
//! DSP: converters, modulator, fiber, amplifiers, optical filters and the
//! photodiode.

mod amplifier;
mod fiber;
mod filter;
mod frontend;
mod modulator;
mod photodiode;

pub use amplifier::{ase_psd_for_osnr, edfa, osnr_db, AmplifierSpec, OSNR_REFERENCE_BANDWIDTH};
pub use fiber::{
    apply_dispersion, chromatic_dispersion, dispersion_phase_coefficient, fading_null_frequency,
    tdcm, FiberSpec,
};
pub use filter::{optical_filter, FilterShape, OpticalFilterSpec};
pub use frontend::{adc, agc, dac, quantize, FrontEndSpec};
pub use modulator::{intensity_modulate, modulation_depth};
pub use photodiode::photodiode;
