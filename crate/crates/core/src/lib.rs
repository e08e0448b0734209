//! Physical-layer simulator for directly detected 400G-class
//! inter-data-center WDM links.
//!
//! Two transmission formats are modeled end to end over dispersive,
//! amplified standard single-mode fiber:
//!
//! * PAM4 at 25.78125 GBaud with 3-tap transmit pre-equalization, level
//!   adjustment and an LMS-adapted FFE-DFE receiver, relying on optical
//!   dispersion compensation for longer reaches ([`pam4`]);
//! * DMT with per-subcarrier SNR probing and Levin-Campello bit and power
//!   loading, optionally with vestigial-sideband optical filtering ([`dmt`]).
//!
//! [`wdm`] assembles single channels into a DWDM system and runs complete
//! links; [`harness`] parses experiment files and runs sweeps and knob
//! searches.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod dmt;
mod error;
pub mod harness;
pub mod pam4;
pub mod sigcore;
pub mod wdm;

pub use error::{Error, Result};
