//! Discrete multi-tone modem: Hermitian-symmetric OFDM with cyclic prefix,
//! clipping, per-carrier SNR probing and Levin-Campello loading.

mod estimate;
mod loading;
mod modem;
mod qam;
mod table;

pub use estimate::{one_tap_estimate, qpsk_blocks, snr_probe, ChannelEstimate, SnrProfile, SNR_CEILING_DB};
pub(crate) use estimate::{estimate_from_blocks, snr_from_blocks};
pub use loading::{
    allocation_power, gap_for_ber, levin_campello_bits, levin_campello_load, LoadingMode, DEFAULT_TARGET_BER,
};
pub use modem::{
    clip, demodulate_blocks, detect_blocks, dmt_demodulate, dmt_ifft_block, dmt_modulate, map_blocks, modulate_blocks, DmtConfig,
};
pub use qam::{qam_map, qam_demap, Constellation, MAX_QAM_BITS};
pub use table::BitLoadingTable;
