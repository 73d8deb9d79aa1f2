//! OFDM, GFDM and WCP-COQAM transceivers.
//!
//! Subcarrier rows are stored in centred order: row `i` of a `K`-row grid
//! carries baseband frequency `i - K/2` subcarrier spacings, so a contiguous
//! allocation is symmetric around DC.

mod bank;
mod coqam;
mod config;
mod gfdm;
mod grid;
mod modem;
mod ofdm;
mod window;

pub use config::{
    allocate, equalize_spectral_efficiency, spectral_efficiency, AllocationMode, EqualizeKnob,
    Equalized, Scheme, WaveformConfig,
};
pub use grid::{Frame, Overhead, ResourceGrid};
pub use modem::{
    coqam_demodulate, gfdm_demodulate, gfdm_modulate, ofdm_demodulate, ofdm_modulate,
    wcp_coqam_modulate, Modem,
};
pub use window::{apply_edge_window, hann_ramp};

/// Signed frequency (in subcarrier spacings) of centred row `row`.
#[inline]
pub fn row_frequency(row: usize, k: usize) -> isize {
    row as isize - (k / 2) as isize
}

/// DFT bin of centred row `row` in a `k`-point transform.
#[inline]
pub fn row_bin(row: usize, k: usize) -> usize {
    row_frequency(row, k).rem_euclid(k as isize) as usize
}
