//! Multicarrier waveform simulation: OFDM, GFDM and WCP-COQAM modems,
//! prototype pulses, oversampled PSD estimation, a static multipath channel
//! with carrier frequency offset, and a scenario-driven Monte Carlo harness.
//!
//! The signal chain is generic over the sample scalar ([`scalar::Real`],
//! implemented for `f32` and `f64`). The aliases below fix it to `f64`,
//! which is what the harness runs on.

pub mod channel;
pub mod constellation;
pub mod error;
pub mod harness;
pub mod noise;
pub mod pulses;
pub mod scalar;
pub mod signal;
pub mod spectrum;
pub mod waveforms;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Signal = signal::ComplexSignal<f64>;
pub type Grid = waveforms::ResourceGrid<f64>;
pub type WaveFrame = waveforms::Frame<f64>;
pub type Pulse = pulses::PrototypeFilter<f64>;
pub type Channel = channel::ChannelRealization<f64>;
pub type QamConstellation = constellation::Constellation<f64>;
pub type WaveModem = waveforms::Modem<f64>;
