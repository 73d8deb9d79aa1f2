use num_complex::Complex;

use crate::error::{Error, Result};
use crate::pulses::PrototypeFilter;
use crate::scalar::Real;
use crate::signal::Dft;

use super::coqam::CoqamCore;
use super::config::{Scheme, WaveformConfig};
use super::gfdm::GfdmCore;
use super::grid::{Frame, Overhead, ResourceGrid};
use super::ofdm::OfdmCore;
use super::row_bin;
use super::window::apply_edge_window;

/// Bins with `|H|` below this fraction of the peak are flagged as singular.
const ZF_SINGULAR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
enum Core<T: Real> {
    Ofdm(OfdmCore<T>),
    Gfdm(GfdmCore<T>),
    Coqam(CoqamCore<T>),
}

/// Transmitter/receiver pair for one configuration. Built once, then shared
/// read-only across frames.
#[derive(Debug, Clone)]
pub struct Modem<T: Real> {
    cfg: WaveformConfig,
    mask: Vec<bool>,
    rows: Vec<(usize, usize)>,
    pulse: Option<PrototypeFilter<T>>,
    block_dft: Dft<T>,
    core: Core<T>,
}

impl<T: Real> Modem<T> {
    pub fn new(cfg: &WaveformConfig) -> Result<Self> {
        cfg.validate()?;
        let k = cfg.subcarriers;
        let m = cfg.slots;
        let mask = cfg.active_mask()?;
        let rows = (0..k).filter(|&r| mask[r]).map(|r| (r, row_bin(r, k))).collect();
        let (pulse, core) = match cfg.scheme {
            Scheme::Ofdm => (None, Core::Ofdm(OfdmCore::new(k)?)),
            Scheme::Gfdm => {
                let p = cfg.pulse.build::<T>(k, m)?;
                let core = Core::Gfdm(GfdmCore::new(&p, k, m)?);
                (Some(p), core)
            }
            Scheme::WcpCoqam => {
                let p = cfg.pulse.build::<T>(k, m)?;
                let core = Core::Coqam(CoqamCore::new(&p, k, m)?);
                (Some(p), core)
            }
        };
        Ok(Self {
            cfg: cfg.clone(),
            mask,
            rows,
            pulse,
            block_dft: Dft::new(cfg.payload_len())?,
            core,
        })
    }

    pub fn config(&self) -> &WaveformConfig {
        &self.cfg
    }

    pub fn pulse(&self) -> Option<&PrototypeFilter<T>> {
        self.pulse.as_ref()
    }

    pub fn active_mask(&self) -> &[bool] {
        &self.mask
    }

    /// Polyphase gains the GFDM zero-forcing receiver had to discard.
    pub fn singular_gains(&self) -> usize {
        match &self.core {
            Core::Gfdm(g) => g.singular_gains(),
            _ => 0,
        }
    }

    /// Periodic payload blocks before CP and windowing.
    pub fn payload_blocks(&self, grid: &ResourceGrid<T>) -> Result<Vec<Vec<Complex<T>>>> {
        grid.check_shape(&self.cfg)?;
        Ok(match &self.core {
            Core::Ofdm(c) => c.synthesize(grid, &self.rows),
            Core::Gfdm(c) => vec![c.synthesize(grid, &self.rows)],
            Core::Coqam(c) => vec![c.synthesize(grid, &self.rows)],
        })
    }

    pub fn modulate(&self, grid: &ResourceGrid<T>) -> Result<Frame<T>> {
        let blocks = self.payload_blocks(grid)?;
        let (cp, w) = (self.cfg.cp_len, self.cfg.window_len);
        let mut samples = Vec::with_capacity(self.cfg.frame_len());
        let mut overhead = Overhead::default();
        for b in &blocks {
            samples.extend(apply_edge_window(b, cp, w));
            overhead.cp += cp;
            overhead.window += 2 * w;
            overhead.payload += b.len();
        }
        Frame::new(samples, overhead)
    }

    /// Receives one frame. `channel` is the frequency response over one
    /// payload block (`K` bins for OFDM, `K*M` otherwise).
    pub fn demodulate(
        &self,
        rx: &[Complex<T>],
        channel: Option<&[Complex<T>]>,
    ) -> Result<ResourceGrid<T>> {
        let frame_len = self.cfg.frame_len();
        if rx.len() < frame_len {
            return Err(Error::ShapeError(format!(
                "received {} samples, frame needs {frame_len}",
                rx.len()
            )));
        }
        let block_len = self.cfg.payload_len();
        if let Some(h) = channel {
            if h.len() != block_len {
                return Err(Error::ShapeError(format!(
                    "channel response has {} bins, block has {block_len}",
                    h.len()
                )));
            }
            self.check_singular(h)?;
        }
        let (cp, w) = (self.cfg.cp_len, self.cfg.window_len);
        let stride = block_len + cp + 2 * w;
        let n_blocks = match self.cfg.scheme {
            Scheme::Ofdm => self.cfg.slots,
            _ => 1,
        };
        let blocks: Vec<Vec<Complex<T>>> = (0..n_blocks)
            .map(|b| {
                let start = b * stride + w + cp;
                let mut y = rx[start..start + block_len].to_vec();
                if let Some(h) = channel {
                    self.block_dft.forward_in_place(&mut y);
                    for (v, hv) in y.iter_mut().zip(h) {
                        *v /= *hv;
                    }
                    self.block_dft.inverse_in_place(&mut y);
                }
                y
            })
            .collect();
        let mut out = ResourceGrid::zeros(self.mask.clone(), self.cfg.slots);
        match &self.core {
            Core::Ofdm(c) => c.detect(&blocks, &mut out, &self.rows),
            Core::Gfdm(c) => c.detect(&blocks[0], &mut out, &self.rows),
            Core::Coqam(c) => c.detect(&blocks[0], &mut out, &self.rows),
        }
        Ok(out)
    }

    fn check_singular(&self, h: &[Complex<T>]) -> Result<()> {
        let peak = h.iter().map(|v| v.norm()).fold(T::zero(), T::max);
        let tol = peak * T::lit(ZF_SINGULAR_TOLERANCE);
        let used: Vec<usize> = match self.cfg.scheme {
            Scheme::Ofdm => self.rows.iter().map(|&(_, b)| b).collect(),
            _ => (0..h.len()).collect(),
        };
        let bins: Vec<usize> = used.into_iter().filter(|&b| h[b].norm() <= tol).collect();
        if bins.is_empty() {
            Ok(())
        } else {
            Err(Error::EqualizationSingular { bins })
        }
    }
}

fn require(cfg: &WaveformConfig, scheme: Scheme) -> Result<()> {
    if cfg.scheme != scheme {
        return Err(Error::InvalidParameter(format!(
            "config is for {}, expected {}",
            cfg.scheme, scheme
        )));
    }
    Ok(())
}

pub fn ofdm_modulate<T: Real>(grid: &ResourceGrid<T>, cfg: &WaveformConfig) -> Result<Frame<T>> {
    require(cfg, Scheme::Ofdm)?;
    Modem::new(cfg)?.modulate(grid)
}

pub fn gfdm_modulate<T: Real>(grid: &ResourceGrid<T>, cfg: &WaveformConfig) -> Result<Frame<T>> {
    require(cfg, Scheme::Gfdm)?;
    Modem::new(cfg)?.modulate(grid)
}

pub fn wcp_coqam_modulate<T: Real>(grid: &ResourceGrid<T>, cfg: &WaveformConfig) -> Result<Frame<T>> {
    require(cfg, Scheme::WcpCoqam)?;
    Modem::new(cfg)?.modulate(grid)
}

pub fn ofdm_demodulate<T: Real>(
    frame: &Frame<T>,
    cfg: &WaveformConfig,
    channel: Option<&[Complex<T>]>,
) -> Result<ResourceGrid<T>> {
    require(cfg, Scheme::Ofdm)?;
    Modem::new(cfg)?.demodulate(frame.samples(), channel)
}

pub fn gfdm_demodulate<T: Real>(
    frame: &Frame<T>,
    cfg: &WaveformConfig,
    channel: Option<&[Complex<T>]>,
) -> Result<ResourceGrid<T>> {
    require(cfg, Scheme::Gfdm)?;
    Modem::new(cfg)?.demodulate(frame.samples(), channel)
}

pub fn coqam_demodulate<T: Real>(
    frame: &Frame<T>,
    cfg: &WaveformConfig,
    channel: Option<&[Complex<T>]>,
) -> Result<ResourceGrid<T>> {
    require(cfg, Scheme::WcpCoqam)?;
    Modem::new(cfg)?.demodulate(frame.samples(), channel)
}
