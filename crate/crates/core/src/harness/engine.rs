use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex;
use rayon::prelude::*;

use crate::channel::{self, ChannelRealization, TapDelayProfile};
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::noise::{add_noise, Rng, RNG_ALGORITHM};
use crate::signal::{ComplexSignal, Dft, BASE_SAMPLE_RATE};
use crate::spectrum::{average_power, frame_power, interpolate, oobe_metrics, OobeMetrics, PsdEstimate};
use crate::waveforms::{
    equalize_spectral_efficiency, spectral_efficiency, EqualizeKnob, Equalized, Modem, ResourceGrid, Scheme,
    WaveformConfig,
};

use super::scenario::{ChannelModel, Experiment, PsdSpan, Scenario, SeMode};

/// Frames evaluated per parallel batch.
const BATCH: usize = 32;

const PSD_STREAM: u64 = 1;
const SER_STREAM: u64 = 2;

/// Per-frame RNG stream. The CFO value is deliberately not part of the key,
/// so every offset sees the same payloads and noise.
fn stream(purpose: u64, scheme: Scheme, point: usize, frame: usize) -> u64 {
    let s = Scheme::ALL.iter().position(|&x| x == scheme).unwrap_or(0) as u64;
    (purpose << 60) | (s << 52) | ((point as u64 & 0xf_ffff) << 32) | (frame as u64 & 0xffff_ffff)
}

/// Configuration actually simulated for one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub config: WaveformConfig,
    pub eta: f64,
    pub adjustment: Option<Equalized>,
}

/// Applies the scenario's spectral-efficiency mode.
///
/// `equal_cp` matches the block schemes to OFDM by lengthening their CP;
/// `equal_subcarriers` matches OFDM to the block schemes by changing its
/// number of active subcarriers.
pub fn resolve_configs(s: &Scenario) -> Result<Vec<Resolved>> {
    s.schemes
        .iter()
        .map(|&scheme| {
            let cfg = s.config(scheme);
            let adjustment = match s.se_mode {
                SeMode::Unequal => None,
                SeMode::Equal(EqualizeKnob::CpLength) if scheme.is_block() => Some(equalize_spectral_efficiency(
                    &s.config(Scheme::Ofdm),
                    &cfg,
                    EqualizeKnob::CpLength,
                )?),
                SeMode::Equal(EqualizeKnob::ActiveSubcarriers) if !scheme.is_block() => {
                    Some(equalize_spectral_efficiency(
                        &s.config(Scheme::Gfdm),
                        &cfg,
                        EqualizeKnob::ActiveSubcarriers,
                    )?)
                }
                SeMode::Equal(_) => None,
            };
            let config = adjustment.as_ref().map_or(cfg, |a| a.config.clone());
            Ok(Resolved {
                eta: spectral_efficiency(&config),
                config,
                adjustment,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdOutcome {
    pub resolved: Resolved,
    pub psd: PsdEstimate,
    pub oobe: OobeMetrics,
    /// Samples per interpolated frame.
    pub frame_len: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SerRow {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub cfo_eps: f64,
    pub ser: f64,
    pub errors: u64,
    pub symbols: u64,
    pub frames: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultSet {
    pub scenario: Scenario,
    pub psd: Vec<PsdOutcome>,
    pub ser: Vec<SerRow>,
    pub ser_configs: Vec<Resolved>,
    pub channel: Option<ChannelRealization<f64>>,
}

fn with_context<T>(s: &Scenario, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Scenario { .. } => e,
        other => Error::Scenario {
            id: s.id.clone(),
            message: other.to_string(),
        },
    })
}

pub fn run(s: &Scenario) -> Result<ResultSet> {
    match s.experiment {
        Experiment::Psd => run_psd(s),
        Experiment::Ser => run_ser(s),
    }
}

pub fn run_psd(s: &Scenario) -> Result<ResultSet> {
    with_context(s, psd_inner(s))
}

fn psd_inner(s: &Scenario) -> Result<ResultSet> {
    if s.experiment != Experiment::Psd {
        return Err(Error::InvalidParameter("run_psd needs experiment = psd".into()));
    }
    s.validate()?;
    let spec = s.interpolator();
    let mut out = Vec::new();
    for r in resolve_configs(s)? {
        let cfg = &r.config;
        let modem = Modem::<f64>::new(cfg)?;
        let qam = Constellation::<f64>::qam(cfg.qam_order)?;
        let base_len = match s.psd_span {
            PsdSpan::Frame => cfg.frame_len(),
            PsdSpan::Payload => cfg.payload_len() * if cfg.scheme.is_block() { 1 } else { cfg.slots },
        };
        let hi_len = interpolate(&ComplexSignal::<f64>::at_base_rate(vec![Complex::new(0.0, 0.0); base_len])?, &spec)?.len();
        let plan = Dft::<f64>::new(hi_len)?;
        let one = |i: usize| -> Result<Vec<f64>> {
            let mut rng = Rng::with_stream(s.seed, stream(PSD_STREAM, cfg.scheme, 0, i));
            let (grid, _) = ResourceGrid::random(cfg, &qam, &mut rng)?;
            let x = match s.psd_span {
                PsdSpan::Frame => modem.modulate(&grid)?.signal,
                PsdSpan::Payload => ComplexSignal::at_base_rate(modem.payload_blocks(&grid)?.concat())?,
            };
            let y = interpolate(&x, &spec)?;
            Ok(frame_power(y.samples(), &plan))
        };
        let mut powers = Vec::with_capacity(s.n_mc);
        for start in (0..s.n_mc).step_by(BATCH) {
            let end = (start + BATCH).min(s.n_mc);
            let batch: Vec<Vec<f64>> = (start..end).into_par_iter().map(one).collect::<Result<_>>()?;
            powers.extend(batch);
        }
        let psd = average_power(powers, BASE_SAMPLE_RATE * spec.rate as f64, BASE_SAMPLE_RATE / cfg.subcarriers as f64)?;
        let bands = cfg.active_bands()?;
        let band = (bands[0].0, bands[bands.len() - 1].1);
        let oobe = oobe_metrics(&psd, band, &s.offsets)?;
        out.push(PsdOutcome {
            resolved: r,
            psd,
            oobe,
            frame_len: hi_len,
        });
    }
    Ok(ResultSet {
        scenario: s.clone(),
        psd: out,
        ser: Vec::new(),
        ser_configs: Vec::new(),
        channel: None,
    })
}

/// Channel realization used by a scenario; drawn once from the scenario seed.
pub fn scenario_channel(s: &Scenario) -> Option<ChannelRealization<f64>> {
    match s.channel {
        ChannelModel::Ideal => None,
        ChannelModel::Cost207Ht12 => Some(channel::realize(&TapDelayProfile::cost207_ht12(), s.seed)),
        ChannelModel::Cost207Ht6 => Some(channel::realize(&TapDelayProfile::cost207_ht6(), s.seed)),
    }
}

/// Symbol-error link for one resolved configuration.
pub struct SerLink<'a> {
    modem: Modem<f64>,
    qam: Constellation<f64>,
    channel: Option<&'a ChannelRealization<f64>>,
    response: Option<Vec<Complex<f64>>>,
    seed: u64,
}

impl<'a> SerLink<'a> {
    pub fn new(cfg: &WaveformConfig, channel: Option<&'a ChannelRealization<f64>>, seed: u64) -> Result<Self> {
        let response = match channel {
            Some(h) => Some(channel::freq_response(h, cfg.payload_len())?),
            None => None,
        };
        Ok(Self {
            modem: Modem::new(cfg)?,
            qam: Constellation::qam(cfg.qam_order)?,
            channel,
            response,
            seed,
        })
    }

    /// Symbol errors and symbol count of frame `frame` at grid point
    /// `snr_idx`. `cfo = None` skips the CFO stage altogether. Noise is
    /// scaled for Es/N0 = `snr_db` per data symbol.
    pub fn frame(&self, snr_idx: usize, snr_db: f64, cfo: Option<f64>, frame: usize) -> Result<(u64, u64)> {
        let cfg = self.modem.config();
        let mut rng = Rng::with_stream(self.seed, stream(SER_STREAM, cfg.scheme, snr_idx, frame));
        let (grid, labels) = ResourceGrid::random(cfg, &self.qam, &mut rng)?;
        let tx = self.modem.modulate(&grid)?;
        let mut y = match self.channel {
            Some(h) => channel::apply_channel_slice(tx.samples(), h),
            None => tx.samples().to_vec(),
        };
        if let Some(eps) = cfo {
            channel::apply_cfo_slice(&mut y, eps, cfg.subcarriers);
        }
        add_noise(&mut y, snr_db, 1.0, &mut rng);
        let est = self.modem.demodulate(&y, self.response.as_deref())?;
        let errors = est
            .active_symbols()
            .iter()
            .zip(&labels)
            .filter(|(v, l)| self.qam.decide(**v) != **l)
            .count();
        Ok((errors as u64, labels.len() as u64))
    }

    /// Runs frames until `error_target` errors or `frame_cap` frames. The
    /// stopping point is found by scanning frames in index order, so the
    /// result does not depend on the thread count.
    pub fn point(
        &self,
        snr_idx: usize,
        snr_db: f64,
        cfo: Option<f64>,
        error_target: u64,
        frame_cap: usize,
    ) -> Result<(u64, u64, usize)> {
        let (mut errors, mut symbols, mut frames) = (0u64, 0u64, 0usize);
        while frames < frame_cap && errors < error_target {
            let end = (frames + BATCH).min(frame_cap);
            let batch: Vec<(u64, u64)> = (frames..end)
                .into_par_iter()
                .map(|i| self.frame(snr_idx, snr_db, cfo, i))
                .collect::<Result<_>>()?;
            for (e, n) in batch {
                errors += e;
                symbols += n;
                frames += 1;
                if errors >= error_target {
                    break;
                }
            }
        }
        Ok((errors, symbols, frames))
    }
}

pub fn run_ser(s: &Scenario) -> Result<ResultSet> {
    with_context(s, ser_inner(s))
}

fn ser_inner(s: &Scenario) -> Result<ResultSet> {
    if s.experiment != Experiment::Ser {
        return Err(Error::InvalidParameter("run_ser needs experiment = ser".into()));
    }
    s.validate()?;
    let h = scenario_channel(s);
    let configs = resolve_configs(s)?;
    let mut rows = Vec::new();
    for r in &configs {
        let link = SerLink::new(&r.config, h.as_ref(), s.seed)?;
        for (si, &snr) in s.snr_grid.iter().enumerate() {
            for &eps in &s.cfo_eps {
                let (errors, symbols, frames) = link.point(si, snr, Some(eps), s.error_target as u64, s.frame_cap)?;
                rows.push(SerRow {
                    scheme: r.config.scheme,
                    snr_db: snr,
                    cfo_eps: eps,
                    ser: errors as f64 / symbols as f64,
                    errors,
                    symbols,
                    frames,
                });
            }
        }
    }
    Ok(ResultSet {
        scenario: s.clone(),
        psd: Vec::new(),
        ser: rows,
        ser_configs: configs,
        channel: h,
    })
}

pub fn ser_csv(rows: &[SerRow]) -> String {
    let mut out = String::from("scheme,snr_db,cfo_eps,ser,errors,symbols\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.8e},{},{}",
            r.scheme, r.snr_db, r.cfo_eps, r.ser, r.errors, r.symbols
        );
    }
    out
}

fn describe(out: &mut String, r: &Resolved) {
    let c = &r.config;
    let _ = writeln!(out, "[{}]", c.scheme);
    let _ = writeln!(out, "subcarriers = {}", c.subcarriers);
    let _ = writeln!(out, "guards = {}", c.guards);
    let _ = writeln!(out, "active_subcarriers = {}", c.active_subcarriers());
    let _ = writeln!(out, "slots = {}", c.slots);
    let _ = writeln!(out, "cp_len = {}", c.cp_len);
    let _ = writeln!(out, "window_len = {}", c.window_len);
    if c.scheme.is_block() {
        let _ = writeln!(out, "pulse = {}", c.pulse.family.name());
        let _ = writeln!(out, "rolloff = {}", c.pulse.rolloff);
    }
    let _ = writeln!(out, "qam_order = {}", c.qam_order);
    let _ = writeln!(out, "allocation = {}", c.allocation.name());
    let _ = writeln!(out, "frame_len = {}", c.frame_len());
    let _ = writeln!(out, "eta = {}", r.eta);
    if let Some(a) = &r.adjustment {
        let _ = writeln!(
            out,
            "equalized = {} {} -> {} (eta {} -> {}, reference {})",
            a.knob.name(),
            a.knob_before,
            a.knob_after,
            a.eta_before,
            a.eta_after,
            a.eta_ref
        );
    }
}

impl ResultSet {
    pub fn meta(&self) -> String {
        let s = &self.scenario;
        let mut out = String::new();
        let _ = writeln!(out, "# mcwave {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "rng = {RNG_ALGORITHM}");
        let _ = writeln!(out, "seed = {}", s.seed);
        let _ = writeln!(out, "\n[scenario]");
        out.push_str(&s.to_text());
        for p in &self.psd {
            out.push('\n');
            describe(&mut out, &p.resolved);
            let _ = writeln!(out, "n_avg = {}", p.psd.n_avg);
            let _ = writeln!(out, "interpolated_len = {}", p.frame_len);
            let _ = writeln!(out, "band = {}, {}", p.oobe.band.0, p.oobe.band.1);
            let _ = writeln!(out, "oob_ratio_db = {}", p.oobe.oob_ratio_db);
            for l in &p.oobe.levels {
                let _ = writeln!(
                    out,
                    "psd_at_{}df = {} (lower {}, upper {})",
                    l.offset, l.db, l.lower_db, l.upper_db
                );
            }
        }
        for r in &self.ser_configs {
            out.push('\n');
            describe(&mut out, r);
        }
        if let Some(h) = &self.channel {
            let _ = writeln!(out, "\n[channel]");
            let _ = writeln!(out, "profile = {}", h.profile_name());
            let _ = writeln!(out, "seed = {}", h.seed());
            let taps: Vec<String> = h.taps().iter().map(|t| format!("{}{:+}j", t.re, t.im)).collect();
            let _ = writeln!(out, "taps = {}", taps.join(", "));
        }
        out
    }

    /// Writes `psd_<scheme>.csv`, `ser.csv` and `meta.txt` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for p in &self.psd {
            std::fs::write(dir.join(format!("psd_{}.csv", p.resolved.config.scheme)), p.psd.to_csv())?;
        }
        if !self.ser.is_empty() {
            std::fs::write(dir.join("ser.csv"), ser_csv(&self.ser))?;
        }
        std::fs::write(dir.join("meta.txt"), self.meta())?;
        Ok(())
    }

    pub fn psd_for(&self, scheme: Scheme) -> Option<&PsdOutcome> {
        self.psd.iter().find(|p| p.resolved.config.scheme == scheme)
    }
}
