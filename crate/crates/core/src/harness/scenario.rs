use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pulses::{PulseFamily, PulseSpec};
use crate::spectrum::InterpolatorSpec;
use crate::waveforms::{AllocationMode, EqualizeKnob, Scheme, WaveformConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Psd,
    Ser,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Psd => "psd",
            Experiment::Ser => "ser",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "psd" => Ok(Experiment::Psd),
            "ser" => Ok(Experiment::Ser),
            other => Err(Error::InvalidParameter(format!("unknown experiment `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeMode {
    Unequal,
    Equal(EqualizeKnob),
}

impl SeMode {
    pub fn name(self) -> &'static str {
        match self {
            SeMode::Unequal => "unequal",
            SeMode::Equal(EqualizeKnob::CpLength) => "equal_cp",
            SeMode::Equal(EqualizeKnob::ActiveSubcarriers) => "equal_subcarriers",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "unequal" => Ok(SeMode::Unequal),
            "equal_cp" => Ok(SeMode::Equal(EqualizeKnob::CpLength)),
            "equal_subcarriers" => Ok(SeMode::Equal(EqualizeKnob::ActiveSubcarriers)),
            other => Err(Error::InvalidParameter(format!("unknown se_mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelModel {
    Ideal,
    Cost207Ht12,
    Cost207Ht6,
}

impl ChannelModel {
    pub fn name(self) -> &'static str {
        match self {
            ChannelModel::Ideal => "ideal",
            ChannelModel::Cost207Ht12 => "cost207_ht12",
            ChannelModel::Cost207Ht6 => "cost207_ht6",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ideal" | "awgn" => Ok(ChannelModel::Ideal),
            "cost207_ht12" | "cost207" => Ok(ChannelModel::Cost207Ht12),
            "cost207_ht6" => Ok(ChannelModel::Cost207Ht6),
            other => Err(Error::InvalidParameter(format!("unknown channel `{other}`"))),
        }
    }
}

/// Samples fed to the periodogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdSpan {
    /// Whole transmitted frame, CP and window ramps included.
    Frame,
    /// Periodic payload only.
    Payload,
}

impl PsdSpan {
    pub fn name(self) -> &'static str {
        match self {
            PsdSpan::Frame => "frame",
            PsdSpan::Payload => "payload",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "frame" => Ok(PsdSpan::Frame),
            "payload" => Ok(PsdSpan::Payload),
            other => Err(Error::InvalidParameter(format!("unknown psd_span `{other}`"))),
        }
    }
}

/// One experiment. Waveform fields start from the base parameter set; a
/// scenario file only lists what it changes.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub family: String,
    pub experiment: Experiment,
    pub se_mode: SeMode,
    pub schemes: Vec<Scheme>,
    pub pulse: PulseFamily,
    pub rolloff: f64,
    pub subcarriers: usize,
    pub guards: usize,
    pub slots: usize,
    pub cp_len: usize,
    pub window_len: usize,
    pub qam_order: usize,
    pub allocation: AllocationMode,
    pub interp_rate: usize,
    pub interp_span: usize,
    pub interp_rolloff: f64,
    pub truncate: bool,
    pub psd_span: PsdSpan,
    pub offsets: Vec<f64>,
    pub n_mc: usize,
    pub snr_grid: Vec<f64>,
    pub cfo_eps: Vec<f64>,
    pub channel: ChannelModel,
    pub error_target: usize,
    pub frame_cap: usize,
    pub seed: u64,
}

pub const KEYS: [&str; 27] = [
    "id",
    "family",
    "experiment",
    "se_mode",
    "schemes",
    "pulse",
    "rolloff",
    "subcarriers",
    "guards",
    "slots",
    "cp_len",
    "window_len",
    "qam_order",
    "allocation",
    "interp_rate",
    "interp_span",
    "interp_rolloff",
    "truncate",
    "psd_span",
    "offsets",
    "n_mc",
    "snr_grid",
    "cfo_eps",
    "channel",
    "error_target",
    "frame_cap",
    "seed",
];

pub const DEFAULT_SEED: u64 = 2024;
pub const DESK_PSD_FRAMES: usize = 100;
pub const FULL_PSD_FRAMES: usize = 900;

impl Scenario {
    pub fn base(id: &str, experiment: Experiment) -> Self {
        let w = WaveformConfig::base(Scheme::Ofdm);
        let i = InterpolatorSpec::default();
        Self {
            id: id.to_string(),
            family: id.to_string(),
            experiment,
            se_mode: SeMode::Unequal,
            schemes: Scheme::ALL.to_vec(),
            pulse: w.pulse.family,
            rolloff: w.pulse.rolloff,
            subcarriers: w.subcarriers,
            guards: w.guards,
            slots: w.slots,
            cp_len: w.cp_len,
            window_len: w.window_len,
            qam_order: w.qam_order,
            allocation: w.allocation,
            interp_rate: i.rate,
            interp_span: i.span,
            interp_rolloff: i.rolloff,
            truncate: i.truncate,
            psd_span: PsdSpan::Frame,
            offsets: vec![2.0, 5.0, 10.0],
            n_mc: DESK_PSD_FRAMES,
            snr_grid: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            cfo_eps: vec![0.0, 0.05, 0.10],
            channel: ChannelModel::Cost207Ht12,
            error_target: 200,
            frame_cap: 100,
            seed: DEFAULT_SEED,
        }
    }

    /// Waveform parameters for one scheme before any equalization.
    pub fn config(&self, scheme: Scheme) -> WaveformConfig {
        WaveformConfig {
            scheme,
            subcarriers: self.subcarriers,
            guards: self.guards,
            slots: self.slots,
            cp_len: self.cp_len,
            window_len: self.window_len,
            pulse: PulseSpec {
                rolloff: self.rolloff,
                ..PulseSpec::of(self.pulse)
            },
            qam_order: self.qam_order,
            allocation: self.allocation,
        }
    }

    pub fn interpolator(&self) -> InterpolatorSpec {
        InterpolatorSpec {
            rate: self.interp_rate,
            span: self.interp_span,
            rolloff: self.interp_rolloff,
            truncate: self.truncate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Scenario { id: self.id.clone(), message: m });
        if self.id.is_empty() || self.id.contains(['/', '\\']) || self.id.starts_with('.') {
            return bad(format!("invalid id `{}`", self.id));
        }
        if self.schemes.is_empty() {
            return bad("no schemes selected".into());
        }
        for &s in &self.schemes {
            let cfg = self.config(s);
            let check = cfg.validate().and_then(|_| {
                if s.is_block() {
                    cfg.pulse.build::<f64>(cfg.subcarriers, cfg.slots).map(|_| ())
                } else {
                    Ok(())
                }
            });
            if let Err(e) = check {
                return bad(e.to_string());
            }
        }
        if let Err(e) = self.interpolator().validate() {
            return bad(e.to_string());
        }
        match self.experiment {
            Experiment::Psd => {
                if self.n_mc == 0 {
                    return bad("n_mc must be >= 1".into());
                }
            }
            Experiment::Ser => {
                if self.snr_grid.is_empty() || self.cfo_eps.is_empty() {
                    return bad("SER scenarios need non-empty snr_grid and cfo_eps".into());
                }
                if self.snr_grid.iter().any(|s| s.is_nan()) || self.cfo_eps.iter().any(|e| !e.is_finite()) {
                    return bad("snr_grid and cfo_eps must be numbers".into());
                }
                if self.frame_cap == 0 || self.error_target == 0 {
                    return bad("error_target and frame_cap must be >= 1".into());
                }
            }
        }
        Ok(())
    }

    /// Parses the `key = value` format. Lines starting with `#` and blank
    /// lines are ignored; unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Self::base("", Experiment::Psd);
        let mut seen: Vec<&str> = Vec::new();
        let mut family_set = false;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::ManifestError(format!("line {}: expected `key = value`", no + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            let key = KEYS
                .iter()
                .copied()
                .find(|&x| x == k)
                .ok_or_else(|| Error::ManifestError(format!("line {}: unknown key `{k}`", no + 1)))?;
            if seen.contains(&key) {
                return Err(Error::ManifestError(format!("line {}: repeated key `{k}`", no + 1)));
            }
            seen.push(key);
            s.set(key, v)
                .map_err(|e| Error::ManifestError(format!("line {}: {k}: {e}", no + 1)))?;
            family_set |= key == "family";
        }
        if s.id.is_empty() {
            return Err(Error::ManifestError("scenario has no `id`".into()));
        }
        if !family_set {
            s.family = s.id.clone();
        }
        s.validate()?;
        Ok(s)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "id" => self.id = v.to_string(),
            "family" => self.family = v.to_string(),
            "experiment" => self.experiment = Experiment::parse(v)?,
            "se_mode" => self.se_mode = SeMode::parse(v)?,
            "schemes" => self.schemes = list(v, Scheme::parse)?,
            "pulse" => self.pulse = PulseFamily::parse(v)?,
            "rolloff" => self.rolloff = num(v)?,
            "subcarriers" => self.subcarriers = num(v)?,
            "guards" => self.guards = num(v)?,
            "slots" => self.slots = num(v)?,
            "cp_len" => self.cp_len = num(v)?,
            "window_len" => self.window_len = num(v)?,
            "qam_order" => self.qam_order = num(v)?,
            "allocation" => self.allocation = AllocationMode::parse(v)?,
            "interp_rate" => self.interp_rate = num(v)?,
            "interp_span" => self.interp_span = num(v)?,
            "interp_rolloff" => self.interp_rolloff = num(v)?,
            "truncate" => self.truncate = num(v)?,
            "psd_span" => self.psd_span = PsdSpan::parse(v)?,
            "offsets" => self.offsets = list(v, num)?,
            "n_mc" => self.n_mc = num(v)?,
            "snr_grid" => self.snr_grid = list(v, num)?,
            "cfo_eps" => self.cfo_eps = list(v, num)?,
            "channel" => self.channel = ChannelModel::parse(v)?,
            "error_target" => self.error_target = num(v)?,
            "frame_cap" => self.frame_cap = num(v)?,
            "seed" => self.seed = num(v)?,
            _ => unreachable!("key list and setter disagree"),
        }
        Ok(())
    }

    /// Serializes every field; `parse(to_text())` reproduces the scenario.
    pub fn to_text(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let schemes = self.schemes.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        let rows: [(&str, String); 27] = [
            ("id", self.id.clone()),
            ("family", self.family.clone()),
            ("experiment", self.experiment.name().into()),
            ("se_mode", self.se_mode.name().into()),
            ("schemes", schemes),
            ("pulse", self.pulse.name().into()),
            ("rolloff", self.rolloff.to_string()),
            ("subcarriers", self.subcarriers.to_string()),
            ("guards", self.guards.to_string()),
            ("slots", self.slots.to_string()),
            ("cp_len", self.cp_len.to_string()),
            ("window_len", self.window_len.to_string()),
            ("qam_order", self.qam_order.to_string()),
            ("allocation", self.allocation.name().into()),
            ("interp_rate", self.interp_rate.to_string()),
            ("interp_span", self.interp_span.to_string()),
            ("interp_rolloff", self.interp_rolloff.to_string()),
            ("truncate", self.truncate.to_string()),
            ("psd_span", self.psd_span.name().into()),
            ("offsets", join(&self.offsets)),
            ("n_mc", self.n_mc.to_string()),
            ("snr_grid", join(&self.snr_grid)),
            ("cfo_eps", join(&self.cfo_eps)),
            ("channel", self.channel.name().into()),
            ("error_target", self.error_target.to_string()),
            ("frame_cap", self.frame_cap.to_string()),
            ("seed", self.seed.to_string()),
        ];
        for (k, v) in rows {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

fn num<V: std::str::FromStr>(v: &str) -> Result<V> {
    v.parse::<V>()
        .map_err(|_| Error::InvalidParameter(format!("cannot parse `{v}`")))
}

fn list<V>(v: &str, f: impl Fn(&str) -> Result<V>) -> Result<Vec<V>> {
    v.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(f)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut s = Scenario::base("x", Experiment::Ser);
        s.se_mode = SeMode::Equal(EqualizeKnob::ActiveSubcarriers);
        s.snr_grid = vec![6.0, 8.5, f64::INFINITY];
        s.schemes = vec![Scheme::Gfdm];
        s.allocation = AllocationMode::NonContiguous;
        s.channel = ChannelModel::Ideal;
        assert_eq!(Scenario::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn overrides_only() {
        let s = Scenario::parse("# rrc\nid = rrc\npulse = rrc\n\nslots = 5\n").unwrap();
        assert_eq!(s.pulse, PulseFamily::Rrc);
        assert_eq!(s.slots, 5);
        assert_eq!(s.subcarriers, 128);
        assert_eq!(s.family, "rrc");
    }

    #[test]
    fn rejects_unknown_repeated_and_missing() {
        assert!(matches!(Scenario::parse("id = a\nfoo = 1"), Err(Error::ManifestError(_))));
        assert!(matches!(Scenario::parse("id = a\nslots = 1\nslots = 2"), Err(Error::ManifestError(_))));
        assert!(matches!(Scenario::parse("slots = 3"), Err(Error::ManifestError(_))));
        assert!(matches!(Scenario::parse("id = a\nslots = x"), Err(Error::ManifestError(_))));
        assert!(matches!(Scenario::parse("id = a\nslots"), Err(Error::ManifestError(_))));
    }

    #[test]
    fn validation_reports_scenario() {
        assert!(matches!(
            Scenario::parse("id = a\npulse = dirichlet\nslots = 8"),
            Err(Error::Scenario { .. })
        ));
        assert!(matches!(
            Scenario::parse("id = a\nexperiment = ser\nsnr_grid = "),
            Err(Error::Scenario { .. })
        ));
        assert!(matches!(Scenario::parse("id = ../x"), Err(Error::Scenario { .. })));
    }
}
