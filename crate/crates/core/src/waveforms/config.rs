use std::fmt;

use crate::error::{Error, Result};
use crate::pulses::PulseSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Ofdm,
    Gfdm,
    WcpCoqam,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Ofdm, Scheme::Gfdm, Scheme::WcpCoqam];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ofdm => "ofdm",
            Scheme::Gfdm => "gfdm",
            Scheme::WcpCoqam => "wcp_coqam",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "ofdm" => Ok(Scheme::Ofdm),
            "gfdm" => Ok(Scheme::Gfdm),
            "wcp_coqam" | "coqam" => Ok(Scheme::WcpCoqam),
            other => Err(Error::InvalidParameter(format!("unknown scheme `{other}`"))),
        }
    }

    /// OFDM repeats CP and window per symbol; block schemes pay them once.
    pub fn is_block(self) -> bool {
        !matches!(self, Scheme::Ofdm)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AllocationMode {
    Contiguous,
    /// Two equal blocks separated by a gap as wide as one block.
    NonContiguous,
}

impl AllocationMode {
    pub fn name(self) -> &'static str {
        match self {
            AllocationMode::Contiguous => "contiguous",
            AllocationMode::NonContiguous => "non_contiguous",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "contiguous" => Ok(AllocationMode::Contiguous),
            "non_contiguous" | "noncontiguous" => Ok(AllocationMode::NonContiguous),
            other => Err(Error::InvalidParameter(format!("unknown allocation `{other}`"))),
        }
    }
}

/// Every parameter of one transmitter.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformConfig {
    pub scheme: Scheme,
    /// Total subcarriers `K`.
    pub subcarriers: usize,
    /// Guard subcarriers, split evenly between both band edges.
    pub guards: usize,
    /// Time slots `M`: OFDM symbols per frame, or subsymbols per block.
    pub slots: usize,
    pub cp_len: usize,
    /// Hanning ramp length added at each edge of a symbol (OFDM) or block.
    pub window_len: usize,
    pub pulse: PulseSpec,
    pub qam_order: usize,
    pub allocation: AllocationMode,
}

impl WaveformConfig {
    /// Base parameter set: K=128, 52 guards, M=9, CP 32, 18-sample windows,
    /// RC pulse with roll-off 0.1, 4-QAM.
    pub fn base(scheme: Scheme) -> Self {
        Self {
            scheme,
            subcarriers: 128,
            guards: 52,
            slots: 9,
            cp_len: 32,
            window_len: 18,
            pulse: PulseSpec::rc(0.1),
            qam_order: 4,
            allocation: AllocationMode::Contiguous,
        }
    }

    pub fn with_scheme(&self, scheme: Scheme) -> Self {
        Self {
            scheme,
            ..self.clone()
        }
    }

    pub fn active_subcarriers(&self) -> usize {
        self.subcarriers.saturating_sub(self.guards)
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.qam_order.trailing_zeros() as usize
    }

    /// Samples in the periodic part of one OFDM symbol or one block.
    pub fn payload_len(&self) -> usize {
        match self.scheme {
            Scheme::Ofdm => self.subcarriers,
            _ => self.subcarriers * self.slots,
        }
    }

    /// Transmitted samples per frame, all overheads included.
    pub fn frame_len(&self) -> usize {
        let per = self.cp_len + 2 * self.window_len;
        match self.scheme {
            Scheme::Ofdm => self.slots * (self.subcarriers + per),
            _ => self.subcarriers * self.slots + per,
        }
    }

    /// Minimum CP (in samples) needed for single-tap equalization over a
    /// channel of the given maximum delay.
    pub fn cp_covers(&self, max_delay_samples: usize) -> bool {
        self.cp_len >= max_delay_samples
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.subcarriers;
        if k == 0 || self.slots == 0 {
            return Err(Error::InvalidParameter("K and M must be at least 1".into()));
        }
        if self.guards >= k {
            return Err(Error::InvalidParameter(format!(
                "guards ({}) must be fewer than subcarriers ({k})",
                self.guards
            )));
        }
        let q = self.qam_order;
        if q < 4 || !q.is_power_of_two() || q.trailing_zeros() % 2 != 0 {
            return Err(Error::InvalidParameter(format!("unsupported QAM order {q}")));
        }
        if self.scheme == Scheme::WcpCoqam && k % 2 != 0 {
            return Err(Error::InvalidParameter(
                "WCP-COQAM needs an even subcarrier count for the half-symbol stagger".into(),
            ));
        }
        allocate(k, self.active_subcarriers(), self.allocation)?;
        Ok(())
    }

    pub fn active_mask(&self) -> Result<Vec<bool>> {
        allocate(self.subcarriers, self.active_subcarriers(), self.allocation)
    }

    /// Band occupied by active subcarriers, in subcarrier spacings, as a
    /// list of `(low, high)` edges (one per contiguous block).
    pub fn active_bands(&self) -> Result<Vec<(f64, f64)>> {
        let mask = self.active_mask()?;
        let k = self.subcarriers;
        let mut bands = Vec::new();
        let mut start: Option<usize> = None;
        for i in 0..=k {
            let on = i < k && mask[i];
            match (on, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    let lo = super::row_frequency(s, k) as f64 - 0.5;
                    let hi = super::row_frequency(i - 1, k) as f64 + 0.5;
                    bands.push((lo, hi));
                    start = None;
                }
                _ => {}
            }
        }
        Ok(bands)
    }
}

/// Active-subcarrier mask in centred row order.
pub fn allocate(k: usize, active: usize, mode: AllocationMode) -> Result<Vec<bool>> {
    if active == 0 || active > k {
        return Err(Error::AllocationError(format!(
            "cannot place {active} active subcarriers in {k}"
        )));
    }
    let mut mask = vec![false; k];
    match mode {
        AllocationMode::Contiguous => {
            let start = (k - active) / 2;
            mask[start..start + active].iter_mut().for_each(|v| *v = true);
        }
        AllocationMode::NonContiguous => {
            if active % 2 != 0 {
                return Err(Error::AllocationError(format!(
                    "non-contiguous allocation splits {active} carriers into two equal blocks"
                )));
            }
            let block = active / 2;
            if 3 * block > k {
                return Err(Error::AllocationError(format!(
                    "two blocks of {block} plus a gap of {block} exceed {k} subcarriers"
                )));
            }
            let start = (k - 3 * block) / 2;
            mask[start..start + block].iter_mut().for_each(|v| *v = true);
            mask[start + 2 * block..start + 3 * block]
                .iter_mut()
                .for_each(|v| *v = true);
        }
    }
    Ok(mask)
}

/// Payload bits per transmitted sample (bits/s/Hz at the base rate).
pub fn spectral_efficiency(cfg: &WaveformConfig) -> f64 {
    let bits = cfg.active_subcarriers() * cfg.slots * cfg.bits_per_symbol();
    bits as f64 / cfg.frame_len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EqualizeKnob {
    /// CP length of the adjusted config (per symbol for OFDM, per block otherwise).
    CpLength,
    /// Number of active subcarriers (guards adjusted).
    ActiveSubcarriers,
}

impl EqualizeKnob {
    pub fn name(self) -> &'static str {
        match self {
            EqualizeKnob::CpLength => "cp_len",
            EqualizeKnob::ActiveSubcarriers => "active_subcarriers",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equalized {
    pub config: WaveformConfig,
    pub knob: EqualizeKnob,
    pub knob_before: usize,
    pub knob_after: usize,
    pub eta_ref: f64,
    pub eta_before: f64,
    pub eta_after: f64,
}

/// Relative tolerance on matched spectral efficiencies.
pub const EQUALIZE_TOLERANCE: f64 = 0.005;

/// Adjusts one knob of `target` so its spectral efficiency matches `reference`.
///
/// The search is exhaustive over the knob's integer range; ties go to the
/// value closest to the original setting.
pub fn equalize_spectral_efficiency(
    reference: &WaveformConfig,
    target: &WaveformConfig,
    knob: EqualizeKnob,
) -> Result<Equalized> {
    target.validate()?;
    let eta_ref = spectral_efficiency(reference);
    let eta_before = spectral_efficiency(target);
    let (before, candidates): (usize, Vec<usize>) = match knob {
        EqualizeKnob::CpLength => (
            target.cp_len,
            (0..=target.subcarriers * target.slots).collect(),
        ),
        EqualizeKnob::ActiveSubcarriers => (target.active_subcarriers(), (1..=target.subcarriers).collect()),
    };
    let apply = |v: usize| -> WaveformConfig {
        let mut c = target.clone();
        match knob {
            EqualizeKnob::CpLength => c.cp_len = v,
            EqualizeKnob::ActiveSubcarriers => c.guards = c.subcarriers - v,
        }
        c
    };
    let mut best: Option<(f64, usize, usize)> = None;
    for v in candidates {
        let cfg = apply(v);
        if cfg.validate().is_err() {
            continue;
        }
        let err = (spectral_efficiency(&cfg) - eta_ref).abs();
        let dist = v.abs_diff(before);
        let better = match best {
            None => true,
            Some((e, d, _)) => err < e - 1e-15 || ((err - e).abs() <= 1e-15 && dist < d),
        };
        if better {
            best = Some((err, dist, v));
        }
    }
    let (_, _, v) = best.ok_or_else(|| {
        Error::InvalidParameter("no valid setting for the equalization knob".into())
    })?;
    let config = apply(v);
    let eta_after = spectral_efficiency(&config);
    if (eta_after - eta_ref).abs() > EQUALIZE_TOLERANCE * eta_ref {
        return Err(Error::CannotEqualize {
            target: eta_ref,
            closest: eta_after,
            knob_value: v,
        });
    }
    Ok(Equalized {
        config,
        knob,
        knob_before: before,
        knob_after: v,
        eta_ref,
        eta_before,
        eta_after,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bare(scheme: Scheme) -> WaveformConfig {
        WaveformConfig {
            guards: 0,
            cp_len: 0,
            window_len: 0,
            ..WaveformConfig::base(scheme)
        }
    }

    #[test]
    fn contiguous_base_allocation() {
        let mask = allocate(128, 76, AllocationMode::Contiguous).unwrap();
        let on: Vec<usize> = (0..128).filter(|&i| mask[i]).collect();
        assert_eq!(on.first(), Some(&26));
        assert_eq!(on.last(), Some(&101));
        assert_eq!(on.len(), 76);
        assert!(allocate(128, 128, AllocationMode::Contiguous).unwrap().iter().all(|&b| b));
    }

    #[test]
    fn non_contiguous_gap_equals_block() {
        let mask = allocate(128, 76, AllocationMode::NonContiguous).unwrap();
        assert_eq!(mask.iter().filter(|&&b| b).count(), 76);
        let first = mask.iter().position(|&b| b).unwrap();
        let runs: Vec<(bool, usize)> = mask[first..]
            .chunk_by(|a, b| a == b)
            .map(|r| (r[0], r.len()))
            .collect();
        assert_eq!(runs[0], (true, 38));
        assert_eq!(runs[1], (false, 38));
        assert_eq!(runs[2], (true, 38));
        assert!(matches!(
            allocate(128, 77, AllocationMode::NonContiguous),
            Err(Error::AllocationError(_))
        ));
        assert!(matches!(
            allocate(128, 100, AllocationMode::NonContiguous),
            Err(Error::AllocationError(_))
        ));
    }

    #[test]
    fn efficiency_closed_forms() {
        assert_eq!(spectral_efficiency(&bare(Scheme::Ofdm)), 2.0);
        assert_eq!(spectral_efficiency(&bare(Scheme::Gfdm)), 2.0);
        let ofdm = WaveformConfig::base(Scheme::Ofdm);
        let gfdm = WaveformConfig::base(Scheme::Gfdm);
        let eta_o = (76.0 * 9.0 * 2.0) / (9.0 * (128.0 + 32.0 + 36.0));
        let eta_g = (76.0 * 9.0 * 2.0) / (9.0 * 128.0 + 32.0 + 36.0);
        assert!((spectral_efficiency(&ofdm) - eta_o).abs() < 1e-15);
        assert!((spectral_efficiency(&gfdm) - eta_g).abs() < 1e-15);
        assert_eq!(
            spectral_efficiency(&gfdm),
            spectral_efficiency(&WaveformConfig::base(Scheme::WcpCoqam))
        );
    }

    #[test]
    fn efficiency_monotone_in_overheads() {
        for scheme in Scheme::ALL {
            let base = WaveformConfig::base(scheme);
            let eta = spectral_efficiency(&base);
            let more_cp = WaveformConfig { cp_len: 33, ..base.clone() };
            let more_win = WaveformConfig { window_len: 19, ..base.clone() };
            let more_guard = WaveformConfig { guards: 54, ..base.clone() };
            let bigger_q = WaveformConfig { qam_order: 16, ..base.clone() };
            assert!(spectral_efficiency(&more_cp) < eta);
            assert!(spectral_efficiency(&more_win) < eta);
            assert!(spectral_efficiency(&more_guard) < eta);
            assert!(spectral_efficiency(&bigger_q) > eta);
        }
    }

    #[test]
    fn equalize_same_config_is_noop() {
        let cfg = WaveformConfig::base(Scheme::Ofdm);
        for knob in [EqualizeKnob::CpLength, EqualizeKnob::ActiveSubcarriers] {
            let eq = equalize_spectral_efficiency(&cfg, &cfg, knob).unwrap();
            assert_eq!(eq.config, cfg);
        }
    }

    #[test]
    fn equalize_shrinks_cp_when_target_is_less_efficient() {
        // reference: eta = 1.0
        let reference = WaveformConfig {
            guards: 64,
            ..bare(Scheme::Gfdm)
        };
        let target = WaveformConfig {
            guards: 64,
            ..WaveformConfig { cp_len: 32, ..bare(Scheme::Ofdm) }
        };
        assert!((spectral_efficiency(&target) - 0.8).abs() < 1e-12);
        let eq = equalize_spectral_efficiency(&reference, &target, EqualizeKnob::CpLength).unwrap();
        assert!(eq.config.cp_len < target.cp_len);
        assert!((eq.eta_after - 1.0).abs() <= EQUALIZE_TOLERANCE);
    }

    #[test]
    fn equalize_reports_closest_when_infeasible() {
        let gfdm = WaveformConfig::base(Scheme::Gfdm);
        let ofdm = WaveformConfig::base(Scheme::Ofdm);
        match equalize_spectral_efficiency(&gfdm, &ofdm, EqualizeKnob::CpLength) {
            Err(Error::CannotEqualize { knob_value, .. }) => assert_eq!(knob_value, 0),
            other => panic!("expected CannotEqualize, got {other:?}"),
        }
    }

    #[test]
    fn active_bands_of_base() {
        let b = WaveformConfig::base(Scheme::Ofdm).active_bands().unwrap();
        assert_eq!(b, vec![(-38.5, 37.5)]);
        let nc = WaveformConfig {
            allocation: AllocationMode::NonContiguous,
            ..WaveformConfig::base(Scheme::Ofdm)
        };
        let b = nc.active_bands().unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[1].0 - b[0].1, 38.0);
    }

    #[test]
    fn validate_rejects_bad_configs() {
        let mut c = WaveformConfig::base(Scheme::Gfdm);
        c.guards = 128;
        assert!(c.validate().is_err());
        let mut c = WaveformConfig::base(Scheme::WcpCoqam);
        c.subcarriers = 127;
        c.guards = 51;
        assert!(c.validate().is_err());
        let mut c = WaveformConfig::base(Scheme::Ofdm);
        c.qam_order = 8;
        assert!(c.validate().is_err());
    }
}
