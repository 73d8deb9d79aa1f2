//! Oversampled PSD estimation: RC interpolation, averaged periodogram and
//! out-of-band emission figures.

use std::fmt::Write as _;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::pulses::raised_cosine;
use crate::scalar::Real;
use crate::signal::{convolve_slice, fftshift, ComplexSignal, ConvMode, Dft};

/// Lowest value written for a PSD bin or power ratio, in dB.
pub const PSD_FLOOR_DB: f64 = -300.0;

/// Zero-stuffing interpolator with a raised-cosine kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolatorSpec {
    pub rate: usize,
    /// Kernel length in base-rate samples; odd.
    pub span: usize,
    pub rolloff: f64,
    /// Drop filter transients so the output has exactly `rate * N` samples.
    pub truncate: bool,
}

impl Default for InterpolatorSpec {
    fn default() -> Self {
        Self {
            rate: 6,
            span: 81,
            rolloff: 0.1,
            truncate: true,
        }
    }
}

impl InterpolatorSpec {
    pub fn with_rate(rate: usize) -> Self {
        Self {
            rate,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rate == 0 {
            return Err(Error::InvalidParameter("interpolation rate must be >= 1".into()));
        }
        if self.span % 2 == 0 {
            return Err(Error::InvalidParameter(format!("filter span {} must be odd", self.span)));
        }
        if !(0.0..=1.0).contains(&self.rolloff) {
            return Err(Error::InvalidParameter(format!("rolloff {} outside [0, 1]", self.rolloff)));
        }
        Ok(())
    }

    /// High-rate taps, `(span - 1) * rate + 1` of them, unit value at the centre
    /// and zeros at every other multiple of `rate`.
    pub fn kernel<T: Real>(&self) -> Vec<Complex<T>> {
        let l = self.rate as f64;
        let half = (self.span - 1) / 2 * self.rate;
        (0..=2 * half)
            .map(|n| {
                let t = (n as f64 - half as f64) / l;
                Complex::new(T::lit(raised_cosine(t, self.rolloff)), T::zero())
            })
            .collect()
    }

    /// Samples removed from the front of the full convolution.
    pub fn transient(&self) -> usize {
        (self.span - 1) / 2 * self.rate
    }
}

pub fn interpolate<T: Real>(x: &ComplexSignal<T>, spec: &InterpolatorSpec) -> Result<ComplexSignal<T>> {
    spec.validate()?;
    let n = x.len();
    if n < spec.span {
        return Err(Error::FrameTooShort { len: n, span: spec.span });
    }
    let l = spec.rate;
    let mut up = vec![Complex::new(T::zero(), T::zero()); n * l];
    for (i, &v) in x.samples().iter().enumerate() {
        up[i * l] = v;
    }
    let mut y = convolve_slice(&up, &spec.kernel::<T>(), ConvMode::Linear)?;
    if spec.truncate {
        y.drain(..spec.transient());
        y.truncate(n * l);
    }
    ComplexSignal::new(y, x.sample_rate() * l as f64)
}

/// Averaged periodogram on a centred frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdEstimate {
    /// Bin frequencies in subcarrier spacings, strictly increasing.
    pub freq: Vec<f64>,
    /// Peak-normalized PSD in dB, floored at [`PSD_FLOOR_DB`].
    pub psd_db: Vec<f64>,
    /// Mean of `|DFT|^2 / len`, before normalization.
    pub power: Vec<f64>,
    pub n_avg: usize,
}

impl PsdEstimate {
    fn from_power(power: Vec<f64>, freq: Vec<f64>, n_avg: usize) -> Self {
        let peak = power.iter().copied().fold(0.0, f64::max);
        let psd_db = power.iter().map(|&p| to_db(p / peak)).collect();
        Self {
            freq,
            psd_db,
            power,
            n_avg,
        }
    }

    /// Frame-count weighted mean of two estimates over the same grid.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        if self.freq != other.freq {
            return Err(Error::ShapeError("PSD grids differ".into()));
        }
        let (a, b) = (self.n_avg as f64, other.n_avg as f64);
        let power = self
            .power
            .iter()
            .zip(&other.power)
            .map(|(p, q)| (a * p + b * q) / (a + b))
            .collect();
        Ok(Self::from_power(power, self.freq.clone(), self.n_avg + other.n_avg))
    }

    /// Value at the bin nearest to `f` (in subcarrier spacings).
    pub fn at(&self, f: f64) -> f64 {
        let i = self
            .freq
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - f).abs().total_cmp(&(b.1 - f).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.psd_db[i]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(32 * self.freq.len() + 20);
        s.push_str("freq_over_df,psd_db\n");
        for (f, p) in self.freq.iter().zip(&self.psd_db) {
            let _ = writeln!(s, "{f:.8e},{p:.8e}");
        }
        s
    }
}

pub fn to_db(p: f64) -> f64 {
    if p > 0.0 {
        (10.0 * p.log10()).max(PSD_FLOOR_DB)
    } else {
        PSD_FLOOR_DB
    }
}

/// `|DFT|^2 / len` of one frame, in natural (unshifted) bin order.
pub fn frame_power<T: Real>(x: &[Complex<T>], plan: &Dft<T>) -> Vec<f64> {
    let n = x.len() as f64;
    plan.forward(x).iter().map(|v| v.norm_sqr().to_f64_lossy() / n).collect()
}

/// Centred frequency axis of an `n`-point DFT at `sample_rate`, in units of
/// `spacing_hz`.
pub fn centered_axis(n: usize, sample_rate: f64, spacing_hz: f64) -> Vec<f64> {
    let half = (n / 2) as f64;
    (0..n)
        .map(|i| (i as f64 - half) * sample_rate / (n as f64 * spacing_hz))
        .collect()
}

/// Sums per-frame power spectra in input order and finishes the estimate.
pub fn average_power(
    powers: impl IntoIterator<Item = Vec<f64>>,
    sample_rate: f64,
    spacing_hz: f64,
) -> Result<PsdEstimate> {
    let mut acc: Option<Vec<f64>> = None;
    let mut count = 0usize;
    for p in powers {
        match acc.as_mut() {
            None => acc = Some(p),
            Some(a) => {
                if a.len() != p.len() {
                    return Err(Error::ShapeError(format!(
                        "frame spectra of {} and {} bins",
                        a.len(),
                        p.len()
                    )));
                }
                a.iter_mut().zip(&p).for_each(|(x, y)| *x += y);
            }
        }
        count += 1;
    }
    let sum = acc.ok_or_else(|| Error::ShapeError("periodogram needs at least one frame".into()))?;
    let n = sum.len();
    let mean: Vec<f64> = sum.into_iter().map(|v| v / count as f64).collect();
    Ok(PsdEstimate::from_power(
        fftshift(&mean),
        centered_axis(n, sample_rate, spacing_hz),
        count,
    ))
}

/// Averaged periodogram of equal-length frames. `spacing_hz` sets the unit of
/// the frequency axis (the subcarrier spacing).
pub fn periodogram<T: Real>(frames: &[ComplexSignal<T>], spacing_hz: f64) -> Result<PsdEstimate> {
    let first = frames
        .first()
        .ok_or_else(|| Error::ShapeError("periodogram needs at least one frame".into()))?;
    let (n, fs) = (first.len(), first.sample_rate());
    if let Some(bad) = frames.iter().find(|f| f.len() != n || f.sample_rate() != fs) {
        return Err(Error::ShapeError(format!(
            "frame of {} samples in a set of {n}-sample frames",
            bad.len()
        )));
    }
    let plan = Dft::new(n)?;
    average_power(frames.iter().map(|f| frame_power(f.samples(), &plan)), fs, spacing_hz)
}

/// PSD at one offset beyond the band edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsetLevel {
    pub offset: f64,
    pub lower_db: f64,
    pub upper_db: f64,
    /// Mean of the two sides in linear power.
    pub db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OobeMetrics {
    pub band: (f64, f64),
    pub levels: Vec<OffsetLevel>,
    /// Out-of-band over in-band power, in dB.
    pub oob_ratio_db: f64,
}

impl OobeMetrics {
    pub fn level(&self, offset: f64) -> Option<f64> {
        self.levels.iter().find(|l| l.offset == offset).map(|l| l.db)
    }
}

/// OOBE figures for an occupied band `[lo, hi]` (subcarrier spacings). Each
/// offset level is the linear mean PSD over one subcarrier spacing centred
/// `offset` beyond each edge.
pub fn oobe_metrics(psd: &PsdEstimate, band: (f64, f64), offsets: &[f64]) -> Result<OobeMetrics> {
    let (lo, hi) = band;
    let (fmin, fmax) = match (psd.freq.first(), psd.freq.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(Error::RangeError("empty PSD grid".into())),
    };
    if !(lo < hi && lo >= fmin && hi <= fmax) {
        return Err(Error::RangeError(format!(
            "band [{lo}, {hi}] outside grid [{fmin}, {fmax}]"
        )));
    }
    let lin: Vec<f64> = psd
        .psd_db
        .iter()
        .map(|&d| if d <= PSD_FLOOR_DB { 0.0 } else { 10f64.powf(d / 10.0) })
        .collect();
    let mean_over = |a: f64, b: f64| -> Result<f64> {
        if a < fmin || b > fmax {
            return Err(Error::RangeError(format!("offset window [{a}, {b}] outside grid")));
        }
        let (s, c) = psd
            .freq
            .iter()
            .zip(&lin)
            .filter(|(f, _)| **f >= a && **f <= b)
            .fold((0.0, 0usize), |(s, c), (_, p)| (s + p, c + 1));
        if c == 0 {
            return Err(Error::RangeError(format!("no bins in [{a}, {b}]")));
        }
        Ok(s / c as f64)
    };
    let mut levels = Vec::with_capacity(offsets.len());
    for &off in offsets {
        let up = mean_over(hi + off - 0.5, hi + off + 0.5)?;
        let down = mean_over(lo - off - 0.5, lo - off + 0.5)?;
        levels.push(OffsetLevel {
            offset: off,
            lower_db: to_db(down),
            upper_db: to_db(up),
            db: to_db(0.5 * (up + down)),
        });
    }
    let (mut inb, mut oob) = (0.0, 0.0);
    for (f, p) in psd.freq.iter().zip(&lin) {
        if *f >= lo && *f <= hi {
            inb += p;
        } else {
            oob += p;
        }
    }
    Ok(OobeMetrics {
        band,
        levels,
        oob_ratio_db: if inb > 0.0 { to_db(oob / inb) } else { PSD_FLOOR_DB },
    })
}
