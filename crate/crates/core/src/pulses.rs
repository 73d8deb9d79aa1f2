//! Prototype filters for circular pulse shaping.
//!
//! Every filter is built for a `(K, M)` grid: `L = M*K` taps spanning `M`
//! symbol periods of `K` samples, centred on index `L/2` (integer division) and
//! normalized to unit energy. "Even symmetric" therefore means
//! `taps[(c + j) mod L] == taps[(c - j) mod L]` with `c = L/2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PulseFamily {
    Rc,
    Rrc,
    Phydyas,
    Iota,
    Dirichlet,
}

impl PulseFamily {
    pub fn name(self) -> &'static str {
        match self {
            PulseFamily::Rc => "rc",
            PulseFamily::Rrc => "rrc",
            PulseFamily::Phydyas => "phydyas",
            PulseFamily::Iota => "iota",
            PulseFamily::Dirichlet => "dirichlet",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rc" => Ok(PulseFamily::Rc),
            "rrc" => Ok(PulseFamily::Rrc),
            "phydyas" => Ok(PulseFamily::Phydyas),
            "iota" => Ok(PulseFamily::Iota),
            "dirichlet" => Ok(PulseFamily::Dirichlet),
            other => Err(Error::InvalidParameter(format!("unknown pulse family `{other}`"))),
        }
    }

    /// Pulses whose matched filter gives real-domain (OQAM) orthogonality.
    pub fn is_oqam_compatible(self) -> bool {
        matches!(self, PulseFamily::Rrc | PulseFamily::Phydyas | PulseFamily::Iota)
    }
}

/// Overlap factor the PHYDYAS coefficients below are tabulated for.
pub const PHYDYAS_OVERLAP: usize = 4;

/// Frequency-domain PHYDYAS coefficients `H0..H3` for overlap 4.
pub const PHYDYAS_COEFFS: [f64; 4] = [1.0, 0.971_960, FRAC_1_SQRT_2, 0.235_147];

/// Number of Gaussian terms kept in the IOTA expansion on each side.
pub const IOTA_EXPANSION_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeFilter<T: Real> {
    taps: Vec<T>,
    family: PulseFamily,
    rolloff: Option<f64>,
    overlap: Option<usize>,
    subcarriers: usize,
    slots: usize,
}

impl<T: Real> PrototypeFilter<T> {
    fn from_raw(
        raw: Vec<f64>,
        family: PulseFamily,
        rolloff: Option<f64>,
        overlap: Option<usize>,
        k: usize,
        m: usize,
    ) -> Self {
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let taps = raw.into_iter().map(|v| T::lit(v / norm)).collect();
        Self {
            taps,
            family,
            rolloff,
            overlap,
            subcarriers: k,
            slots: m,
        }
    }

    pub fn taps(&self) -> &[T] {
        &self.taps
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn family(&self) -> PulseFamily {
        self.family
    }

    pub fn rolloff(&self) -> Option<f64> {
        self.rolloff
    }

    pub fn overlap(&self) -> Option<usize> {
        self.overlap
    }

    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Index of the pulse peak.
    pub fn center(&self) -> usize {
        self.taps.len() / 2
    }

    pub fn energy(&self) -> T {
        self.taps.iter().fold(T::zero(), |a, &t| a + t * t)
    }

    /// Largest deviation from circular even symmetry about [`Self::center`].
    pub fn symmetry_error(&self) -> T {
        let l = self.taps.len();
        let c = self.center();
        (0..l)
            .map(|j| (self.taps[(c + j) % l] - self.taps[(c + l - j) % l]).abs())
            .fold(T::zero(), T::max)
    }

    /// Tap `n` of the pulse delayed by `shift` samples, modulo `L`.
    #[inline]
    pub fn circular(&self, n: isize) -> T {
        let l = self.taps.len() as isize;
        self.taps[n.rem_euclid(l) as usize]
    }
}

fn check_grid(k: usize, m: usize) -> Result<()> {
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameter(format!(
            "pulse grid needs K >= 1 and M >= 1, got K={k}, M={m}"
        )));
    }
    Ok(())
}

fn check_rolloff(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("roll-off must lie in [0, 1], got {alpha}")));
    }
    Ok(())
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Raised-cosine impulse response at `t` symbol periods (unit peak).
pub fn raised_cosine(t: f64, alpha: f64) -> f64 {
    let x = 2.0 * alpha * t;
    if (1.0 - x * x).abs() < 1e-10 {
        // removable singularity at |t| = 1/(2 alpha)
        PI / 4.0 * sinc(1.0 / (2.0 * alpha))
    } else {
        sinc(t) * (PI * alpha * t).cos() / (1.0 - x * x)
    }
}

/// Raised-cosine spectrum at `nu` in units of the symbol rate (unit passband).
pub fn raised_cosine_spectrum(nu: f64, alpha: f64) -> f64 {
    let a = nu.abs();
    let lo = (1.0 - alpha) / 2.0;
    let hi = (1.0 + alpha) / 2.0;
    if a <= lo {
        1.0
    } else if a > hi {
        0.0
    } else {
        0.5 * (1.0 + (PI / alpha * (a - lo)).cos())
    }
}

/// Real taps from a symmetric, real frequency-domain response sampled on the
/// `L = MK` DFT grid (`response(b)` for signed bin `b`), centred on `L/2`.
fn from_symmetric_spectrum(k: usize, m: usize, response: impl Fn(isize) -> f64) -> Vec<f64> {
    let l = k * m;
    let c = (l / 2) as f64;
    let half = l as isize / 2;
    let bins: Vec<(isize, f64)> = (-(l as isize - 1 - half)..=half)
        .filter_map(|b| {
            let v = response(b);
            (v != 0.0).then_some((b, v))
        })
        .collect();
    (0..l)
        .map(|n| {
            let t = n as f64 - c;
            bins.iter()
                .map(|&(b, v)| v * (2.0 * PI * b as f64 * t / l as f64).cos())
                .sum::<f64>()
        })
        .collect()
}

/// Time-domain raised cosine truncated to `M` symbol periods.
pub fn make_rc<T: Real>(k: usize, m: usize, alpha: f64) -> Result<PrototypeFilter<T>> {
    check_grid(k, m)?;
    check_rolloff(alpha)?;
    let l = k * m;
    let c = (l / 2) as f64;
    let raw = (0..l)
        .map(|n| raised_cosine((n as f64 - c) / k as f64, alpha))
        .collect();
    Ok(PrototypeFilter::from_raw(raw, PulseFamily::Rc, Some(alpha), None, k, m))
}

/// Root raised cosine defined by the square root of the raised-cosine
/// spectrum sampled on the `MK`-point grid, so that the circular
/// self-convolution is exactly Nyquist at symbol spacing.
pub fn make_rrc<T: Real>(k: usize, m: usize, alpha: f64) -> Result<PrototypeFilter<T>> {
    check_grid(k, m)?;
    check_rolloff(alpha)?;
    let raw = from_symmetric_spectrum(k, m, |b| {
        raised_cosine_spectrum(b as f64 / m as f64, alpha).sqrt()
    });
    Ok(PrototypeFilter::from_raw(raw, PulseFamily::Rrc, Some(alpha), None, k, m))
}

/// PHYDYAS frequency-sampling prototype spanning `overlap` symbol periods,
/// zero-padded to `M*K` taps. Requires `M >= overlap`.
pub fn make_phydyas<T: Real>(k: usize, m: usize, overlap: usize) -> Result<PrototypeFilter<T>> {
    check_grid(k, m)?;
    if overlap != PHYDYAS_OVERLAP {
        return Err(Error::InvalidParameter(format!(
            "PHYDYAS coefficients are tabulated for overlap {PHYDYAS_OVERLAP}, got {overlap}"
        )));
    }
    if m < overlap {
        return Err(Error::InvalidParameter(format!(
            "PHYDYAS pulse spans {overlap} symbols but M = {m}"
        )));
    }
    let l = k * m;
    let c = (l / 2) as isize;
    let span = (overlap * k) as f64;
    let half = (overlap * k / 2) as isize;
    let raw = (0..l as isize)
        .map(|n| {
            let t = n - c;
            if t.abs() >= half {
                return 0.0;
            }
            let mut v = PHYDYAS_COEFFS[0];
            for (i, h) in PHYDYAS_COEFFS.iter().enumerate().skip(1) {
                v += 2.0 * h * (2.0 * PI * i as f64 * t as f64 / span).cos();
            }
            v
        })
        .collect();
    Ok(PrototypeFilter::from_raw(raw, PulseFamily::Phydyas, None, Some(overlap), k, m))
}

/// Coefficients `b[k][j]` of the truncated expansion of the extended Gaussian
/// function weights (order 3): `d_k = sum_j b[k][j] q^(2j+k)`.
const EGF_B: [&[f64]; 4] = [
    &[1.0, 3.0 / 4.0, 105.0 / 64.0, 675.0 / 256.0],
    &[-1.0, -15.0 / 8.0, -219.0 / 128.0],
    &[3.0 / 4.0, 19.0 / 16.0],
    &[-5.0 / 8.0],
];

fn egf_weights(alpha: f64, nu: f64) -> [f64; 4] {
    let q = (-PI * alpha / (2.0 * nu * nu)).exp();
    let mut d = [0.0; 4];
    for (k, row) in EGF_B.iter().enumerate() {
        d[k] = row
            .iter()
            .enumerate()
            .map(|(j, b)| b * q.powi((2 * j + k) as i32))
            .sum();
    }
    d
}

/// IOTA function at time `t` (in units where `tau0 = nu0 = 1/sqrt(2)`).
pub fn iota_function(t: f64) -> f64 {
    let alpha: f64 = 1.0;
    let tau0 = FRAC_1_SQRT_2;
    let nu0 = FRAC_1_SQRT_2;
    let gauss = |x: f64| (2.0 * alpha).powf(0.25) * (-PI * alpha * x * x).exp();
    let dk = egf_weights(alpha, nu0);
    let dl = egf_weights(1.0 / alpha, tau0);
    let shifted: f64 = dk
        .iter()
        .enumerate()
        .map(|(k, d)| d * (gauss(t + k as f64 / nu0) + gauss(t - k as f64 / nu0)))
        .sum::<f64>()
        * 0.5;
    let periodic: f64 = dl
        .iter()
        .enumerate()
        .map(|(l, d)| d * (2.0 * PI * l as f64 * t / tau0).cos())
        .sum();
    shifted * periodic
}

/// IOTA pulse: one symbol period of `K` samples corresponds to `2 tau0`.
pub fn make_iota<T: Real>(k: usize, m: usize) -> Result<PrototypeFilter<T>> {
    check_grid(k, m)?;
    let l = k * m;
    let c = (l / 2) as f64;
    let raw = (0..l)
        .map(|n| iota_function((n as f64 - c) * SQRT_2 / k as f64))
        .collect();
    Ok(PrototypeFilter::from_raw(raw, PulseFamily::Iota, None, None, k, m))
}

/// Dirichlet pulse: `M` contiguous unit DFT bins centred on DC. Real even taps
/// need an odd bin count, so even `M` is rejected.
pub fn make_dirichlet<T: Real>(k: usize, m: usize) -> Result<PrototypeFilter<T>> {
    check_grid(k, m)?;
    if m % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "Dirichlet pulse needs odd M for a real symmetric prototype, got M = {m}"
        )));
    }
    let half = (m / 2) as isize;
    let raw = from_symmetric_spectrum(k, m, |b| if b.abs() <= half { 1.0 } else { 0.0 });
    Ok(PrototypeFilter::from_raw(raw, PulseFamily::Dirichlet, None, None, k, m))
}

/// Parameters naming one prototype; [`PulseSpec::build`] materializes it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    pub family: PulseFamily,
    pub rolloff: f64,
    pub overlap: usize,
}

impl PulseSpec {
    pub fn rc(rolloff: f64) -> Self {
        Self {
            family: PulseFamily::Rc,
            rolloff,
            overlap: PHYDYAS_OVERLAP,
        }
    }

    pub fn of(family: PulseFamily) -> Self {
        Self {
            family,
            rolloff: 0.1,
            overlap: PHYDYAS_OVERLAP,
        }
    }

    pub fn build<T: Real>(&self, k: usize, m: usize) -> Result<PrototypeFilter<T>> {
        match self.family {
            PulseFamily::Rc => make_rc(k, m, self.rolloff),
            PulseFamily::Rrc => make_rrc(k, m, self.rolloff),
            PulseFamily::Phydyas => make_phydyas(k, m, self.overlap),
            PulseFamily::Iota => make_iota(k, m),
            PulseFamily::Dirichlet => make_dirichlet(k, m),
        }
    }
}
