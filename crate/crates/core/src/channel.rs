//! Static multipath channel, carrier frequency offset and the frequency
//! response consumed by the zero-forcing receivers.

use std::fmt::Write as _;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::noise::Rng;
use crate::scalar::Real;
use crate::signal::{convolve_slice, ComplexSignal, ConvMode};

/// Tapped delay line: path delays in microseconds with relative powers in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct TapDelayProfile {
    pub name: String,
    pub delays_us: Vec<f64>,
    pub powers_db: Vec<f64>,
}

impl TapDelayProfile {
    pub fn new(name: &str, delays_us: Vec<f64>, powers_db: Vec<f64>) -> Result<Self> {
        if delays_us.is_empty() || delays_us.len() != powers_db.len() {
            return Err(Error::InvalidParameter(format!(
                "profile `{name}` needs matching, non-empty delay and power lists"
            )));
        }
        if delays_us.iter().any(|d| !d.is_finite() || *d < 0.0)
            || delays_us.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::InvalidParameter(format!(
                "profile `{name}` delays must be non-negative and strictly increasing"
            )));
        }
        if powers_db.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter(format!("profile `{name}` has non-finite powers")));
        }
        Ok(Self {
            name: name.to_string(),
            delays_us,
            powers_db,
        })
    }

    /// COST-207 hilly terrain, 12-path reduced profile.
    pub fn cost207_ht12() -> Self {
        Self::new(
            "cost207_ht12",
            vec![0.0, 0.1, 0.3, 0.5, 0.7, 1.0, 1.3, 15.0, 15.2, 15.7, 17.2, 20.0],
            vec![-10.0, -8.0, -6.0, -4.0, 0.0, 0.0, -4.0, -8.0, -9.0, -10.0, -12.0, -14.0],
        )
        .expect("static profile is valid")
    }

    /// COST-207 hilly terrain, 6-path reduced profile.
    pub fn cost207_ht6() -> Self {
        Self::new(
            "cost207_ht6",
            vec![0.0, 0.1, 0.3, 0.5, 15.0, 17.2],
            vec![0.0, -1.5, -4.5, -7.5, -8.0, -17.7],
        )
        .expect("static profile is valid")
    }

    /// Linear path powers normalized to sum to one.
    pub fn normalized_powers(&self) -> Vec<f64> {
        let lin: Vec<f64> = self.powers_db.iter().map(|p| 10f64.powf(p / 10.0)).collect();
        let total: f64 = lin.iter().sum();
        lin.into_iter().map(|p| p / total).collect()
    }

    /// Nearest-sample placement of each path at `sample_rate` Hz.
    pub fn sample_indices(&self, sample_rate: f64) -> Vec<usize> {
        self.delays_us
            .iter()
            .map(|d| (d * 1e-6 * sample_rate).round() as usize)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("delay_us,power_db\n");
        for (d, p) in self.delays_us.iter().zip(&self.powers_db) {
            let _ = writeln!(s, "{d},{p}");
        }
        s
    }
}

/// One static draw of a tapped delay line on the 1 MHz sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T: Real> {
    taps: Vec<Complex<T>>,
    path_gains: Vec<Complex<T>>,
    seed: u64,
    profile: String,
}

impl<T: Real> ChannelRealization<T> {
    /// Single unit tap at delay `delay` samples.
    pub fn delay(delay: usize) -> Self {
        let mut taps = vec![Complex::new(T::zero(), T::zero()); delay + 1];
        taps[delay] = Complex::new(T::one(), T::zero());
        Self {
            path_gains: vec![taps[delay]],
            taps,
            seed: 0,
            profile: format!("delay_{delay}"),
        }
    }

    pub fn identity() -> Self {
        Self::delay(0)
    }

    /// Arbitrary taps, normalized to unit energy.
    pub fn from_taps(taps: Vec<Complex<T>>) -> Result<Self> {
        let e = crate::signal::energy(&taps);
        if taps.is_empty() || e <= T::zero() {
            return Err(Error::InvalidParameter("channel needs a non-zero tap".into()));
        }
        let s = T::one() / e.sqrt();
        let taps: Vec<Complex<T>> = taps.into_iter().map(|t| t * s).collect();
        Ok(Self {
            path_gains: taps.clone(),
            taps,
            seed: 0,
            profile: "custom".into(),
        })
    }

    pub fn taps(&self) -> &[Complex<T>] {
        &self.taps
    }

    /// Per-path complex gains before sample placement and normalization.
    pub fn path_gains(&self) -> &[Complex<T>] {
        &self.path_gains
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn profile_name(&self) -> &str {
        &self.profile
    }

    /// Index of the last non-zero tap.
    pub fn max_delay(&self) -> usize {
        self.taps
            .iter()
            .rposition(|t| t.norm_sqr() > T::zero())
            .unwrap_or(0)
    }
}

/// Draws one Rayleigh gain per path, places paths on the sample grid and
/// normalizes the impulse response to unit energy.
pub fn realize<T: Real>(profile: &TapDelayProfile, seed: u64) -> ChannelRealization<T> {
    let mut rng = Rng::new(seed);
    let powers = profile.normalized_powers();
    let idx = profile.sample_indices(crate::signal::BASE_SAMPLE_RATE);
    let len = idx.iter().copied().max().unwrap_or(0) + 1;
    let mut taps = vec![Complex::new(T::zero(), T::zero()); len];
    let mut gains = Vec::with_capacity(powers.len());
    for (p, &i) in powers.iter().zip(&idx) {
        let g = rng.complex_gaussian(T::lit(*p));
        gains.push(g);
        taps[i] += g;
    }
    let s = T::one() / crate::signal::energy(&taps).sqrt();
    taps.iter_mut().for_each(|t| *t = *t * s);
    ChannelRealization {
        taps,
        path_gains: gains,
        seed,
        profile: profile.name.clone(),
    }
}

/// Static COST-207 hilly terrain realization (12-path profile).
pub fn cost207_ht<T: Real>(seed: u64) -> ChannelRealization<T> {
    realize(&TapDelayProfile::cost207_ht12(), seed)
}

/// Linear convolution truncated to the input length.
pub fn apply_channel_slice<T: Real>(x: &[Complex<T>], h: &ChannelRealization<T>) -> Vec<Complex<T>> {
    let mut y = convolve_slice(x, h.taps(), ConvMode::Linear).expect("non-empty operands");
    y.truncate(x.len());
    y
}

pub fn apply_channel<T: Real>(
    x: &ComplexSignal<T>,
    h: &ChannelRealization<T>,
) -> Result<ComplexSignal<T>> {
    ComplexSignal::new(apply_channel_slice(x.samples(), h), x.sample_rate())
}

/// Rotates sample `n` by `exp(j 2 pi eps n / K)`, `eps` in subcarrier spacings.
pub fn apply_cfo_slice<T: Real>(x: &mut [Complex<T>], eps: f64, k: usize) {
    if eps == 0.0 {
        return;
    }
    let step = 2.0 * std::f64::consts::PI * eps / k as f64;
    for (n, v) in x.iter_mut().enumerate() {
        let ph = (step * n as f64).rem_euclid(2.0 * std::f64::consts::PI);
        *v *= Complex::from_polar(T::one(), T::lit(ph));
    }
}

pub fn apply_cfo<T: Real>(x: &ComplexSignal<T>, eps: f64, k: usize) -> Result<ComplexSignal<T>> {
    let mut y = x.samples().to_vec();
    apply_cfo_slice(&mut y, eps, k);
    ComplexSignal::new(y, x.sample_rate())
}

/// `n`-point DFT of the zero-padded impulse response.
pub fn freq_response<T: Real>(h: &ChannelRealization<T>, n: usize) -> Result<Vec<Complex<T>>> {
    if n < h.taps().len() {
        return Err(Error::InvalidLength(format!(
            "response length {n} shorter than {} taps",
            h.taps().len()
        )));
    }
    let mut buf = h.taps().to_vec();
    buf.resize(n, Complex::new(T::zero(), T::zero()));
    crate::signal::dft_slice(&buf, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn realization_is_unit_energy_and_spans_twenty_samples() {
        for seed in 0..20 {
            let h = cost207_ht::<f64>(seed);
            let e: f64 = h.taps().iter().map(|t| t.norm_sqr()).sum();
            assert!((e - 1.0).abs() < 1e-12);
            assert_eq!(h.taps().len(), 21);
            assert_eq!(h.max_delay(), 20);
        }
        assert_eq!(cost207_ht::<f64>(3), cost207_ht::<f64>(3));
        assert_ne!(cost207_ht::<f64>(3), cost207_ht::<f64>(4));
    }

    #[test]
    fn six_path_profile_is_selectable() {
        let h = realize::<f64>(&TapDelayProfile::cost207_ht6(), 1);
        assert_eq!(h.max_delay(), 17);
        assert_eq!(h.path_gains().len(), 6);
    }

    #[test]
    fn profile_validation() {
        assert!(TapDelayProfile::new("x", vec![0.0, 0.0], vec![0.0, 0.0]).is_err());
        assert!(TapDelayProfile::new("x", vec![-1.0], vec![0.0]).is_err());
        assert!(TapDelayProfile::new("x", vec![0.0], vec![f64::NAN]).is_err());
        assert!(TapDelayProfile::new("x", vec![0.0, 1.0], vec![0.0]).is_err());
    }

    #[test]
    fn identity_and_delay_taps() {
        let x: Vec<Complex<f64>> = (0..8).map(|i| Complex::new(i as f64, 1.0)).collect();
        assert_eq!(apply_channel_slice(&x, &ChannelRealization::identity()), x);
        let y = apply_channel_slice(&x, &ChannelRealization::delay(3));
        assert_eq!(&y[3..], &x[..5]);
        assert!(y[..3].iter().all(|v| v.norm() == 0.0));
        let h1 = freq_response(&ChannelRealization::<f64>::identity(), 16).unwrap();
        assert!(h1.iter().all(|v| (v - Complex::new(1.0, 0.0)).norm() < 1e-15));
        let d = 5;
        let n = 16;
        let hd = freq_response(&ChannelRealization::<f64>::delay(d), n).unwrap();
        for (k, v) in hd.iter().enumerate() {
            let want = Complex::from_polar(1.0, -2.0 * std::f64::consts::PI * (k * d) as f64 / n as f64);
            assert!((v - want).norm() < 1e-12);
        }
        assert!(freq_response(&ChannelRealization::<f64>::delay(20), 8).is_err());
    }

    #[test]
    fn cfo_is_unit_modulus_and_zero_is_identity() {
        let x: Vec<Complex<f64>> = (0..50).map(|i| Complex::new(i as f64, -0.5)).collect();
        let mut y = x.clone();
        apply_cfo_slice(&mut y, 0.0, 64);
        assert_eq!(x, y);
        apply_cfo_slice(&mut y, 64.0, 64);
        for (a, b) in x.iter().zip(&y) {
            assert!((a.norm() - b.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn profile_csv_has_header() {
        let csv = TapDelayProfile::cost207_ht12().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("delay_us,power_db"));
        assert_eq!(lines.count(), 12);
    }
}
