//! Complex sample streams, discrete Fourier transforms and convolution.
//!
//! The forward DFT is non-unitary, `X[k] = sum_n x[n] e^{-j2pi kn/N}`, and the
//! inverse carries the `1/N` factor. Transforms are backed by `rustfft`, which
//! handles arbitrary lengths.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Base sampling rate of the un-interpolated baseband, in Hz.
pub const BASE_SAMPLE_RATE: f64 = 1.0e6;

/// Time-domain complex samples tagged with their sampling rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal<T: Real> {
    samples: Vec<Complex<T>>,
    sample_rate: f64,
}

impl<T: Real> ComplexSignal<T> {
    pub fn new(samples: Vec<Complex<T>>, sample_rate: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidLength("signal must hold at least one sample".into()));
        }
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::InvalidParameter("signal contains non-finite samples".into()));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    /// Signal at the 1 MHz base rate.
    pub fn at_base_rate(samples: Vec<Complex<T>>) -> Result<Self> {
        Self::new(samples, BASE_SAMPLE_RATE)
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex<T>> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn energy(&self) -> T {
        energy(&self.samples)
    }

    /// Mean power per sample.
    pub fn power(&self) -> T {
        self.energy() / T::from_usize_lossy(self.len())
    }
}

pub fn energy<T: Real>(x: &[Complex<T>]) -> T {
    x.iter().fold(T::zero(), |acc, s| acc + s.norm_sqr())
}

/// Reusable forward/inverse transform pair for one length.
#[derive(Clone)]
pub struct Dft<T: Real> {
    len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for Dft<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dft").field("len", &self.len).finish()
    }
}

impl<T: Real> Dft<T> {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidLength("DFT length must be >= 1".into()));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward_in_place(&self, buf: &mut [Complex<T>]) {
        assert_eq!(buf.len(), self.len, "buffer length must match plan length");
        self.forward.process(buf);
    }

    /// Inverse transform including the `1/N` scale.
    pub fn inverse_in_place(&self, buf: &mut [Complex<T>]) {
        assert_eq!(buf.len(), self.len, "buffer length must match plan length");
        self.inverse.process(buf);
        let scale = T::one() / T::from_usize_lossy(self.len);
        for v in buf.iter_mut() {
            *v = *v * scale;
        }
    }

    pub fn forward(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut buf = x.to_vec();
        self.forward_in_place(&mut buf);
        buf
    }

    pub fn inverse(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut buf = x.to_vec();
        self.inverse_in_place(&mut buf);
        buf
    }
}

/// One-shot DFT of a raw sample slice.
pub fn dft_slice<T: Real>(x: &[Complex<T>], inverse: bool) -> Result<Vec<Complex<T>>> {
    let plan = Dft::new(x.len())?;
    Ok(if inverse {
        plan.inverse(x)
    } else {
        plan.forward(x)
    })
}

/// DFT of a signal. The sample rate is carried through unchanged.
pub fn dft<T: Real>(x: &ComplexSignal<T>, inverse: bool) -> Result<ComplexSignal<T>> {
    let out = dft_slice(x.samples(), inverse)?;
    ComplexSignal::new(out, x.sample_rate())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvMode {
    Linear,
    /// Kernel zero-extended to the signal length, output wraps modulo N.
    Circular,
}

pub fn convolve_slice<T: Real>(
    x: &[Complex<T>],
    h: &[Complex<T>],
    mode: ConvMode,
) -> Result<Vec<Complex<T>>> {
    if x.is_empty() || h.is_empty() {
        return Err(Error::InvalidLength("convolution operands must be non-empty".into()));
    }
    match mode {
        ConvMode::Linear => {
            let mut y = vec![Complex::new(T::zero(), T::zero()); x.len() + h.len() - 1];
            for (m, &xm) in x.iter().enumerate() {
                if xm.re == T::zero() && xm.im == T::zero() {
                    continue;
                }
                for (j, &hj) in h.iter().enumerate() {
                    y[m + j] += xm * hj;
                }
            }
            Ok(y)
        }
        ConvMode::Circular => {
            let n = x.len();
            if h.len() > n {
                return Err(Error::InvalidLength(format!(
                    "circular convolution needs kernel ({}) no longer than signal ({n})",
                    h.len()
                )));
            }
            let mut y = vec![Complex::new(T::zero(), T::zero()); n];
            for (m, &xm) in x.iter().enumerate() {
                for (j, &hj) in h.iter().enumerate() {
                    y[(m + j) % n] += xm * hj;
                }
            }
            Ok(y)
        }
    }
}

pub fn convolve<T: Real>(
    x: &ComplexSignal<T>,
    h: &[Complex<T>],
    mode: ConvMode,
) -> Result<ComplexSignal<T>> {
    let y = convolve_slice(x.samples(), h, mode)?;
    ComplexSignal::new(y, x.sample_rate())
}

/// Reorders a spectrum so that DC sits at index `N/2`.
pub fn fftshift<V: Clone>(x: &[V]) -> Vec<V> {
    let n = x.len();
    let half = n.div_ceil(2);
    x[half..].iter().chain(x[..half].iter()).cloned().collect()
}
