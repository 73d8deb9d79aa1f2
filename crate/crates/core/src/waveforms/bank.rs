//! Polyphase form of circular pulse shaping.
//!
//! With `N = K*M` and `n = r + q*K`, the block
//! `x[n] = sum_{b,m} c[m][b] g[(n - m*K) mod N] e^{j 2 pi b n / K}`
//! factors into `x[r + qK] = sum_m g_r[(q - m) mod M] * D[r][m]`, where
//! `D[., m]` is the `K`-point inverse DFT (unscaled) of `c[m]` and
//! `g_r[p] = g[r + p*K]`. Each phase `r` is an `M`-point circular convolution,
//! so synthesis, its adjoint and its exact inverse all cost `O(K M log M)`
//! after the `K`-point transforms.

use num_complex::Complex;

use crate::error::Result;
use crate::scalar::Real;
use crate::signal::Dft;

/// Relative threshold below which a polyphase gain is treated as zero by the
/// pseudo-inverse.
const PINV_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub(crate) struct PolyphaseBank<T: Real> {
    k: usize,
    m: usize,
    /// `poly[r * m + p] = g[(r + p*K - shift) mod N]`
    poly: Vec<T>,
    /// pseudo-inverse of the `M`-point DFT of each polyphase component
    inv_gain: Vec<Complex<T>>,
    singular: usize,
    dft_k: Dft<T>,
    dft_m: Dft<T>,
}

impl<T: Real> PolyphaseBank<T> {
    /// Bank for pulse `taps` (length `K*M`) delayed circularly by `shift`.
    pub fn new(taps: &[T], k: usize, m: usize, shift: usize) -> Result<Self> {
        let n = k * m;
        debug_assert_eq!(taps.len(), n);
        let mut poly = vec![T::zero(); n];
        for r in 0..k {
            for p in 0..m {
                let idx = (r + p * k + n - shift % n) % n;
                poly[r * m + p] = taps[idx];
            }
        }
        let dft_m = Dft::new(m)?;
        let mut gains = Vec::with_capacity(n);
        for r in 0..k {
            let row: Vec<Complex<T>> = poly[r * m..(r + 1) * m]
                .iter()
                .map(|&v| Complex::new(v, T::zero()))
                .collect();
            gains.extend(dft_m.forward(&row));
        }
        let peak = gains.iter().map(|g| g.norm()).fold(T::zero(), T::max);
        let tol = peak * T::lit(PINV_TOLERANCE);
        let mut singular = 0;
        let inv_gain = gains
            .iter()
            .map(|&g| {
                if g.norm() > tol {
                    Complex::new(T::one(), T::zero()) / g
                } else {
                    singular += 1;
                    Complex::new(T::zero(), T::zero())
                }
            })
            .collect();
        Ok(Self {
            k,
            m,
            poly,
            inv_gain,
            singular,
            dft_k: Dft::new(k)?,
            dft_m,
        })
    }

    /// Number of polyphase gains zeroed by the pseudo-inverse.
    pub fn singular_gains(&self) -> usize {
        self.singular
    }

    /// `coeffs[m * K + b]` holds the symbol of subsymbol `m` on DFT bin `b`.
    pub fn synthesize(&self, coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
        let (k, m) = (self.k, self.m);
        let scale = T::from_usize_lossy(k);
        // d[r * m + mm] = unscaled inverse DFT of subsymbol mm
        let mut d = vec![Complex::new(T::zero(), T::zero()); k * m];
        for mm in 0..m {
            let mut col = coeffs[mm * k..(mm + 1) * k].to_vec();
            self.dft_k.inverse_in_place(&mut col);
            for r in 0..k {
                d[r * m + mm] = col[r] * scale;
            }
        }
        let mut x = vec![Complex::new(T::zero(), T::zero()); k * m];
        for r in 0..k {
            let g = &self.poly[r * m..(r + 1) * m];
            let dr = &d[r * m..(r + 1) * m];
            for q in 0..m {
                let mut acc = Complex::new(T::zero(), T::zero());
                for mm in 0..m {
                    acc += dr[mm] * g[(q + m - mm) % m];
                }
                x[r + q * k] = acc;
            }
        }
        x
    }

    /// Adjoint of [`Self::synthesize`] (matched filter bank).
    pub fn analyze(&self, y: &[Complex<T>]) -> Vec<Complex<T>> {
        let (k, m) = (self.k, self.m);
        let mut out = vec![Complex::new(T::zero(), T::zero()); k * m];
        let mut cols = vec![Complex::new(T::zero(), T::zero()); k * m];
        for r in 0..k {
            let g = &self.poly[r * m..(r + 1) * m];
            for mm in 0..m {
                let mut acc = Complex::new(T::zero(), T::zero());
                for q in 0..m {
                    acc += y[r + q * k] * g[(q + m - mm) % m];
                }
                cols[mm * k + r] = acc;
            }
        }
        for mm in 0..m {
            let col = &mut cols[mm * k..(mm + 1) * k];
            self.dft_k.forward_in_place(col);
            out[mm * k..(mm + 1) * k].copy_from_slice(col);
        }
        out
    }

    /// Pseudo-inverse of [`Self::synthesize`] (zero-forcing receiver).
    pub fn invert(&self, y: &[Complex<T>]) -> Vec<Complex<T>> {
        let (k, m) = (self.k, self.m);
        let mut cols = vec![Complex::new(T::zero(), T::zero()); k * m];
        let mut buf = vec![Complex::new(T::zero(), T::zero()); m];
        for r in 0..k {
            for q in 0..m {
                buf[q] = y[r + q * k];
            }
            self.dft_m.forward_in_place(&mut buf);
            for l in 0..m {
                buf[l] *= self.inv_gain[r * m + l];
            }
            self.dft_m.inverse_in_place(&mut buf);
            for mm in 0..m {
                cols[mm * k + r] = buf[mm];
            }
        }
        let scale = T::one() / T::from_usize_lossy(k);
        for mm in 0..m {
            let col = &mut cols[mm * k..(mm + 1) * k];
            self.dft_k.forward_in_place(col);
            col.iter_mut().for_each(|v| *v = *v * scale);
        }
        cols
    }
}
