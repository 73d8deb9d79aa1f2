use num_complex::Complex;

use crate::error::Result;
use crate::pulses::PrototypeFilter;
use crate::scalar::Real;

use super::bank::PolyphaseBank;
use super::grid::ResourceGrid;

/// Circular OQAM block.
///
/// Each complex symbol `d[i, m]` becomes two real symbols on half-slots
/// `2m` (real part) and `2m + 1` (imaginary part). Half-slot `h` uses the
/// pulse delayed by `h K / 2` and the phase `j^(i + h)`; the carrier phase is
/// referenced to the pulse centre so that the basis is orthogonal in the real
/// inner product.
#[derive(Debug, Clone)]
pub(super) struct CoqamCore<T: Real> {
    k: usize,
    m: usize,
    center: usize,
    banks: [PolyphaseBank<T>; 2],
}

fn j_pow<T: Real>(e: usize) -> Complex<T> {
    let (o, z) = (T::one(), T::zero());
    match e % 4 {
        0 => Complex::new(o, z),
        1 => Complex::new(z, o),
        2 => Complex::new(-o, z),
        _ => Complex::new(z, -o),
    }
}

impl<T: Real> CoqamCore<T> {
    pub fn new(pulse: &PrototypeFilter<T>, k: usize, m: usize) -> Result<Self> {
        Ok(Self {
            k,
            m,
            center: pulse.center(),
            banks: [
                PolyphaseBank::new(pulse.taps(), k, m, 0)?,
                PolyphaseBank::new(pulse.taps(), k, m, k / 2)?,
            ],
        })
    }

    /// Phase applied to the real symbol on row `row` (DFT bin `bin`), half-slot `h`.
    fn phase(&self, row: usize, bin: usize, h: usize) -> Complex<T> {
        let ang = -2.0 * std::f64::consts::PI * (bin * self.center % self.k) as f64 / self.k as f64;
        j_pow::<T>(row + h) * Complex::from_polar(T::one(), T::lit(ang))
    }

    pub fn synthesize(&self, grid: &ResourceGrid<T>, rows: &[(usize, usize)]) -> Vec<Complex<T>> {
        let n = self.k * self.m;
        let mut x = vec![Complex::new(T::zero(), T::zero()); n];
        for (s, bank) in self.banks.iter().enumerate() {
            let mut coeffs = vec![Complex::new(T::zero(), T::zero()); n];
            for &(row, bin) in rows {
                for m in 0..self.m {
                    let d = grid.get(row, m);
                    let a = if s == 0 { d.re } else { d.im };
                    coeffs[m * self.k + bin] = self.phase(row, bin, 2 * m + s) * a;
                }
            }
            for (xi, yi) in x.iter_mut().zip(bank.synthesize(&coeffs)) {
                *xi += yi;
            }
        }
        x
    }

    pub fn detect(&self, block: &[Complex<T>], out: &mut ResourceGrid<T>, rows: &[(usize, usize)]) {
        let est = [self.banks[0].analyze(block), self.banks[1].analyze(block)];
        for &(row, bin) in rows {
            for m in 0..self.m {
                let idx = m * self.k + bin;
                let re = (est[0][idx] * self.phase(row, bin, 2 * m).conj()).re;
                let im = (est[1][idx] * self.phase(row, bin, 2 * m + 1).conj()).re;
                out.set(row, m, Complex::new(re, im));
            }
        }
    }
}
