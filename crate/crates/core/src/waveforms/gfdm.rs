use num_complex::Complex;

use crate::error::Result;
use crate::pulses::PrototypeFilter;
use crate::scalar::Real;

use super::bank::PolyphaseBank;
use super::grid::ResourceGrid;

/// Circularly pulse-shaped block with a zero-forcing receiver.
#[derive(Debug, Clone)]
pub(super) struct GfdmCore<T: Real> {
    k: usize,
    m: usize,
    bank: PolyphaseBank<T>,
}

impl<T: Real> GfdmCore<T> {
    pub fn new(pulse: &PrototypeFilter<T>, k: usize, m: usize) -> Result<Self> {
        Ok(Self {
            k,
            m,
            bank: PolyphaseBank::new(pulse.taps(), k, m, 0)?,
        })
    }

    pub fn singular_gains(&self) -> usize {
        self.bank.singular_gains()
    }

    pub fn synthesize(&self, grid: &ResourceGrid<T>, rows: &[(usize, usize)]) -> Vec<Complex<T>> {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); self.k * self.m];
        for &(row, bin) in rows {
            for m in 0..self.m {
                coeffs[m * self.k + bin] = grid.get(row, m);
            }
        }
        self.bank.synthesize(&coeffs)
    }

    pub fn detect(&self, block: &[Complex<T>], out: &mut ResourceGrid<T>, rows: &[(usize, usize)]) {
        let est = self.bank.invert(block);
        for &(row, bin) in rows {
            for m in 0..self.m {
                out.set(row, m, est[m * self.k + bin]);
            }
        }
    }
}
