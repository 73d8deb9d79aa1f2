use num_complex::Complex;

use crate::error::Result;
use crate::scalar::Real;
use crate::signal::Dft;

use super::grid::ResourceGrid;

/// Unitary `K`-point multicarrier symbol per grid column.
#[derive(Debug, Clone)]
pub(super) struct OfdmCore<T: Real> {
    dft: Dft<T>,
    scale: T,
}

impl<T: Real> OfdmCore<T> {
    pub fn new(k: usize) -> Result<Self> {
        Ok(Self {
            dft: Dft::new(k)?,
            scale: T::from_usize_lossy(k).sqrt(),
        })
    }

    pub fn synthesize(&self, grid: &ResourceGrid<T>, rows: &[(usize, usize)]) -> Vec<Vec<Complex<T>>> {
        let k = grid.rows();
        (0..grid.cols())
            .map(|m| {
                let mut bins = vec![Complex::new(T::zero(), T::zero()); k];
                for &(row, bin) in rows {
                    bins[bin] = grid.get(row, m);
                }
                self.dft.inverse_in_place(&mut bins);
                bins.iter_mut().for_each(|v| *v = *v * self.scale);
                bins
            })
            .collect()
    }

    pub fn detect(&self, blocks: &[Vec<Complex<T>>], out: &mut ResourceGrid<T>, rows: &[(usize, usize)]) {
        for (m, block) in blocks.iter().enumerate() {
            let mut bins = block.clone();
            self.dft.forward_in_place(&mut bins);
            for &(row, bin) in rows {
                out.set(row, m, bins[bin] / self.scale);
            }
        }
    }
}
