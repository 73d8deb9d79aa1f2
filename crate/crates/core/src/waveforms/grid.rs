use num_complex::Complex;

use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::noise::Rng;
use crate::scalar::Real;
use crate::signal::ComplexSignal;

use super::config::WaveformConfig;

/// `K x M` symbols in centred subcarrier order, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceGrid<T: Real> {
    rows: usize,
    cols: usize,
    symbols: Vec<Complex<T>>,
    active: Vec<bool>,
}

impl<T: Real> ResourceGrid<T> {
    pub fn zeros(active: Vec<bool>, cols: usize) -> Self {
        let rows = active.len();
        Self {
            rows,
            cols,
            symbols: vec![Complex::new(T::zero(), T::zero()); rows * cols],
            active,
        }
    }

    /// Grid from explicit symbols; inactive rows must be exactly zero.
    pub fn new(symbols: Vec<Complex<T>>, active: Vec<bool>, cols: usize) -> Result<Self> {
        let rows = active.len();
        if symbols.len() != rows * cols {
            return Err(Error::ShapeError(format!(
                "{} symbols do not fill a {rows}x{cols} grid",
                symbols.len()
            )));
        }
        for (r, &on) in active.iter().enumerate() {
            if !on && symbols[r * cols..(r + 1) * cols].iter().any(|s| s.norm_sqr() != T::zero()) {
                return Err(Error::ShapeError(format!("inactive row {r} carries energy")));
            }
        }
        Ok(Self {
            rows,
            cols,
            symbols,
            active,
        })
    }

    /// Uniform random payload; returns the grid and the constellation label
    /// of every active cell in row-major order.
    pub fn random(
        cfg: &WaveformConfig,
        constellation: &Constellation<T>,
        rng: &mut Rng,
    ) -> Result<(Self, Vec<usize>)> {
        let mut grid = Self::zeros(cfg.active_mask()?, cfg.slots);
        let mut labels = Vec::with_capacity(cfg.active_subcarriers() * cfg.slots);
        for r in 0..grid.rows {
            if !grid.active[r] {
                continue;
            }
            for c in 0..grid.cols {
                let label = rng.uniform_index(constellation.order());
                labels.push(label);
                grid.symbols[r * grid.cols + c] = constellation.point(label);
            }
        }
        Ok((grid, labels))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn active_mask(&self) -> &[bool] {
        &self.active
    }

    pub fn is_active(&self, row: usize) -> bool {
        self.active[row]
    }

    pub fn symbols(&self) -> &[Complex<T>] {
        &self.symbols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.symbols[row * self.cols + col]
    }

    /// Writes a cell; writes to inactive rows are ignored.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: Complex<T>) {
        if self.active[row] {
            self.symbols[row * self.cols + col] = v;
        }
    }

    pub fn energy(&self) -> T {
        crate::signal::energy(&self.symbols)
    }

    /// Active cells in row-major order.
    pub fn active_symbols(&self) -> Vec<Complex<T>> {
        (0..self.rows)
            .filter(|&r| self.active[r])
            .flat_map(|r| self.symbols[r * self.cols..(r + 1) * self.cols].iter().copied())
            .collect()
    }

    pub fn check_shape(&self, cfg: &WaveformConfig) -> Result<()> {
        if self.rows != cfg.subcarriers || self.cols != cfg.slots {
            return Err(Error::ShapeError(format!(
                "grid is {}x{}, config expects {}x{}",
                self.rows, self.cols, cfg.subcarriers, cfg.slots
            )));
        }
        if self.active != cfg.active_mask()? {
            return Err(Error::ShapeError("grid active mask differs from config allocation".into()));
        }
        Ok(())
    }
}

/// Sample counts making up a transmitted frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Overhead {
    pub cp: usize,
    pub window: usize,
    pub payload: usize,
}

impl Overhead {
    pub fn total(&self) -> usize {
        self.cp + self.window + self.payload
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame<T: Real> {
    pub signal: ComplexSignal<T>,
    pub overhead: Overhead,
}

impl<T: Real> Frame<T> {
    pub fn new(samples: Vec<Complex<T>>, overhead: Overhead) -> Result<Self> {
        if overhead.total() != samples.len() {
            return Err(Error::ShapeError(format!(
                "overhead accounts for {} samples, frame has {}",
                overhead.total(),
                samples.len()
            )));
        }
        Ok(Self {
            signal: ComplexSignal::at_base_rate(samples)?,
            overhead,
        })
    }

    pub fn samples(&self) -> &[Complex<T>] {
        self.signal.samples()
    }

    pub fn len(&self) -> usize {
        self.signal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signal.is_empty()
    }
}
