//! Gray-labelled square QAM.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Square QAM alphabet with unit average energy and per-axis Gray labels.
///
/// A label of `log2(Q)` bits is split in half: the leading bits select the
/// in-phase level, the trailing bits the quadrature level. Bit value 0 maps to
/// the positive half of each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation<T: Real> {
    order: usize,
    bits_per_symbol: usize,
    levels_per_axis: usize,
    scale: T,
    points: Vec<Complex<T>>,
}

fn gray_to_binary(mut g: usize) -> usize {
    let mut b = g;
    while g > 0 {
        g >>= 1;
        b ^= g;
    }
    b
}

fn binary_to_gray(b: usize) -> usize {
    b ^ (b >> 1)
}

impl<T: Real> Constellation<T> {
    /// `order` must be an even power of two (4, 16, 64, ...).
    pub fn qam(order: usize) -> Result<Self> {
        let bits = order.trailing_zeros() as usize;
        if order < 4 || !order.is_power_of_two() || bits % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "QAM order must be an even power of two >= 4, got {order}"
            )));
        }
        let levels = 1usize << (bits / 2);
        let l = levels as f64;
        let scale = T::lit(1.0 / (2.0 * (l * l - 1.0) / 3.0).sqrt());
        let mut c = Self {
            order,
            bits_per_symbol: bits,
            levels_per_axis: levels,
            scale,
            points: Vec::with_capacity(order),
        };
        c.points = (0..order).map(|label| c.point_for_label(label)).collect();
        Ok(c)
    }

    fn axis_level(&self, gray: usize) -> T {
        // Gray label 0 sits at the most positive amplitude.
        let idx = gray_to_binary(gray);
        let lv = (self.levels_per_axis - 1) as f64 - 2.0 * idx as f64;
        T::lit(lv) * self.scale
    }

    fn point_for_label(&self, label: usize) -> Complex<T> {
        let half = self.bits_per_symbol / 2;
        let i_bits = label >> half;
        let q_bits = label & ((1 << half) - 1);
        Complex::new(self.axis_level(i_bits), self.axis_level(q_bits))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Point indexed by its bit label (MSB first).
    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    pub fn point(&self, label: usize) -> Complex<T> {
        self.points[label]
    }

    fn axis_decide(&self, v: T) -> usize {
        let l = self.levels_per_axis as f64;
        let a = v.to_f64_lossy() / self.scale.to_f64_lossy();
        let idx = ((l - 1.0 - a) / 2.0).round().clamp(0.0, l - 1.0) as usize;
        binary_to_gray(idx)
    }

    /// Minimum-distance decision, returning the label of the nearest point.
    pub fn decide(&self, s: Complex<T>) -> usize {
        let half = self.bits_per_symbol / 2;
        (self.axis_decide(s.re) << half) | self.axis_decide(s.im)
    }

    /// Maps bits (one `bool` per bit, MSB of each label first) to symbols.
    pub fn map_bits(&self, bits: &[bool]) -> Result<Vec<Complex<T>>> {
        if bits.len() % self.bits_per_symbol != 0 {
            return Err(Error::InvalidLength(format!(
                "{} bits is not a multiple of {} bits per symbol",
                bits.len(),
                self.bits_per_symbol
            )));
        }
        Ok(bits
            .chunks(self.bits_per_symbol)
            .map(|chunk| {
                let label = chunk.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
                self.points[label]
            })
            .collect())
    }

    pub fn demap_symbols(&self, symbols: &[Complex<T>]) -> Vec<bool> {
        let mut out = Vec::with_capacity(symbols.len() * self.bits_per_symbol);
        for &s in symbols {
            let label = self.decide(s);
            for b in (0..self.bits_per_symbol).rev() {
                out.push((label >> b) & 1 == 1);
            }
        }
        out
    }
}
