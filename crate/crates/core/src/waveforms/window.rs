use num_complex::Complex;

use crate::scalar::Real;

/// Rising half-Hanning ramp of `len` samples, `sin^2(pi (i + 1/2) / (2 len))`.
///
/// A ramp and its time reverse sum to exactly one, so the falling edge of one
/// symbol and the rising edge of the next overlap-add to a flat envelope.
pub fn hann_ramp<T: Real>(len: usize) -> Vec<T> {
    (0..len)
        .map(|i| {
            let s = (std::f64::consts::PI * (i as f64 + 0.5) / (2.0 * len as f64)).sin();
            T::lit(s * s)
        })
        .collect()
}

/// Cyclic prefix plus windowed cyclic extension of one periodic block.
///
/// Output layout: `window_len` ramped prefix samples, `cp_len` CP samples, the
/// payload, then `window_len` ramped suffix samples. Every sample continues the
/// payload periodically, so only the two ramps alter it.
pub fn apply_edge_window<T: Real>(
    payload: &[Complex<T>],
    cp_len: usize,
    window_len: usize,
) -> Vec<Complex<T>> {
    let n = payload.len();
    let pre = cp_len + window_len;
    let total = n + pre + window_len;
    let mut out = Vec::with_capacity(total);
    for i in 0..total {
        let idx = (i as isize - pre as isize).rem_euclid(n as isize) as usize;
        out.push(payload[idx]);
    }
    if window_len > 0 {
        let ramp = hann_ramp::<T>(window_len);
        for i in 0..window_len {
            out[i] = out[i] * ramp[i];
            out[total - 1 - i] = out[total - 1 - i] * ramp[i];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(n: usize) -> Vec<Complex<f64>> {
        vec![Complex::new(1.0, 0.0); n]
    }

    #[test]
    fn zero_window_is_identity() {
        let x: Vec<Complex<f64>> = (0..10).map(|i| Complex::new(i as f64, -(i as f64))).collect();
        assert_eq!(apply_edge_window(&x, 0, 0), x);
    }

    #[test]
    fn lengths_add_up() {
        let x = ones(64);
        assert_eq!(apply_edge_window(&x, 0, 7).len(), 64 + 14);
        assert_eq!(apply_edge_window(&x, 16, 7).len(), 64 + 16 + 14);
    }

    #[test]
    fn cp_is_payload_tail() {
        let x: Vec<Complex<f64>> = (0..32).map(|i| Complex::new(i as f64, 0.0)).collect();
        let y = apply_edge_window(&x, 8, 0);
        assert_eq!(&y[..8], &x[24..]);
        assert_eq!(&y[8..], &x[..]);
    }

    #[test]
    fn ramps_are_complementary() {
        let w = 18;
        let a = apply_edge_window(&ones(64), 4, w);
        let b = apply_edge_window(&ones(64), 4, w);
        // falling tail of `a` overlapped with rising head of `b`
        let tail = &a[a.len() - w..];
        for i in 0..w {
            let sum = tail[i] + b[i];
            assert!((sum.re - 1.0).abs() < 1e-9 && sum.im.abs() < 1e-12);
        }
        let r = hann_ramp::<f64>(w);
        assert!(r[0] < 0.01);
        assert!(r[w - 1] > 0.99 && r[w - 1] < 1.0);
        // first unramped sample carries full weight
        assert_eq!(a[w], Complex::new(1.0, 0.0));
    }
}
