#![allow(dead_code)]

use mcwave::constellation::Constellation;
use mcwave::noise::Rng;
use mcwave::pulses::{PulseFamily, PulseSpec};
use mcwave::waveforms::{Modem, ResourceGrid, Scheme, WaveformConfig};
use nalgebra::DMatrix;
use num_complex::Complex;

pub type C = Complex<f64>;

pub fn small(scheme: Scheme, k: usize, m: usize, pulse: PulseSpec) -> WaveformConfig {
    WaveformConfig {
        subcarriers: k,
        guards: 0,
        slots: m,
        cp_len: 0,
        window_len: 0,
        pulse,
        ..WaveformConfig::base(scheme)
    }
}

pub fn random_grid(cfg: &WaveformConfig, seed: u64) -> (ResourceGrid<f64>, Vec<usize>) {
    let qam = Constellation::qam(cfg.qam_order).unwrap();
    ResourceGrid::random(cfg, &qam, &mut Rng::new(seed)).unwrap()
}

pub fn unit_grid(cfg: &WaveformConfig, row: usize, col: usize) -> ResourceGrid<f64> {
    let mut g = ResourceGrid::zeros(cfg.active_mask().unwrap(), cfg.slots);
    g.set(row, col, C::new(1.0, 0.0));
    g
}

/// `N x KM` matrix whose column `row * M + col` is the payload block of a
/// unit symbol in that cell.
pub fn modulation_matrix(cfg: &WaveformConfig) -> DMatrix<C> {
    let modem = Modem::<f64>::new(cfg).unwrap();
    let (k, m) = (cfg.subcarriers, cfg.slots);
    let n = cfg.payload_len() * if cfg.scheme.is_block() { 1 } else { m };
    let mut a = DMatrix::<C>::zeros(n, k * m);
    for r in 0..k {
        for c in 0..m {
            let x = modem.payload_blocks(&unit_grid(cfg, r, c)).unwrap().concat();
            for (i, v) in x.into_iter().enumerate() {
                a[(i, r * m + c)] = v;
            }
        }
    }
    a
}

pub fn max_err(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn all_pulses() -> Vec<PulseSpec> {
    vec![
        PulseSpec::rc(0.1),
        PulseSpec::rc(0.4),
        PulseSpec::of(PulseFamily::Rrc),
        PulseSpec::of(PulseFamily::Phydyas),
        PulseSpec::of(PulseFamily::Iota),
        PulseSpec::of(PulseFamily::Dirichlet),
    ]
}
