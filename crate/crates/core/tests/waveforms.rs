mod common;

use common::*;
use mcwave::channel::{apply_channel_slice, cost207_ht, freq_response};
use mcwave::constellation::Constellation;
use mcwave::pulses::{PulseFamily, PulseSpec};
use mcwave::waveforms::*;
use mcwave::Error;
use std::f64::consts::PI;

#[test]
fn ofdm_single_tone_is_scaled_exponential() {
    let k = 64;
    let cfg = small(Scheme::Ofdm, k, 1, PulseSpec::rc(0.1));
    for k0 in [-5isize, 0, 7] {
        let row = (k0 + (k / 2) as isize) as usize;
        let f = ofdm_modulate(&unit_grid(&cfg, row, 0), &cfg).unwrap();
        for (n, v) in f.samples().iter().enumerate() {
            let want = C::from_polar(1.0 / (k as f64).sqrt(), 2.0 * PI * (k0 * n as isize) as f64 / k as f64);
            assert!((v - want).norm() < 1e-12);
        }
    }
}

#[test]
fn cp_is_payload_tail_for_every_symbol() {
    let mut cfg = WaveformConfig::base(Scheme::Ofdm);
    cfg.window_len = 0;
    let (g, _) = random_grid(&cfg, 3);
    let f = ofdm_modulate(&g, &cfg).unwrap();
    let (k, cp) = (cfg.subcarriers, cfg.cp_len);
    assert_eq!(f.len(), cfg.slots * (k + cp));
    for sym in f.samples().chunks(k + cp) {
        assert_eq!(&sym[..cp], &sym[k..]);
    }
    assert_eq!(f.overhead.cp, cfg.slots * cp);
}

#[test]
fn ofdm_round_trip_and_guard_bins() {
    let cfg = WaveformConfig::base(Scheme::Ofdm);
    let (g, _) = random_grid(&cfg, 11);
    let f = ofdm_modulate(&g, &cfg).unwrap();
    let r = ofdm_demodulate(&f, &cfg, None).unwrap();
    assert!(max_err(g.symbols(), r.symbols()) < 1e-10);

    let modem = Modem::<f64>::new(&cfg).unwrap();
    let mask = cfg.active_mask().unwrap();
    for block in modem.payload_blocks(&g).unwrap() {
        let spec = mcwave::signal::dft_slice(&block, false).unwrap();
        for (row, &on) in mask.iter().enumerate() {
            if !on {
                assert!(spec[row_bin(row, cfg.subcarriers)].norm() < 1e-10);
            }
        }
    }
}

#[test]
fn gfdm_with_one_slot_dirichlet_is_ofdm() {
    let (k, pulse) = (32, PulseSpec::of(PulseFamily::Dirichlet));
    let g_cfg = small(Scheme::Gfdm, k, 1, pulse);
    let o_cfg = small(Scheme::Ofdm, k, 1, pulse);
    let (g, _) = random_grid(&g_cfg, 5);
    let a = gfdm_modulate(&g, &g_cfg).unwrap();
    let b = ofdm_modulate(&g, &o_cfg).unwrap();
    assert!(max_err(a.samples(), b.samples()) < 1e-9);
}

#[test]
fn gfdm_single_symbol_is_shifted_modulated_pulse() {
    let (k, m) = (8, 5);
    let cfg = small(Scheme::Gfdm, k, m, PulseSpec::rc(0.3));
    let p = cfg.pulse.build::<f64>(k, m).unwrap();
    let (row, col) = (6, 2);
    let kk = row_frequency(row, k) as f64;
    let x = gfdm_modulate(&unit_grid(&cfg, row, col), &cfg).unwrap();
    let n = k * m;
    for (i, v) in x.samples().iter().enumerate() {
        let g = p.taps()[(i + n - col * k) % n];
        let want = C::from_polar(g, 2.0 * PI * kk * i as f64 / k as f64);
        assert!((v - want).norm() < 1e-12);
    }
}

#[test]
fn gfdm_zf_matches_pseudo_inverse() {
    let cfg = small(Scheme::Gfdm, 8, 5, PulseSpec::rc(0.1));
    let a = modulation_matrix(&cfg);
    let pinv = a.clone().pseudo_inverse(1e-12).unwrap();
    let (g, _) = random_grid(&cfg, 21);
    let f = gfdm_modulate(&g, &cfg).unwrap();
    let y = nalgebra::DVector::from_column_slice(f.samples());
    let want = &pinv * y;
    let got = gfdm_demodulate(&f, &cfg, None).unwrap();
    let mut flat = vec![C::new(0.0, 0.0); 40];
    for r in 0..8 {
        for c in 0..5 {
            flat[r * 5 + c] = got.get(r, c);
        }
    }
    let scale = want.iter().map(|v| v.norm()).fold(0.0, f64::max);
    assert!(max_err(&flat, want.as_slice()) / scale < 1e-8);
    assert!(max_err(&flat, g.symbols()) < 1e-8);
}

#[test]
fn dirichlet_gfdm_columns_are_orthogonal() {
    for (k, m) in [(8, 3), (16, 5), (4, 1)] {
        let a = modulation_matrix(&small(Scheme::Gfdm, k, m, PulseSpec::of(PulseFamily::Dirichlet)));
        let gram = a.adjoint() * &a;
        let diag = (0..gram.nrows()).map(|i| gram[(i, i)].re).fold(f64::MAX, f64::min);
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                if i != j {
                    assert!(gram[(i, j)].norm() < 1e-8 * diag, "K={k} M={m} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn all_schemes_and_pulses_round_trip_without_errors() {
    let qam = Constellation::<f64>::qam(4).unwrap();
    for pulse in all_pulses() {
        for scheme in Scheme::ALL {
            if scheme == Scheme::WcpCoqam && !pulse.family.is_oqam_compatible() {
                continue;
            }
            let mut cfg = WaveformConfig::base(scheme);
            cfg.pulse = pulse;
            if pulse.family == PulseFamily::Phydyas {
                cfg.slots = 8;
            }
            let modem = Modem::<f64>::new(&cfg).unwrap();
            let (g, labels) = random_grid(&cfg, 77);
            let f = modem.modulate(&g).unwrap();
            let r = modem.demodulate(f.samples(), None).unwrap();
            let errs = r
                .active_symbols()
                .iter()
                .zip(&labels)
                .filter(|(v, l)| qam.decide(**v) != **l)
                .count();
            assert_eq!(errs, 0, "{scheme} {:?}", pulse.family);
        }
    }
}

#[test]
fn coqam_phydyas_residual_interference() {
    let mut cfg = WaveformConfig::base(Scheme::WcpCoqam);
    cfg.pulse = PulseSpec::of(PulseFamily::Phydyas);
    cfg.slots = 8;
    let (g, _) = random_grid(&cfg, 8);
    let f = wcp_coqam_modulate(&g, &cfg).unwrap();
    let r = coqam_demodulate(&f, &cfg, None).unwrap();
    let (a, b) = (g.active_symbols(), r.active_symbols());
    let mse: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>() / a.len() as f64;
    assert!(mse.sqrt() <= 1e-3, "rms residual {}", mse.sqrt());
    assert!(max_err(&a, &b) < 5e-3);
}

#[test]
fn coqam_zero_window_is_plain_cyclic_prefix() {
    let mut cfg = WaveformConfig::base(Scheme::WcpCoqam);
    cfg.pulse = PulseSpec::of(PulseFamily::Rrc);
    cfg.window_len = 0;
    let modem = Modem::<f64>::new(&cfg).unwrap();
    let (g, _) = random_grid(&cfg, 2);
    let f = modem.modulate(&g).unwrap();
    let block = modem.payload_blocks(&g).unwrap().remove(0);
    let n = block.len();
    assert_eq!(f.len(), n + cfg.cp_len);
    assert_eq!(f.samples()[0], block[n - cfg.cp_len]);
    assert_eq!(f.samples()[f.len() - 1], block[n - 1]);
}

#[test]
fn frame_energy_tracks_grid_energy() {
    let dir = PulseSpec::of(PulseFamily::Dirichlet);
    for (scheme, pulse) in [(Scheme::Ofdm, dir), (Scheme::Gfdm, dir), (Scheme::Gfdm, PulseSpec::rc(0.1))] {
        let mut cfg = WaveformConfig::base(scheme);
        cfg.pulse = pulse;
        cfg.cp_len = 0;
        cfg.window_len = 0;
        let modem = Modem::<f64>::new(&cfg).unwrap();
        let ratios: Vec<f64> = (0..100)
            .map(|s| {
                let (g, _) = random_grid(&cfg, 1000 + s);
                modem.modulate(&g).unwrap().signal.energy() / g.energy()
            })
            .collect();
        let mean = ratios.iter().sum::<f64>() / 100.0;
        let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / 100.0;
        if pulse.family == PulseFamily::Dirichlet {
            assert!(var < 1e-20, "{scheme}: variance {var}");
            assert!((mean - 1.0).abs() < 1e-10);
        } else {
            // non-orthogonal pulse: cross terms depend on the data
            assert!(var < 1e-4, "{scheme} {:?}: variance {var}", pulse.family);
            assert!((mean - 1.0).abs() < 1e-2);
        }
    }
}

#[test]
fn flat_gain_is_undone_exactly() {
    for scheme in Scheme::ALL {
        let mut cfg = WaveformConfig::base(scheme);
        cfg.pulse = PulseSpec::of(PulseFamily::Rrc);
        let modem = Modem::<f64>::new(&cfg).unwrap();
        let (g, _) = random_grid(&cfg, 4);
        let f = modem.modulate(&g).unwrap();
        let ideal = modem.demodulate(f.samples(), None).unwrap();
        let rx: Vec<C> = f.samples().iter().map(|v| v * 2.0).collect();
        let h = vec![C::new(2.0, 0.0); cfg.payload_len()];
        let eq = modem.demodulate(&rx, Some(&h)).unwrap();
        assert!(max_err(ideal.symbols(), eq.symbols()) < 1e-10, "{scheme}");
    }
}

#[test]
fn cost207_round_trip_with_cp_32() {
    let h = cost207_ht::<f64>(9);
    for scheme in [Scheme::Ofdm, Scheme::Gfdm] {
        let cfg = WaveformConfig::base(scheme);
        assert!(cfg.cp_covers(h.max_delay()));
        let modem = Modem::<f64>::new(&cfg).unwrap();
        let (g, _) = random_grid(&cfg, 6);
        let f = modem.modulate(&g).unwrap();
        let rx = apply_channel_slice(f.samples(), &h);
        let hf = freq_response(&h, cfg.payload_len()).unwrap();
        let r = modem.demodulate(&rx, Some(&hf)).unwrap();
        assert!(max_err(g.symbols(), r.symbols()) < 1e-8, "{scheme}");
    }
}

#[test]
fn zero_channel_bin_is_reported() {
    let cfg = WaveformConfig::base(Scheme::Ofdm);
    let modem = Modem::<f64>::new(&cfg).unwrap();
    let (g, _) = random_grid(&cfg, 1);
    let f = modem.modulate(&g).unwrap();
    let mut h = vec![C::new(1.0, 0.0); cfg.subcarriers];
    let bin = row_bin(40, cfg.subcarriers);
    h[bin] = C::new(0.0, 0.0);
    match modem.demodulate(f.samples(), Some(&h)) {
        Err(Error::EqualizationSingular { bins }) => assert_eq!(bins, vec![bin]),
        other => panic!("expected singular bins, got {other:?}"),
    }
}

#[test]
fn wrong_scheme_and_shape_rejected() {
    let cfg = WaveformConfig::base(Scheme::Gfdm);
    let (g, _) = random_grid(&cfg, 1);
    assert!(ofdm_modulate(&g, &cfg).is_err());
    let other = small(Scheme::Gfdm, 16, 3, PulseSpec::rc(0.1));
    assert!(matches!(gfdm_modulate(&g, &other), Err(Error::ShapeError(_))));
}
