use mcwave::channel::*;
use num_complex::Complex;

#[test]
fn path_powers_follow_the_profile() {
    let profile = TapDelayProfile::cost207_ht12();
    let want = profile.normalized_powers();
    let trials = 20_000;
    let mut acc = vec![0.0; want.len()];
    for seed in 0..trials {
        let h = cost207_ht::<f64>(seed);
        for (a, g) in acc.iter_mut().zip(h.path_gains()) {
            *a += g.norm_sqr();
        }
    }
    for (a, w) in acc.iter().zip(&want) {
        let est = a / trials as f64;
        assert!((est / w - 1.0).abs() < 0.05, "estimated {est}, profile {w}");
    }
}

#[test]
fn nearest_sample_placement() {
    let idx = TapDelayProfile::cost207_ht12().sample_indices(1e6);
    assert_eq!(idx, vec![0, 0, 0, 1, 1, 1, 1, 15, 15, 16, 17, 20]);
    let idx6 = TapDelayProfile::cost207_ht6().sample_indices(1e6);
    assert_eq!(idx6, vec![0, 0, 0, 1, 15, 17]);
}

#[test]
fn channel_then_response_is_circular_convolution() {
    let h = cost207_ht::<f64>(5);
    let n = 64;
    let x: Vec<Complex<f64>> = (0..n).map(|i| Complex::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
    let cp = 24;
    let mut tx = x[n - cp..].to_vec();
    tx.extend_from_slice(&x);
    let rx = apply_channel_slice(&tx, &h);
    let y = mcwave::signal::dft_slice(&rx[cp..], false).unwrap();
    let xf = mcwave::signal::dft_slice(&x, false).unwrap();
    let hf = freq_response(&h, n).unwrap();
    for k in 0..n {
        assert!((y[k] - xf[k] * hf[k]).norm() < 1e-10);
    }
}
