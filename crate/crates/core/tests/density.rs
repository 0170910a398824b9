use acldpc::density::{
    discretized_de_threshold, ga_converges, ga_threshold, EnsembleSpec, Quantization,
};

#[test]
fn ga_thresholds_grow_with_check_degree() {
    let t: Vec<f64> = [6, 15, 30]
        .iter()
        .map(|&dc| ga_threshold(EnsembleSpec::new(3, dc).unwrap(), 0.01).unwrap())
        .collect();
    assert!(t.windows(2).all(|w| w[0] < w[1]), "{t:?}");
    assert!((1.1..1.25).contains(&t[0]), "{t:?}");
}

#[test]
fn ga_convergence_is_monotone_in_snr() {
    let spec = EnsembleSpec::new(4, 16).unwrap();
    let t = ga_threshold(spec, 0.01).unwrap();
    assert!(ga_converges(spec, t + 0.05));
    assert!(!ga_converges(spec, t - 0.05));
}

#[test]
fn discretized_threshold_settles_as_the_z_grid_is_refined() {
    let spec = EnsembleSpec::new(3, 6).unwrap();
    let t: Vec<f64> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|&z_step| {
            let q = Quantization {
                z_step,
                ..Quantization::default()
            };
            discretized_de_threshold(spec, q, 0.01).unwrap()
        })
        .collect();
    assert!((t[1] - t[2]).abs() <= (t[0] - t[1]).abs() + 0.02, "{t:?}");
    assert!(t.iter().all(|x| (x - t[2]).abs() < 0.1), "{t:?}");
}

#[test]
fn coarse_quantization_is_rejected() {
    let spec = EnsembleSpec::new(3, 6).unwrap();
    let coarse = Quantization {
        step: 0.05,
        ..Quantization::default()
    };
    assert!(discretized_de_threshold(spec, coarse, 0.01).is_err());
    let narrow = Quantization {
        range: 20.0,
        ..Quantization::default()
    };
    assert!(discretized_de_threshold(spec, narrow, 0.01).is_err());
}
