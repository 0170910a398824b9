use acldpc::construction::{build_array_exponents, ArrayCodeSpec};
use acldpc::spectrum::{
    brute_force_spectrum, compute_tub, error_impulse_search, estimate_spectrum_mc, write_tub_csv,
    Anchors, BoundKind, ImpulseConfig, McConfig, SpectrumBasis, WeightSpectrum,
};
use acldpc::unwrap::{terminate, unwrap_exponents, TerminatedCode, Termination};

fn h_prime_code(periods: usize, mode: Termination) -> TerminatedCode {
    let e = build_array_exponents(&ArrayCodeSpec::proper(5, 3, 5).unwrap()).unwrap();
    terminate(&unwrap_exponents(&e).unwrap(), periods, mode).unwrap()
}

#[test]
fn tiny_code_exhaustive_spectrum() {
    let tc = h_prime_code(5, Termination::TailBiting);
    let s = brute_force_spectrum(tc.code(), 25).unwrap();
    assert!(s.exhaustive);
    assert_eq!(s.basis, SpectrumBasis::PerBlock);
    assert_eq!(s.min_distance(), Some(6));
    assert_eq!(s.multiplicity(6), 50);
    assert_eq!(s.entries.iter().map(|e| e.a).sum::<u64>(), 4095);
    assert!(s.entries.iter().all(|e| e.d % 2 == 0));
}

#[test]
fn weight_cap_truncates_the_listing() {
    let tc = h_prime_code(5, Termination::TailBiting);
    let full = brute_force_spectrum(tc.code(), 25).unwrap();
    let capped = brute_force_spectrum(tc.code(), 8).unwrap();
    assert_eq!(capped.weight_cap, Some(8));
    assert_eq!(
        capped.entries,
        full.entries
            .iter()
            .filter(|e| e.d <= 8)
            .cloned()
            .collect::<Vec<_>>()
    );
}

#[test]
fn impulse_search_finds_the_free_distance_of_a_short_code() {
    let tc = h_prime_code(8, Termination::Zero);
    let exact = brute_force_spectrum(tc.code(), 8).unwrap();
    let cfg = ImpulseConfig {
        anchors: Anchors::Range(0, 5),
        ..ImpulseConfig::new(2)
    };
    let s = error_impulse_search(&tc, &cfg).unwrap();
    assert_eq!(s.basis, SpectrumBasis::PerPeriod);
    assert!(!s.exhaustive);
    assert_eq!(s.d_upper(), exact.min_distance());
}

#[test]
fn monte_carlo_search_finds_only_codewords_of_listed_weights() {
    let tc = h_prime_code(8, Termination::Zero);
    let exact = brute_force_spectrum(tc.code(), tc.n()).unwrap();
    let cfg = McConfig {
        ebno_db: 0.0,
        rate: 0.4,
        frames: 3000,
        seed: 9,
        workers: 1,
        max_iter: 50,
    };
    let s = estimate_spectrum_mc(&tc, &cfg).unwrap();
    assert!(!s.is_empty());
    assert!(s.entries.iter().all(|e| exact.multiplicity(e.d) > 0));
}

#[test]
fn spectrum_json_round_trip_and_field_names() {
    let tc = h_prime_code(5, Termination::TailBiting);
    let s = brute_force_spectrum(tc.code(), 10).unwrap();
    let json = s.to_json();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    for key in ["basis", "exhaustive", "info_bits", "weight_cap", "entries"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["entries"][0]["d"], 6);
    assert_eq!(v["entries"][0]["A"], 50);
    assert_eq!(WeightSpectrum::from_json(&json).unwrap(), s);
}

#[test]
fn union_bound_is_monotone_and_ordered() {
    let tc = h_prime_code(5, Termination::TailBiting);
    let s = brute_force_spectrum(tc.code(), 25).unwrap();
    let grid: Vec<f64> = (0..9).map(|i| i as f64).collect();
    let ber = compute_tub(&s, 0.48, &grid, BoundKind::Ber).unwrap();
    let fer = compute_tub(&s, 0.48, &grid, BoundKind::Fer).unwrap();
    assert!(ber.windows(2).all(|w| w[1].bound < w[0].bound));
    // W_d / k never exceeds A_d, since W_d <= k·A_d.
    assert!(ber.iter().zip(&fer).all(|(b, f)| b.bound <= f.bound));
    let mut buf = Vec::new();
    write_tub_csv(&ber, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next(), Some("ebno_db,bound"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn empty_spectrum_has_no_bound() {
    let s = WeightSpectrum {
        basis: SpectrumBasis::PerBlock,
        exhaustive: true,
        info_bits: 1.0,
        weight_cap: None,
        entries: vec![],
    };
    assert!(compute_tub(&s, 0.5, &[1.0], BoundKind::Ber).is_err());
}
