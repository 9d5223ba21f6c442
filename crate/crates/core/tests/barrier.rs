use std::f64::consts::PI;

use proptest::prelude::*;
use stsdelay_core::quantum::{transfer_matrix_transmission, transmission_coefficient, wavenumbers, BarrierSpec};

fn closed(energy: f64, barrier: &BarrierSpec) -> stsdelay_core::Complex64 {
    let w = wavenumbers(energy, barrier).unwrap();
    transmission_coefficient(w.k, w.k1, barrier.length).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closed_form_matches_transfer_matrix(
        energy in 0.01f64..10.0,
        height in 0.0f64..3.0,
        length in 0.1f64..3.0,
    ) {
        prop_assume!((energy - height).abs() > 1e-3);
        let b = BarrierSpec::natural(height, length).unwrap();
        let t = closed(energy, &b);
        let m = transfer_matrix_transmission(energy, &b).unwrap();
        prop_assert!((t - m).norm() <= 1e-10 * m.norm(), "{} vs {}", t, m);
    }

    #[test]
    fn transmission_never_exceeds_unity(energy in 1e-4f64..20.0, height in 0.0f64..5.0, length in 1e-3f64..10.0) {
        let b = BarrierSpec::natural(height, length).unwrap();
        prop_assert!(closed(energy, &b).norm() <= 1.0 + 1e-12);
    }
}

#[test]
fn modulus_bounded_on_lattice() {
    let b_height = 1.0;
    for i in 0..20 {
        for j in 0..10 {
            let energy = 0.05 + 0.15 * i as f64;
            let length = 0.3 + 0.6 * j as f64;
            let b = BarrierSpec::natural(b_height, length).unwrap();
            let t = closed(energy, &b).norm();
            assert!(t <= 1.0 + 1e-12, "E = {energy}, L = {length}: {t}");
            let k1 = (2.0 * (energy - b_height)).max(0.0).sqrt();
            if energy < b_height || ((k1 * length / PI).round() * PI - k1 * length).abs() > 1e-3 {
                assert!(t < 1.0 - 1e-9, "E = {energy}, L = {length}: {t}");
            }
        }
    }
}

#[test]
fn constructed_resonances_are_transparent() {
    let (height, length) = (1.0, 3.0);
    let b = BarrierSpec::natural(height, length).unwrap();
    for n in 1..=5 {
        let k1 = n as f64 * PI / length;
        let energy = height + k1 * k1 / 2.0;
        assert!((closed(energy, &b).norm() - 1.0).abs() < 1e-10, "n = {n}");
    }
}

#[test]
fn classical_limit_is_transparent() {
    let b = BarrierSpec::natural(1.0, 3.0).unwrap();
    assert!(closed(1e4, &b).norm() > 0.9999);
    let free = closed(2.0, &BarrierSpec::natural(0.0, 3.0).unwrap());
    assert!((free - stsdelay_core::Complex64::new(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn barrier_top_is_continuous() {
    let b = BarrierSpec::natural(1.0, 3.0).unwrap();
    let at = closed(1.0, &b);
    for eps in [1e-6, 1e-9, 1e-12] {
        assert!((closed(1.0 + eps, &b) - at).norm() < 100.0 * eps);
        assert!((closed(1.0 - eps, &b) - at).norm() < 100.0 * eps);
    }
}
