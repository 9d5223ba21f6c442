use stsdelay_core::numerics::{integrate_adaptive, QuadratureSpec};
use stsdelay_core::quantum::{
    delay_time, expected_time_after_barrier, expected_time_closed, expected_time_direct, post_barrier_spectrum,
    rho_t_given_x, Amplitude, BarrierSpec, ClosedForm, MomentumSpectrum, PhasePolynomial, QuantumUnits, TimeGrid,
};
use stsdelay_core::Complex64;

fn gaussian(k0: f64, sigma: f64) -> MomentumSpectrum {
    MomentumSpectrum::incident(ClosedForm::gaussian(k0, sigma).unwrap(), QuantumUnits::NATURAL)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn closed_form_matches_direct_oracle() {
    let spec = gaussian(5.0, 0.2);
    let quad = QuadratureSpec::default();
    let closed = expected_time_closed(&spec, 10.0, &quad).unwrap();
    let direct = expected_time_direct(&spec, 10.0, &TimeGrid::default(), &quad).unwrap();
    assert!(rel(closed.value, direct.value) < 1e-4, "{} vs {}", closed.value, direct.value);
    assert!(closed.imag_residue < 1e-8);
}

#[test]
fn group_velocity_transit() {
    let spec = gaussian(5.0, 0.2);
    let quad = QuadratureSpec::default();
    let t0 = expected_time_direct(&spec, 0.0, &TimeGrid::default(), &quad).unwrap().value;
    let t10 = expected_time_direct(&spec, 10.0, &TimeGrid::default(), &quad).unwrap().value;
    assert!(rel(t10 - t0, 2.0) < 0.02, "{}", t10 - t0);
}

#[test]
fn real_spectrum_at_origin_has_zero_mean_time() {
    let spec = gaussian(3.0, 0.4);
    let quad = QuadratureSpec::default();
    let closed = expected_time_closed(&spec, 0.0, &quad).unwrap();
    assert!(closed.value.abs() < 1e-12, "{}", closed.value);
    let direct = expected_time_direct(&spec, 0.0, &TimeGrid::default(), &quad).unwrap();
    assert!(direct.value.abs() < 1e-6, "{}", direct.value);
}

#[test]
fn time_translation_delays_arrival() {
    let units = QuantumUnits::NATURAL;
    let quad = QuadratureSpec::default();
    let base = ClosedForm::lorentzian(4.0, 0.1).unwrap();
    let t_base = expected_time_closed(&MomentumSpectrum::incident(base, units), 7.0, &quad).unwrap();
    for t0 in [-3.0, 0.5, 12.0] {
        let shifted = MomentumSpectrum::incident(base.delayed_by(t0, &units), units);
        let t = expected_time_closed(&shifted, 7.0, &quad).unwrap();
        assert!((t.value - t_base.value - t0).abs() < 1e-8 * (1.0 + t0.abs()), "t0 = {t0}");
    }
}

#[test]
fn arrival_density_is_normalized() {
    let spec = gaussian(5.0, 0.2);
    let quad = QuadratureSpec {
        rel_tol: 1e-7,
        ..QuadratureSpec::default()
    };
    for x in [0.0, 4.0, 10.0] {
        let centre = x / 5.0;
        let (mass, _) =
            integrate_adaptive(|t: f64| rho_t_given_x(&spec, x, t, &quad).unwrap(), centre - 30.0, centre + 30.0, &quad)
                .unwrap();
        assert!((mass - 1.0).abs() < 1e-4, "x = {x}: {mass}");
    }
}

#[test]
fn density_is_non_negative() {
    let both = MomentumSpectrum::new(
        Some(ClosedForm::gaussian(2.0, 0.3).unwrap().into()),
        Some(ClosedForm::gaussian(1.5, 0.2).unwrap().into()),
        QuantumUnits::NATURAL,
    )
    .unwrap();
    let quad = QuadratureSpec::default();
    for i in 0..20 {
        let t = -5.0 + i as f64;
        assert!(rho_t_given_x(&both, 1.0, t, &quad).unwrap() >= 0.0);
    }
}

#[test]
fn after_barrier_equals_filtered_spectrum_at_exit() {
    let quad = QuadratureSpec::default();
    let barrier = BarrierSpec::natural(1.0, 3.0).unwrap();
    let incident = gaussian(1.2 * 2f64.sqrt(), 0.05);
    let direct = expected_time_after_barrier(&incident, &barrier, &quad).unwrap();
    let filtered = post_barrier_spectrum(&incident, &barrier).unwrap();
    let via = expected_time_closed(&filtered, 3.0, &quad).unwrap();
    assert!(rel(direct.value, via.value) < 1e-9, "{} vs {}", direct.value, via.value);
}

#[test]
fn tunnelling_packet_matches_direct_oracle() {
    let quad = QuadratureSpec::default();
    let barrier = BarrierSpec::natural(1.0, 3.0).unwrap();
    let incident = gaussian(1.05 * 2f64.sqrt(), 0.02);
    let after = expected_time_after_barrier(&incident, &barrier, &quad).unwrap();
    let filtered = post_barrier_spectrum(&incident, &barrier).unwrap();
    let direct = expected_time_direct(&filtered, 3.0, &TimeGrid::default(), &quad).unwrap();
    assert!(rel(after.value, direct.value) < 1e-3, "{} vs {}", after.value, direct.value);
}

#[test]
fn free_transit_delay() {
    let quad = QuadratureSpec::default();
    let barrier = BarrierSpec::natural(0.0, 4.0).unwrap();
    let incident = gaussian(2.0, 0.01);
    let delay = delay_time(&incident, &barrier, &quad).unwrap();
    assert!(rel(delay.value, 2.0) < 0.01, "{}", delay.value);
}

#[test]
fn vanishing_barrier_length_gives_vanishing_delay() {
    let quad = QuadratureSpec::default();
    let incident = gaussian(1.0, 0.05);
    let mut last = f64::INFINITY;
    for length in [1e-1, 1e-2, 1e-3] {
        let barrier = BarrierSpec::natural(1.0, length).unwrap();
        let d = delay_time(&incident, &barrier, &quad).unwrap().value.abs();
        assert!(d < last);
        last = d;
    }
    assert!(last < 1e-2);
}

#[test]
fn delay_saturates_with_barrier_length() {
    let quad = QuadratureSpec::default();
    let incident = gaussian(0.7, 0.02);
    let delays: Vec<f64> = [2.0, 3.0, 4.0, 6.0]
        .iter()
        .map(|&l| delay_time(&incident, &BarrierSpec::natural(1.0, l).unwrap(), &quad).unwrap().value)
        .collect();
    assert!(delays.iter().all(|d| d.is_finite()));
    let steps: Vec<f64> = delays.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(steps[2] / 2.0 < steps[0], "{delays:?}");
}

#[test]
fn filtering_without_barrier_is_identity() {
    let incident = gaussian(1.0, 0.1);
    let barrier = BarrierSpec::natural(0.0, 2.0).unwrap();
    let filtered = post_barrier_spectrum(&incident, &barrier).unwrap();
    let (a, b) = (incident.plus.unwrap(), filtered.plus.unwrap());
    for k in [0.7, 1.0, 1.3] {
        assert!((a.value(k) - b.value(k)).norm() < 1e-14);
    }
}

#[test]
fn filtered_norm_matches_pointwise_weighting() {
    let quad = QuadratureSpec::default();
    let barrier = BarrierSpec::natural(1.0, 3.0).unwrap();
    let k0 = 1.2 * 2f64.sqrt();
    let incident = gaussian(k0, 0.03);
    let filtered = post_barrier_spectrum(&incident, &barrier).unwrap();
    let norm = expected_time_closed(&filtered, 3.0, &quad).unwrap().norm;
    let a = incident.plus.as_ref().unwrap();
    let (lo, hi) = a.support(1e-9);
    let (weighted, _) = integrate_adaptive(
        |k: f64| {
            let e = k * k / 2.0;
            let t = stsdelay_core::quantum::transfer_matrix_transmission(e, &barrier).unwrap();
            a.value(k).norm_sqr() * t.norm_sqr()
        },
        lo,
        hi,
        &quad,
    )
    .unwrap();
    assert!(rel(norm, weighted) < 1e-8);
    let below = gaussian(0.8, 0.02);
    let below_f = post_barrier_spectrum(&below, &barrier).unwrap();
    let incident_norm = expected_time_closed(&below, 0.0, &quad).unwrap().norm;
    assert!(expected_time_closed(&below_f, 3.0, &quad).unwrap().norm < incident_norm);
}

#[test]
fn left_moving_incident_is_rejected() {
    let spec = MomentumSpectrum::new(
        Some(ClosedForm::gaussian(1.0, 0.1).unwrap().into()),
        Some(ClosedForm::gaussian(1.0, 0.1).unwrap().into()),
        QuantumUnits::NATURAL,
    )
    .unwrap();
    assert!(post_barrier_spectrum(&spec, &BarrierSpec::natural(1.0, 1.0).unwrap()).is_err());
}

#[test]
fn opaque_barrier_is_degenerate() {
    let quad = QuadratureSpec::default();
    let barrier = BarrierSpec::natural(1e6, 1e3).unwrap();
    let err = expected_time_after_barrier(&gaussian(1.0, 0.05), &barrier, &quad).unwrap_err();
    assert!(matches!(err, stsdelay_core::Error::Degenerate(_)), "{err}");
}

#[test]
fn phased_lorentzian_with_both_branches_matches_oracle() {
    let quad = QuadratureSpec::default();
    let plus = ClosedForm::lorentzian(3.0, 0.15).unwrap().with_phase(PhasePolynomial {
        constant: 0.2,
        linear: 1.5,
        quadratic: 0.3,
    });
    let minus = ClosedForm::gaussian(2.0, 0.2).unwrap().with_scale(Complex64::new(0.3, 0.4));
    let spec =
        MomentumSpectrum::new(Some(Amplitude::from(plus)), Some(minus.into()), QuantumUnits::NATURAL).unwrap();
    for x in [-2.0, 1.0, 6.0] {
        let closed = expected_time_closed(&spec, x, &quad).unwrap();
        let direct = expected_time_direct(&spec, x, &TimeGrid::default(), &quad).unwrap();
        assert!(rel(closed.value, direct.value) < 1e-4, "x = {x}: {} vs {}", closed.value, direct.value);
    }
}
