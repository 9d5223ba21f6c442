use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use stsdelay_core::numerics::{differentiate_central, QuadratureSpec, StencilOrder};
use stsdelay_core::quantum::{
    expected_time_closed, expected_time_direct, Amplitude, ClosedForm, MomentumSpectrum, PhasePolynomial,
    QuantumUnits, SampledAmplitude, TimeGrid,
};
use stsdelay_core::Complex64;

fn random_form(rng: &mut impl Rng) -> ClosedForm {
    let k0 = rng.gen_range(1.5..8.0);
    let form = if rng.gen_bool(0.5) {
        ClosedForm::gaussian(k0, rng.gen_range(0.03..0.1) * k0).unwrap()
    } else {
        ClosedForm::lorentzian(k0, rng.gen_range(0.02..0.06) * k0).unwrap()
    };
    form.with_phase(PhasePolynomial {
        constant: rng.gen_range(-3.0..3.0),
        linear: rng.gen_range(0.0..3.0),
        quadratic: rng.gen_range(0.0..0.5),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn gamma_derivative_matches_sixth_order_differences(
        seed in any::<u64>(),
        x in -10.0f64..10.0,
        t in 0.2f64..1.8,
    ) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let form = random_form(&mut rng);
        let k0 = match form.profile {
            stsdelay_core::quantum::Profile::Gaussian { center, .. }
            | stsdelay_core::quantum::Profile::Lorentzian { center, .. } => center,
        };
        let k = t * k0;
        let gamma = |q: f64| form.eval(q).0 * Complex64::from_polar(1.0, q * x) / q.sqrt();
        let (c, dc) = form.eval(k);
        let dgamma = (dc + Complex64::new(0.0, x) * c - c / (2.0 * k)) * Complex64::from_polar(1.0, k * x) / k.sqrt();
        let fd = differentiate_central(gamma, k, StencilOrder::Sixth, 1e-3).unwrap();
        prop_assert!((dgamma - fd).norm() <= 1e-6 * dgamma.norm().max(1e-30), "{} vs {}", dgamma, fd);
    }
}

#[test]
fn closed_form_matches_direct_on_random_spectra() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let quad = QuadratureSpec::default();
    for i in 0..20 {
        let spec = MomentumSpectrum::incident(random_form(&mut rng), QuantumUnits::NATURAL);
        for x in [2.0, 8.0, 20.0] {
            let closed = expected_time_closed(&spec, x, &quad).unwrap();
            let direct = expected_time_direct(&spec, x, &TimeGrid::default(), &quad).unwrap();
            let rel = (closed.value - direct.value).abs() / direct.value.abs();
            assert!(rel < 1e-4, "spectrum {i}, x = {x}: {} vs {}", closed.value, direct.value);
            assert!(closed.imag_residue <= 1e-8);
        }
    }
}

#[test]
fn sampled_spectrum_tracks_its_closed_form() {
    let quad = QuadratureSpec::default();
    let units = QuantumUnits::NATURAL;
    let form = ClosedForm::gaussian(5.0, 0.2).unwrap().with_phase(PhasePolynomial {
        constant: 0.0,
        linear: 1.0,
        quadratic: 0.1,
    });
    let k: Vec<f64> = (0..=2000).map(|i| 3.5 + 3e-3 * i as f64).collect();
    let values: Vec<Complex64> = k.iter().map(|&q| form.eval(q).0).collect();
    let sampled = MomentumSpectrum::incident(Amplitude::from(SampledAmplitude::new(k, &values).unwrap()), units);
    let reference = MomentumSpectrum::incident(form, units);
    let a = expected_time_closed(&sampled, 10.0, &quad).unwrap().value;
    let b = expected_time_closed(&reference, 10.0, &quad).unwrap().value;
    assert!((a - b).abs() < 1e-4 * b.abs(), "{a} vs {b}");
    let direct = expected_time_direct(&sampled, 10.0, &TimeGrid::default(), &quad).unwrap().value;
    assert!((a - direct).abs() < 1e-4 * a.abs(), "{a} vs {direct}");
}

#[test]
fn narrow_spectrum_gives_flat_density() {
    let quad = QuadratureSpec::default();
    let spec = MomentumSpectrum::incident(ClosedForm::gaussian(3.0, 1e-4).unwrap(), QuantumUnits::NATURAL);
    let rho: Vec<f64> = [-5.0, 0.0, 5.0]
        .iter()
        .map(|&t| stsdelay_core::quantum::rho_t_given_x(&spec, 0.0, t, &quad).unwrap())
        .collect();
    for r in &rho {
        assert!((r - rho[1]).abs() < 1e-3 * rho[1]);
    }
}

#[test]
fn undersized_window_reports_coverage() {
    let quad = QuadratureSpec::default();
    let spec = MomentumSpectrum::incident(ClosedForm::gaussian(5.0, 0.2).unwrap(), QuantumUnits::NATURAL);
    let grid = TimeGrid {
        half_width: Some(0.5),
        ..TimeGrid::default()
    };
    let err = expected_time_direct(&spec, 10.0, &grid, &quad).unwrap_err();
    assert!(matches!(err, stsdelay_core::Error::Coverage { captured } if captured < 1.0), "{err}");
}
