use stsdelay::dataset::{DataFile, DataSet};
use stsdelay::output::{RESIDUES_FILE, CURVES_FILE, FIGURE_FILE};
use stsdelay::{emit_outputs, run_scenario, ExperimentConfig, Scenario};
use stsdelay_core::curve::{ModelTag, PointValue, SweepSpec};
use stsdelay_core::waveguide::velocities;

fn small(models: &[ModelTag]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::preset(Scenario::Fig1a);
    cfg.sweep = SweepSpec::new(8.0e9, 10.0e9, 0.25e9).unwrap();
    cfg.set_models(models).unwrap();
    cfg
}

fn data(run: &str, points: Vec<(f64, f64)>) -> DataFile {
    DataFile {
        sets: vec![DataSet::new(run, points).unwrap()],
    }
}

#[test]
fn sole_model_normalizes_itself() {
    let cfg = small(&[ModelTag::ButtikerLandauer]);
    let d = data("r", vec![(8.2e9, 1e-9), (9.1e9, 2e-9), (10.3e9, 1.5e-9)]);
    let result = run_scenario(&cfg, Some(&d)).unwrap();
    assert_eq!(result.residues.len(), 1);
    assert_eq!(result.residues[0].entries[0].delta_normalized, Some(1.0));
}

#[test]
fn synthetic_sts_data_scores_zero() {
    let cfg = small(&ModelTag::ALL);
    let result = run_scenario(&cfg, None).unwrap();
    let sts = result.curve(ModelTag::Sts).unwrap();
    let points: Vec<(f64, f64)> = sts.points.iter().map(|p| (p.nu, p.value.finite().unwrap())).collect();
    let d = data("synthetic", points);
    let result = run_scenario(&cfg, Some(&d)).unwrap();
    let report = &result.residues[0];
    assert_eq!(report.get(ModelTag::Sts).unwrap().delta_normalized, Some(0.0));
    let worst = report.entries.iter().filter_map(|e| e.delta_normalized).fold(0.0, f64::max);
    assert_eq!(worst, 1.0);
    assert_ne!(report.ranking()[2], ModelTag::Sts);
}

#[test]
fn bl_diverges_exactly_at_the_inner_cutoff() {
    let mut cfg = small(&ModelTag::ALL);
    let nu_in = cfg.cutoffs().nu_in;
    cfg.sweep = SweepSpec::single(nu_in).unwrap();
    let result = run_scenario(&cfg, None).unwrap();
    assert_eq!(result.curve(ModelTag::ButtikerLandauer).unwrap().points[0].value, PointValue::Divergent);
    assert!(result.curve(ModelTag::Sts).unwrap().points[0].value.finite().is_some());
    assert!(result.curve(ModelTag::PhaseTime).unwrap().points[0].value.finite().is_some());
}

#[test]
fn divergent_data_points_are_skipped_for_all_models() {
    let cfg = small(&ModelTag::ALL);
    let nu_in = cfg.cutoffs().nu_in;
    let d = data("r", vec![(9.0e9, 2e-9), (nu_in, 5e-9), (10.0e9, 1.5e-9)]);
    let result = run_scenario(&cfg, Some(&d)).unwrap();
    assert_eq!(result.residues[0].points_used, 2);
    assert_eq!(result.residues[0].points_skipped, 1);
}

#[test]
fn runs_get_separate_reports() {
    let cfg = small(&[ModelTag::Sts, ModelTag::PhaseTime]);
    let d = DataFile {
        sets: vec![
            DataSet::new("bullets", vec![(9.0e9, 2e-9)]).unwrap(),
            DataSet::new("squares", vec![(9.2e9, 3e-9), (9.8e9, 2e-9)]).unwrap(),
        ],
    };
    let result = run_scenario(&cfg, Some(&d)).unwrap();
    let runs: Vec<_> = result.residues.iter().map(|r| (r.run.as_str(), r.points_used)).collect();
    assert_eq!(runs, vec![("bullets", 1), ("squares", 2)]);
}

#[test]
fn subtraction_removes_empty_guide_transit() {
    let plain = small(&ModelTag::ALL);
    let mut sub = plain.clone();
    sub.baseline_subtraction = true;
    let a = run_scenario(&plain, None).unwrap();
    let b = run_scenario(&sub, None).unwrap();
    let cut = plain.cutoffs();
    for (ca, cb) in a.curves.iter().zip(&b.curves) {
        for (pa, pb) in ca.points.iter().zip(&cb.points) {
            let transit = plain.geometry.length / velocities(pa.nu, &cut).unwrap().group;
            let (va, vb) = (pa.value.finite().unwrap(), pb.value.finite().unwrap());
            assert!((va - transit - vb).abs() <= 1e-15, "{} at {}", ca.model, pa.nu);
        }
    }
}

#[test]
fn averaged_baselines_stay_finite_through_the_cutoff() {
    let mut cfg = small(&[ModelTag::PhaseTime, ModelTag::ButtikerLandauer]);
    cfg.baseline_averaging = true;
    let nu_in = cfg.cutoffs().nu_in;
    cfg.sweep = SweepSpec::new(nu_in - 40e6, nu_in + 40e6, 20e6).unwrap();
    let result = run_scenario(&cfg, None).unwrap();
    assert!(result.failures().is_empty());
    for c in &result.curves {
        for p in &c.points {
            assert!(p.value.finite().is_some_and(|v| v > 0.0), "{} at {}", c.model, p.nu);
        }
    }
}

#[test]
fn outputs_are_deterministic_and_residues_optional() {
    let cfg = small(&ModelTag::ALL);
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let d = data("r", vec![(9.0e9, 2e-9), (10.0e9, 1.5e-9)]);

    let with_data = run_scenario(&cfg, Some(&d)).unwrap();
    let paths = emit_outputs(&with_data, Some(&d), &a).unwrap();
    assert!(paths.residues.is_some() && a.join(RESIDUES_FILE).exists());
    let svg = std::fs::read_to_string(a.join(FIGURE_FILE)).unwrap();
    assert!(svg.contains("<circle"));

    let without = run_scenario(&cfg, None).unwrap();
    emit_outputs(&without, None, &a).unwrap();
    assert!(!a.join(RESIDUES_FILE).exists(), "stale residues.csv left behind");
    let svg = std::fs::read_to_string(a.join(FIGURE_FILE)).unwrap();
    assert!(!svg.contains("<circle") && !svg.contains("width=\"7\""));

    emit_outputs(&run_scenario(&cfg, None).unwrap(), None, &b).unwrap();
    for f in [CURVES_FILE, FIGURE_FILE] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let csv = std::fs::read_to_string(a.join(CURVES_FILE)).unwrap();
    assert!(csv.starts_with("nu_ghz,sts_ns,pt_ns,bl_ns\n8.000000,"));
    assert_eq!(csv.lines().count(), 1 + cfg.sweep.len());
}

#[test]
fn ell_shifts_sts_only() {
    let base = small(&ModelTag::ALL);
    let mut shifted = base.clone();
    shifted.ell = 0.5;
    let a = run_scenario(&base, None).unwrap();
    let b = run_scenario(&shifted, None).unwrap();
    let cut = base.cutoffs();
    for (pa, pb) in a.curves[0].points.iter().zip(&b.curves[0].points) {
        let expected = -0.5 / velocities(pa.nu, &cut).unwrap().phase;
        let diff = pb.value.finite().unwrap() - pa.value.finite().unwrap();
        assert!((diff - expected).abs() < 1e-6 * expected.abs(), "{diff} vs {expected}");
    }
    assert_eq!(a.curves[1], b.curves[1]);
    assert_eq!(a.curves[2], b.curves[2]);
}
