//! Sweeps every requested model and scores it against measured runs.

use rayon::prelude::*;
use stsdelay_core::baselines::{averaged_baseline, BaselineModel};
use stsdelay_core::curve::{CurvePoint, DelayCurve, ModelTag, PointValue};
use stsdelay_core::waveguide::{optical_expected_time, velocities, Cutoffs, SourceSpec};

use crate::config::ExperimentConfig;
use crate::dataset::DataFile;
use crate::residues::{residues, ResidueReport};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub cutoffs: Cutoffs,
    /// One curve per requested model, in the configuration's order.
    pub curves: Vec<DelayCurve>,
    /// One report per run with data; empty without data.
    pub residues: Vec<ResidueReport>,
}

impl ScenarioResult {
    pub fn curve(&self, model: ModelTag) -> Option<&DelayCurve> {
        self.curves.iter().find(|c| c.model == model)
    }

    /// Sweep points whose evaluation failed, as `(model, ν, error)`.
    pub fn failures(&self) -> Vec<(ModelTag, f64, &stsdelay_core::Error)> {
        self.curves
            .iter()
            .flat_map(|c| {
                c.points.iter().filter_map(move |p| match &p.value {
                    PointValue::Failed(e) => Some((c.model, p.nu, e)),
                    _ => None,
                })
            })
            .collect()
    }

    pub fn evaluations(&self) -> usize {
        self.curves.iter().map(|c| c.points.len()).sum()
    }
}

/// Delay of `model` for a source centred on `nu` (Hz), in s.
pub fn model_delay(cfg: &ExperimentConfig, model: ModelTag, nu: f64) -> stsdelay_core::Result<f64> {
    let g = &cfg.geometry;
    let value = match model {
        ModelTag::Sts => {
            let src = SourceSpec::new(nu, cfg.lambda, cfg.ell)?;
            optical_expected_time(&src, g, &cfg.quad)?.value
        }
        ModelTag::PhaseTime | ModelTag::ButtikerLandauer => {
            let baseline = BaselineModel::try_from(model)?;
            if cfg.baseline_averaging {
                let src = SourceSpec::new(nu, cfg.lambda, cfg.ell)?;
                averaged_baseline(baseline, &src, g, &cfg.quad)?
            } else {
                baseline.evaluate(nu, g)?
            }
        }
    };
    if cfg.baseline_subtraction && value.is_finite() {
        let transit = g.length / velocities(nu, &cfg.cutoffs())?.group;
        return Ok(value - transit);
    }
    Ok(value)
}

/// Evaluates every `(model, ν)` pair in parallel; results come back in input
/// order, so the output does not depend on scheduling.
fn evaluate_grid(cfg: &ExperimentConfig, nus: &[f64]) -> Vec<Vec<PointValue>> {
    let tasks: Vec<(usize, f64)> = (0..cfg.models.len())
        .flat_map(|m| nus.iter().map(move |&nu| (m, nu)))
        .collect();
    let values: Vec<PointValue> = tasks
        .par_iter()
        .map(|&(m, nu)| PointValue::from_result(model_delay(cfg, cfg.models[m], nu)))
        .collect();
    let mut rows = Vec::with_capacity(cfg.models.len());
    let mut it = values.into_iter();
    for _ in 0..cfg.models.len() {
        rows.push(it.by_ref().take(nus.len()).collect());
    }
    rows
}

/// Runs the sweep and, when `data` has points, the per-run residues at the
/// exact data frequencies. Data points where any model fails or diverges are
/// left out of every model's residue.
pub fn run_scenario(cfg: &ExperimentConfig, data: Option<&DataFile>) -> Result<ScenarioResult> {
    cfg.validate()?;
    let nus = cfg.sweep.frequencies();
    let curves = evaluate_grid(cfg, &nus)
        .into_iter()
        .zip(&cfg.models)
        .map(|(values, &model)| DelayCurve {
            model,
            points: nus
                .iter()
                .zip(values)
                .map(|(&nu, value)| CurvePoint { nu, value })
                .collect(),
        })
        .collect();

    let mut reports = Vec::new();
    for set in data.map_or(&[][..], |d| &d.sets[..]) {
        if set.points.is_empty() {
            continue;
        }
        let xs = set.frequencies();
        let grid = evaluate_grid(cfg, &xs);
        let usable: Vec<usize> = (0..xs.len())
            .filter(|&i| grid.iter().all(|row| row[i].finite().is_some()))
            .collect();
        if usable.is_empty() {
            return Err(crate::HarnessError::Validation(format!(
                "run '{}': no data point where every model has a finite delay",
                set.run
            )));
        }
        let y: Vec<f64> = usable.iter().map(|&i| set.points[i].1).collect();
        let predictions: Vec<(ModelTag, Vec<f64>)> = cfg
            .models
            .iter()
            .zip(&grid)
            .map(|(&m, row)| (m, usable.iter().map(|&i| row[i].finite().expect("filtered")).collect()))
            .collect();
        let mut report = residues(&set.run, &y, &predictions)?;
        report.points_skipped = xs.len() - usable.len();
        reports.push(report);
    }

    Ok(ScenarioResult {
        cutoffs: cfg.cutoffs(),
        curves,
        residues: reports,
    })
}
