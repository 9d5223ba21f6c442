//! Root-sum-square misfit of each model against measured delays, normalized
//! so the worst model scores one.

use stsdelay_core::curve::ModelTag;

use crate::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ModelResidue {
    pub model: ModelTag,
    /// `Δ = √Σᵢ(yᵢ − f(xᵢ))²`, in the units of the inputs.
    pub delta_raw: f64,
    /// `Δ / max Δ`; `None` when every `Δ` vanishes.
    pub delta_normalized: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueReport {
    pub run: String,
    pub entries: Vec<ModelResidue>,
    /// Data points where every model produced a finite delay.
    pub points_used: usize,
    /// Data points dropped because some model failed or diverged there.
    pub points_skipped: usize,
}

impl ResidueReport {
    /// True when all `Δ` are zero and `δ` is undefined.
    pub fn is_degenerate(&self) -> bool {
        self.entries.iter().all(|e| e.delta_normalized.is_none())
    }

    pub fn get(&self, model: ModelTag) -> Option<&ModelResidue> {
        self.entries.iter().find(|e| e.model == model)
    }

    /// Models from best (smallest `Δ`) to worst; ties keep input order.
    pub fn ranking(&self) -> Vec<ModelTag> {
        let mut order: Vec<&ModelResidue> = self.entries.iter().collect();
        order.sort_by(|a, b| a.delta_raw.total_cmp(&b.delta_raw));
        order.into_iter().map(|e| e.model).collect()
    }
}

/// Builds the report from measured `data` and each model's predictions at
/// the same abscissae.
pub fn residues(run: &str, data: &[f64], predictions: &[(ModelTag, Vec<f64>)]) -> Result<ResidueReport> {
    if data.is_empty() {
        return Err(HarnessError::Validation(format!("run '{run}': no data points for residues")));
    }
    if predictions.is_empty() {
        return Err(HarnessError::Validation("residues need at least one model".into()));
    }
    let mut raw = Vec::with_capacity(predictions.len());
    for (model, values) in predictions {
        if values.len() != data.len() {
            return Err(HarnessError::Validation(format!(
                "{model}: {} predictions for {} data points",
                values.len(),
                data.len()
            )));
        }
        let sum: f64 = data.iter().zip(values).map(|(y, f)| (y - f) * (y - f)).sum();
        if !sum.is_finite() {
            return Err(HarnessError::Validation(format!("{model}: non-finite residue")));
        }
        raw.push(sum.sqrt());
    }
    let norm = raw.iter().copied().fold(0.0, f64::max);
    let entries = predictions
        .iter()
        .zip(raw)
        .map(|((model, _), delta_raw)| ModelResidue {
            model: *model,
            delta_raw,
            delta_normalized: (norm > 0.0).then(|| delta_raw / norm),
        })
        .collect();
    Ok(ResidueReport {
        run: run.to_string(),
        entries,
        points_used: data.len(),
        points_skipped: 0,
    })
}
