//! Experiment configuration: built-in presets and the flat `key = value`
//! file format.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use stsdelay_core::curve::{ModelTag, SweepSpec};
use stsdelay_core::numerics::QuadratureSpec;
use stsdelay_core::waveguide::{cutoff_frequencies, Cutoffs, GuideGeometry, FIG1_A, FIG1_A_PRIME, FIG1_B, FIG1_B_PRIME};

use crate::{HarnessError, Result};

/// Keys accepted in a configuration file.
pub const CONFIG_KEYS: [&str; 14] = [
    "b_mm",
    "b_prime_mm",
    "a_mm",
    "a_prime_mm",
    "length_cm",
    "lambda_mhz",
    "ell_m",
    "sweep_start_ghz",
    "sweep_stop_ghz",
    "sweep_step_mhz",
    "models",
    "baseline_averaging",
    "baseline_subtraction",
    "out_dir",
];

/// Default sweep step, in Hz.
pub const DEFAULT_STEP: f64 = 20e6;
/// Default extent of the sweep above the inner cutoff, in Hz.
pub const DEFAULT_ABOVE_INNER: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// `L = 15 cm`, `Λ = 30 MHz`.
    Fig1a,
    /// `L = 20 cm`, `Λ = 50 MHz`.
    Fig1b,
}

impl Scenario {
    pub const ALL: [Scenario; 2] = [Scenario::Fig1a, Scenario::Fig1b];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fig1a => "fig1a",
            Scenario::Fig1b => "fig1b",
        }
    }

    /// Narrowing length in m.
    pub fn length(self) -> f64 {
        match self {
            Scenario::Fig1a => 0.15,
            Scenario::Fig1b => 0.20,
        }
    }

    /// Source linewidth in Hz.
    pub fn lambda(self) -> f64 {
        match self {
            Scenario::Fig1a => 30e6,
            Scenario::Fig1b => 50e6,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fig1a" => Ok(Scenario::Fig1a),
            "fig1b" => Ok(Scenario::Fig1b),
            other => Err(format!("unknown scenario '{other}' (expected fig1a or fig1b)")),
        }
    }
}

/// Everything needed for one sweep. Frequencies in Hz, lengths in m.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub geometry: GuideGeometry,
    /// Source linewidth `Λ`.
    pub lambda: f64,
    /// Launch distance before the narrowing.
    pub ell: f64,
    pub sweep: SweepSpec,
    /// Requested models in output order (STS, PT, BL).
    pub models: Vec<ModelTag>,
    pub quad: QuadratureSpec,
    /// Average PT and BL over the source line instead of evaluating at `ν_μ`.
    pub baseline_averaging: bool,
    /// Subtract the empty-guide transit `L/v_group(ν_μ)` from every model.
    pub baseline_subtraction: bool,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn preset(scenario: Scenario) -> Self {
        let geometry = GuideGeometry::fig1(scenario.length()).expect("preset geometry is valid");
        let lambda = scenario.lambda();
        let sweep = default_sweep(&geometry, lambda, None, None, None).expect("preset sweep is valid");
        Self {
            geometry,
            lambda,
            ell: 0.0,
            sweep,
            models: ModelTag::ALL.to_vec(),
            quad: QuadratureSpec::default(),
            baseline_averaging: false,
            baseline_subtraction: false,
            out_dir: PathBuf::from("out"),
        }
    }

    pub fn cutoffs(&self) -> Cutoffs {
        cutoff_frequencies(&self.geometry)
    }

    pub fn has_model(&self, model: ModelTag) -> bool {
        self.models.contains(&model)
    }

    /// Replaces the model list, normalized to output order.
    pub fn set_models(&mut self, models: &[ModelTag]) -> Result<()> {
        self.models = normalize_models(models)?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let cut = self.cutoffs();
        if !(self.sweep.start > cut.nu_out) {
            return Err(HarnessError::Validation(format!(
                "sweep start {:.6} GHz must lie above the outer cutoff {:.6} GHz",
                self.sweep.start / 1e9,
                cut.nu_out / 1e9
            )));
        }
        if !(self.sweep.step > 0.0) {
            return Err(HarnessError::Validation("sweep step must be positive".into()));
        }
        if self.models.is_empty() {
            return Err(HarnessError::Validation("at least one model is required".into()));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(HarnessError::Validation("lambda must be positive".into()));
        }
        if !(self.ell.is_finite() && self.ell >= 0.0) {
            return Err(HarnessError::Validation("ell must be non-negative".into()));
        }
        self.quad.validate()?;
        Ok(())
    }
}

/// Sweep `[ν_out + 2Λ, ν_in + 1 GHz]` in 20 MHz steps, ends rounded inward
/// to whole MHz, with any of the three values overridden.
pub fn default_sweep(
    geometry: &GuideGeometry,
    lambda: f64,
    start: Option<f64>,
    stop: Option<f64>,
    step: Option<f64>,
) -> stsdelay_core::Result<SweepSpec> {
    let cut = cutoff_frequencies(geometry);
    SweepSpec::new(
        start.unwrap_or(((cut.nu_out + 2.0 * lambda) / 1e6).ceil() * 1e6),
        stop.unwrap_or(((cut.nu_in + DEFAULT_ABOVE_INNER) / 1e6).floor() * 1e6),
        step.unwrap_or(DEFAULT_STEP),
    )
}

/// Deduplicates and sorts into STS, PT, BL order.
pub fn normalize_models(models: &[ModelTag]) -> Result<Vec<ModelTag>> {
    let out: Vec<ModelTag> = ModelTag::ALL.into_iter().filter(|m| models.contains(m)).collect();
    if out.is_empty() {
        return Err(HarnessError::Validation("at least one model is required".into()));
    }
    Ok(out)
}

/// Parses a comma-separated model list such as `sts,pt,bl`.
pub fn parse_models(text: &str) -> std::result::Result<Vec<ModelTag>, String> {
    let mut models = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        models.push(ModelTag::parse(item).ok_or_else(|| format!("unknown model '{item}' (expected sts, pt or bl)"))?);
    }
    if models.is_empty() {
        return Err("model list is empty".into());
    }
    Ok(ModelTag::ALL.into_iter().filter(|m| models.contains(m)).collect())
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_config(&text, &path.display().to_string())
}

/// Parses the flat `key = value` format. `#` starts a comment; blank lines
/// are ignored. Unset keys take the `fig1a` preset values and the default
/// sweep for the resulting geometry.
pub fn parse_config(text: &str, source_name: &str) -> Result<ExperimentConfig> {
    let err = |line: usize, message: String| HarnessError::Config {
        source_name: source_name.to_string(),
        line,
        message,
    };

    let mut entries: HashMap<&'static str, (usize, &str)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected 'key = value', found '{content}'")))?;
        let key = key.trim();
        let value = value.trim();
        let known = CONFIG_KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| err(line, format!("unknown key '{key}'")))?;
        if value.is_empty() {
            return Err(err(line, format!("missing value for '{key}'")));
        }
        if let Some((first, _)) = entries.insert(known, (line, value)) {
            return Err(err(line, format!("duplicate key '{key}' (first set on line {first})")));
        }
    }

    let number = |key: &str, scale: f64| -> Result<Option<(usize, f64)>> {
        match entries.get(key) {
            None => Ok(None),
            Some(&(line, value)) => match value.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Some((line, v * scale))),
                _ => Err(err(line, format!("'{key}' expects a finite number, found '{value}'"))),
            },
        }
    };
    let flag = |key: &str| -> Result<Option<bool>> {
        match entries.get(key) {
            None => Ok(None),
            Some(&(line, value)) => match value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => Ok(Some(true)),
                "false" | "no" | "0" => Ok(Some(false)),
                _ => Err(err(line, format!("'{key}' expects true or false, found '{value}'"))),
            },
        }
    };
    let value_of = |opt: Option<(usize, f64)>| opt.map(|(_, v)| v);
    let line_of = |key: &str| entries.get(key).map(|&(line, _)| line);

    let mut cfg = ExperimentConfig::preset(Scenario::Fig1a);

    let b = value_of(number("b_mm", 1e-3)?).unwrap_or(FIG1_B);
    let b_prime = value_of(number("b_prime_mm", 1e-3)?).unwrap_or(FIG1_B_PRIME);
    let a = value_of(number("a_mm", 1e-3)?).unwrap_or(FIG1_A);
    let a_prime = value_of(number("a_prime_mm", 1e-3)?).unwrap_or(FIG1_A_PRIME);
    let length = value_of(number("length_cm", 1e-2)?).unwrap_or(cfg.geometry.length);
    cfg.geometry = GuideGeometry::new(b, b_prime, a, a_prime, length).map_err(|e| {
        let line = ["b_mm", "b_prime_mm", "a_mm", "a_prime_mm", "length_cm"]
            .iter()
            .filter_map(|k| line_of(k))
            .min()
            .unwrap_or(0);
        err(line, e.to_string())
    })?;

    if let Some((line, lambda)) = number("lambda_mhz", 1e6)? {
        if !(lambda > 0.0) {
            return Err(err(line, "'lambda_mhz' must be positive".into()));
        }
        cfg.lambda = lambda;
    }
    if let Some((line, ell)) = number("ell_m", 1.0)? {
        if !(ell >= 0.0) {
            return Err(err(line, "'ell_m' must be non-negative".into()));
        }
        cfg.ell = ell;
    }

    let start = number("sweep_start_ghz", 1e9)?;
    let stop = number("sweep_stop_ghz", 1e9)?;
    let step = number("sweep_step_mhz", 1e6)?;
    if let Some((line, s)) = step {
        if !(s > 0.0) {
            return Err(err(line, "'sweep_step_mhz' must be positive".into()));
        }
    }
    let cut = cutoff_frequencies(&cfg.geometry);
    if let Some((line, s)) = start {
        if !(s > cut.nu_out) {
            return Err(err(
                line,
                format!(
                    "sweep start {:.6} GHz must lie above the outer cutoff {:.6} GHz",
                    s / 1e9,
                    cut.nu_out / 1e9
                ),
            ));
        }
    }
    cfg.sweep = default_sweep(&cfg.geometry, cfg.lambda, value_of(start), value_of(stop), value_of(step)).map_err(|e| {
        let line = ["sweep_start_ghz", "sweep_stop_ghz", "sweep_step_mhz"]
            .iter()
            .filter_map(|k| line_of(k))
            .min()
            .unwrap_or(0);
        err(line, e.to_string())
    })?;

    if let Some(&(line, value)) = entries.get("models") {
        cfg.models = parse_models(value).map_err(|m| err(line, m))?;
    }
    if let Some(v) = flag("baseline_averaging")? {
        cfg.baseline_averaging = v;
    }
    if let Some(v) = flag("baseline_subtraction")? {
        cfg.baseline_subtraction = v;
    }
    if let Some(&(_, value)) = entries.get("out_dir") {
        cfg.out_dir = PathBuf::from(value);
    }

    cfg.validate()?;
    Ok(cfg)
}
