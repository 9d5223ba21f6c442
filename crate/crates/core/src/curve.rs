//! Frequency sweeps and the delay curves evaluated over them.

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Delay model plotted against the source frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelTag {
    /// Time-operator expectation value.
    Sts,
    /// Stationary-phase (Wigner) delay.
    PhaseTime,
    /// Semiclassical Büttiker-Landauer time.
    ButtikerLandauer,
}

impl ModelTag {
    pub const ALL: [ModelTag; 3] = [ModelTag::Sts, ModelTag::PhaseTime, ModelTag::ButtikerLandauer];

    pub fn label(self) -> &'static str {
        match self {
            ModelTag::Sts => "STS",
            ModelTag::PhaseTime => "PT",
            ModelTag::ButtikerLandauer => "BL",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "STS" => Some(ModelTag::Sts),
            "PT" => Some(ModelTag::PhaseTime),
            "BL" => Some(ModelTag::ButtikerLandauer),
            _ => None,
        }
    }
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Inclusive frequency sweep `start, start + step, …, ≤ stop`, in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepSpec {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && start > 0.0 && stop >= start) {
            return Err(Error::Invalid {
                what: "sweep",
                reason: "need 0 < start <= stop",
            });
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Invalid {
                what: "sweep step",
                reason: "must be positive",
            });
        }
        if (stop - start) / step > 1e6 {
            return Err(Error::Invalid {
                what: "sweep",
                reason: "more than a million points",
            });
        }
        Ok(Self { start, stop, step })
    }

    pub fn single(nu: f64) -> Result<Self> {
        Self::new(nu, nu, 1.0)
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step * (1.0 + 1e-12)).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sweep frequencies, each computed as `start + i·step`.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// Outcome at one sweep frequency.
#[derive(Debug, Clone, PartialEq)]
pub enum PointValue {
    /// Delay in seconds.
    Finite(f64),
    /// The model diverges here (e.g. the Büttiker-Landauer time at the cutoff).
    Divergent,
    Failed(Error),
}

impl PointValue {
    pub fn from_result(r: Result<f64>) -> Self {
        match r {
            Ok(v) if v.is_finite() => PointValue::Finite(v),
            Ok(_) => PointValue::Divergent,
            Err(e) => PointValue::Failed(e),
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            PointValue::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    /// Source centre frequency in Hz.
    pub nu: f64,
    pub value: PointValue,
}

/// One model evaluated over a sweep, in ascending frequency order.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayCurve {
    pub model: ModelTag,
    pub points: Vec<CurvePoint>,
}

impl DelayCurve {
    /// Evaluates `f` at every sweep frequency, in order.
    pub fn evaluate<F>(model: ModelTag, sweep: &SweepSpec, mut f: F) -> Self
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let points = sweep
            .frequencies()
            .into_iter()
            .map(|nu| CurvePoint {
                nu,
                value: PointValue::from_result(f(nu)),
            })
            .collect();
        Self { model, points }
    }

    pub fn failures(&self) -> impl Iterator<Item = (f64, &Error)> {
        self.points.iter().filter_map(|p| match &p.value {
            PointValue::Failed(e) => Some((p.nu, e)),
            _ => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_includes_both_ends() {
        let s = SweepSpec::new(8.6e9, 10.4e9, 20e6).unwrap();
        let f = s.frequencies();
        assert_eq!(f.len(), 91);
        assert_eq!(f[0], 8.6e9);
        assert!((f[90] - 10.4e9).abs() < 1.0);
    }

    #[test]
    fn single_point_sweep() {
        assert_eq!(SweepSpec::single(9e9).unwrap().frequencies(), alloc::vec![9e9]);
    }

    #[test]
    fn invalid_sweeps() {
        assert!(SweepSpec::new(2.0, 1.0, 0.1).is_err());
        assert!(SweepSpec::new(1.0, 2.0, 0.0).is_err());
        assert!(SweepSpec::new(0.0, 2.0, 0.5).is_err());
    }

    #[test]
    fn infinite_results_are_divergent() {
        assert_eq!(PointValue::from_result(Ok(f64::INFINITY)), PointValue::Divergent);
        assert_eq!(PointValue::from_result(Ok(1.0)).finite(), Some(1.0));
    }

    #[test]
    fn model_tags_round_trip() {
        for m in ModelTag::ALL {
            assert_eq!(ModelTag::parse(m.label()), Some(m));
        }
        assert_eq!(ModelTag::parse("sts"), Some(ModelTag::Sts));
        assert_eq!(ModelTag::parse("xx"), None);
    }
}
