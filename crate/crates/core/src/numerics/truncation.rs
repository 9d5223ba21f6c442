
#[allow(unused_imports)]
use num_traits::Float;
use super::QuadratureSpec;
use crate::{Error, Result};

/// Analytic upper bound on how much weight lies beyond a distance `d` from
/// the envelope centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailEnvelope {
    /// Density bounded by `weight * (hwhm/π) / d²`.
    Lorentzian { center: f64, hwhm: f64, weight: f64 },
    /// Squared modulus of the two-pole line
    /// `√(Λ/2π)·{1/[i(ν+ν₀)+Λ/2] − 1/[i(ν−ν₀)−Λ/2]}` with `Λ = 2·hwhm`, which
    /// equals `(Λ/2π)(Λ² + 4ν₀²) / ([(ν+ν₀)² + Λ²/4][(ν−ν₀)² + Λ²/4])`.
    LorentzianPair { center: f64, hwhm: f64 },
    /// Density bounded by `coefficient * d^(-exponent)`, exponent > 1.
    PowerLaw {
        center: f64,
        scale: f64,
        coefficient: f64,
        exponent: f64,
    },
}

impl TailEnvelope {
    pub fn center(&self) -> f64 {
        match *self {
            TailEnvelope::Lorentzian { center, .. }
            | TailEnvelope::LorentzianPair { center, .. }
            | TailEnvelope::PowerLaw { center, .. } => center,
        }
    }

    /// Unit in which the truncation multiplier is counted.
    pub fn scale(&self) -> f64 {
        match *self {
            TailEnvelope::Lorentzian { hwhm, .. } | TailEnvelope::LorentzianPair { hwhm, .. } => 2.0 * hwhm,
            TailEnvelope::PowerLaw { scale, .. } => scale,
        }
    }

    /// Bound on the integral of the envelope over `[center + d, ∞)`.
    pub fn tail_mass(&self, d: f64) -> f64 {
        match *self {
            TailEnvelope::Lorentzian { hwhm, weight, .. } => weight * hwhm / (core::f64::consts::PI * d),
            TailEnvelope::LorentzianPair { center, hwhm } => {
                // Drop the Λ²/4 terms and bound 1/(x + 2ν₀)² by its value at d.
                let lambda = 2.0 * hwhm;
                let far = d + 2.0 * center;
                lambda / (2.0 * core::f64::consts::PI) * (lambda * lambda + 4.0 * center * center) / (d * far * far)
            }
            TailEnvelope::PowerLaw {
                coefficient,
                exponent,
                ..
            } => coefficient * d.powf(1.0 - exponent) / (exponent - 1.0),
        }
    }
}

/// Picks the upper limit `center + M·scale`, doubling `M` from `spec`'s
/// truncation multiplier until the tail bound drops below
/// `tail_fraction × mass(limit)`. `mass` returns the integral accumulated up
/// to the proposed limit, so callers can integrate incrementally.
pub fn truncate_semi_infinite<F>(envelope: &TailEnvelope, spec: &QuadratureSpec, mut mass: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let scale = envelope.scale();
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Invalid {
            what: "tail envelope",
            reason: "scale must be positive",
        });
    }
    if let TailEnvelope::PowerLaw { exponent, .. } = envelope {
        if !(*exponent > 1.0) {
            return Err(Error::Invalid {
                what: "tail envelope",
                reason: "power-law exponent must exceed one",
            });
        }
    }
    let ceiling = (1u64 << 20) as f64;
    let mut multiplier = spec.truncation_multiplier;
    loop {
        let distance = multiplier * scale;
        let limit = envelope.center() + distance;
        let accumulated = mass(limit)?;
        if envelope.tail_mass(distance) < spec.tail_fraction * accumulated.abs() {
            return Ok(limit);
        }
        if multiplier >= ceiling {
            return Err(Error::Truncation { limit });
        }
        multiplier = (multiplier * 2.0).min(ceiling);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_bound_dominates_numerical_tail() {
        let env = TailEnvelope::LorentzianPair { center: 10.0, hwhm: 0.015 };
        let density = |x: f64| {
            let l = 0.03;
            l / (2.0 * core::f64::consts::PI) * (l * l + 400.0)
                / (((x + 10.0).powi(2) + l * l / 4.0) * ((x - 10.0).powi(2) + l * l / 4.0))
        };
        for d in [0.1, 1.0, 10.0, 100.0] {
            // ∫ over [10 + d, ∞) by substitution x = 10 + d/u, u ∈ (0, 1].
            let n = 20_000;
            let mass: f64 = (0..n)
                .map(|i| {
                    let u = (i as f64 + 0.5) / n as f64;
                    density(10.0 + d / u) * d / (u * u) / n as f64
                })
                .sum();
            let bound = env.tail_mass(d);
            assert!(bound >= mass && bound < 3.0 * mass, "d = {d}: {bound} vs {mass}");
        }
    }

    fn lorentz(lambda: f64) -> TailEnvelope {
        TailEnvelope::Lorentzian {
            center: 10e9,
            hwhm: 0.5 * lambda,
            weight: 1.0,
        }
    }

    #[test]
    fn lorentzian_limit_grows_until_bound_met() {
        let spec = QuadratureSpec::default();
        let mut calls = 0;
        let limit = truncate_semi_infinite(&lorentz(30e6), &spec, |_| {
            calls += 1;
            Ok(0.05)
        })
        .unwrap();
        let d = limit - 10e9;
        assert!(calls > 1);
        assert!(30e6 / (2.0 * core::f64::consts::PI * d) < 1e-3 * 0.05);
        assert!(30e6 / (2.0 * core::f64::consts::PI * 0.5 * d) >= 1e-3 * 0.05);
    }

    #[test]
    fn thirty_megahertz_line_needs_gigahertz_scale_limit() {
        let spec = QuadratureSpec::default();
        let env = TailEnvelope::Lorentzian {
            center: 10e9,
            hwhm: 15e6,
            weight: 4.0,
        };
        let limit = truncate_semi_infinite(&env, &spec, |_| Ok(1.0)).unwrap();
        let d = limit - 10e9;
        assert!(d > 1e10 && d < 1e11, "d = {d:e}");
    }

    #[test]
    fn never_satisfied_bound_is_an_error() {
        let spec = QuadratureSpec::default();
        let r = truncate_semi_infinite(&lorentz(30e6), &spec, |_| Ok(0.0));
        assert!(matches!(r, Err(Error::Truncation { .. })));
    }

    #[test]
    fn power_law_tail() {
        let spec = QuadratureSpec::default();
        let env = TailEnvelope::PowerLaw {
            center: 0.0,
            scale: 1.0,
            coefficient: 1.0,
            exponent: 3.0,
        };
        let limit = truncate_semi_infinite(&env, &spec, |_| Ok(1.0)).unwrap();
        assert_eq!(limit, 200.0);
    }
}
