//! Comparison delays: the stationary-phase (Wigner) phase time and the
//! semiclassical Büttiker-Landauer time, both mapped onto the guide.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::curve::ModelTag;
use crate::numerics::{differentiate_central, integrate_adaptive, Pair, QuadratureSpec, StencilOrder};
use crate::waveguide::{cutoff_frequencies, GuideGeometry, GuideModel, OpticalModel, SourceSpec};
use crate::{Complex64, Error, Result};

const GHZ: f64 = 1e9;

/// Baseline delay model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineModel {
    PhaseTime,
    ButtikerLandauer,
}

impl From<BaselineModel> for ModelTag {
    fn from(m: BaselineModel) -> Self {
        match m {
            BaselineModel::PhaseTime => ModelTag::PhaseTime,
            BaselineModel::ButtikerLandauer => ModelTag::ButtikerLandauer,
        }
    }
}

impl TryFrom<ModelTag> for BaselineModel {
    type Error = Error;
    fn try_from(m: ModelTag) -> Result<Self> {
        match m {
            ModelTag::PhaseTime => Ok(BaselineModel::PhaseTime),
            ModelTag::ButtikerLandauer => Ok(BaselineModel::ButtikerLandauer),
            ModelTag::Sts => Err(Error::Invalid {
                what: "baseline model",
                reason: "STS is not a baseline",
            }),
        }
    }
}

impl BaselineModel {
    /// Delay in s at the single frequency `nu`.
    pub fn evaluate(self, nu: f64, g: &GuideGeometry) -> Result<f64> {
        match self {
            BaselineModel::PhaseTime => phase_time(nu, g),
            BaselineModel::ButtikerLandauer => buttiker_landauer_time(nu, g),
        }
    }
}

fn check_frequency(nu: f64, g: &GuideGeometry) -> Result<()> {
    let cut = cutoff_frequencies(g);
    if !(nu.is_finite() && nu > cut.nu_out) {
        return Err(Error::Domain {
            what: "frequency at or below the outer cutoff",
            value: nu,
        });
    }
    Ok(())
}

/// `arg[T(ν)e^{ik(ν)L}]` wrapped to `(−π, π]`.
pub fn transmitted_phase(nu: f64, g: &GuideGeometry) -> Result<f64> {
    check_frequency(nu, g)?;
    GuideModel::new(g).phase(nu / GHZ)
}

/// `τ_PT = (1/2π)·dΦ/dν` for the total transmitted phase `Φ`, in s. The
/// analytic derivative is cross-checked by a central difference of the
/// unwrapped phase; disagreement is reported as a phase-branch error.
pub fn phase_time(nu: f64, g: &GuideGeometry) -> Result<f64> {
    check_frequency(nu, g)?;
    let model = GuideModel::new(g);
    let x = nu / GHZ;
    let tau = model.phase_time(x)?;
    let h = (1e-4_f64).min((x - model.nu_out) / 16.0);
    let wrap = |d: f64| (d + PI).rem_euclid(2.0 * PI) - PI;
    let centre = model.phase(x)?;
    let unwrapped = |y: f64| {
        let p = model.phase(y).map_or(f64::NAN, |p| centre + wrap(p - centre));
        Complex64::new(p, 0.0)
    };
    let fd = differentiate_central(unwrapped, x, StencilOrder::Sixth, h / x)?.re / (2.0 * PI);
    if !((fd - tau).abs() <= 1e-5 * tau.abs() + 1e-9) {
        return Err(Error::PhaseBranch { nu });
    }
    Ok(tau / GHZ)
}

/// Continuously unwrapped transmitted phase at ascending frequencies `nus`.
/// Intervals over which the phase could advance by more than `π/2` are
/// subdivided before unwrapping.
pub fn transmitted_phase_curve(nus: &[f64], g: &GuideGeometry) -> Result<Vec<f64>> {
    if nus.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Invalid {
            what: "phase curve",
            reason: "frequencies must be strictly increasing",
        });
    }
    let Some(&first) = nus.first() else {
        return Ok(Vec::new());
    };
    check_frequency(first, g)?;
    let model = GuideModel::new(g);
    let wrap = |d: f64| (d + PI).rem_euclid(2.0 * PI) - PI;
    let mut out = Vec::with_capacity(nus.len());
    let mut phase = model.phase(first / GHZ)?;
    out.push(phase);
    for w in nus.windows(2) {
        let (a, b) = (w[0] / GHZ, w[1] / GHZ);
        let rate = model.phase_time(a)?.abs().max(model.phase_time(b)?.abs());
        let steps = (4.0 * 2.0 * PI * rate * (b - a) / (PI / 2.0)).ceil().max(1.0) as usize;
        let mut prev = model.phase(a)?;
        for j in 1..=steps {
            let x = if j == steps { b } else { a + (b - a) * j as f64 / steps as f64 };
            let next = model.phase(x)?;
            phase += wrap(next - prev);
            prev = next;
        }
        out.push(phase);
    }
    Ok(out)
}

/// `τ_BL = Lν/(c√|ν² − ν_in²|)` in s: the evanescent `L/(ħκ/m)` below the
/// inner cutoff and the in-barrier group transit above it. Infinite at the
/// cutoff itself.
pub fn buttiker_landauer_time(nu: f64, g: &GuideGeometry) -> Result<f64> {
    check_frequency(nu, g)?;
    let cut = cutoff_frequencies(g);
    let gap = ((nu - cut.nu_in) * (nu + cut.nu_in)).abs();
    if gap == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(g.length * nu / (g.light_speed * gap.sqrt()))
}

/// Baseline averaged over the source line, `∫|A_ν|²τ(ν)dν / ∫|A_ν|²dν`, in s.
pub fn averaged_baseline(
    model: BaselineModel,
    src: &SourceSpec,
    g: &GuideGeometry,
    quad: &QuadratureSpec,
) -> Result<f64> {
    quad.validate()?;
    let optical = OpticalModel::new(src, g)?;
    let guide = optical.guide;
    let tau_ns = |x: f64| match model {
        BaselineModel::PhaseTime => guide.phase_time(x).unwrap_or(0.0),
        BaselineModel::ButtikerLandauer => buttiker_landauer_time(x * GHZ, g).map_or(0.0, |t| t * GHZ),
    };
    // The Büttiker-Landauer time has an integrable 1/√ singularity at the
    // inner cutoff; a window around it is integrated separately in u with
    // ν = ν_in ± u².
    let window = match model {
        BaselineModel::ButtikerLandauer if guide.nu_in > guide.nu_out => {
            let half = (src.lambda / GHZ).min((guide.nu_in - guide.nu_out) / 2.0);
            Some((guide.nu_in - half, guide.nu_in + half))
        }
        _ => None,
    };
    let integrand = |x: f64| {
        if !(x > guide.nu_out) {
            return Pair(0.0, 0.0);
        }
        let w = optical.intensity(x);
        if window.is_some_and(|(lo, hi)| x > lo && x < hi) {
            return Pair(0.0, w);
        }
        let tau = tau_ns(x);
        Pair(if tau.is_finite() { w * tau } else { 0.0 }, w)
    };
    let (Pair(mut num, weight), _, _) = optical.integrate_truncated(integrand, |v: &Pair<f64, f64>| v.1, quad)?;
    if let Some((lo, hi)) = window {
        for (side, half) in [(-1.0, guide.nu_in - lo), (1.0, hi - guide.nu_in)] {
            let f = |u: f64| {
                let x = guide.nu_in + side * u * u;
                let tau = tau_ns(x);
                if tau.is_finite() {
                    optical.intensity(x) * tau * 2.0 * u
                } else {
                    0.0
                }
            };
            let (part, _) = integrate_adaptive(f, 0.0, half.sqrt(), quad)?;
            num += part;
        }
    }
    if !(weight > 1e-300) {
        return Err(Error::Degenerate("source weight vanishes"));
    }
    Ok(num / weight / GHZ)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveguide::velocities;

    #[test]
    fn free_guide_phase_time_is_group_transit() {
        let g = GuideGeometry::unobstructed(0.15).unwrap();
        let cut = cutoff_frequencies(&g);
        for nu in [7e9, 8.5e9, 10e9, 12e9] {
            let expected = 0.15 / velocities(nu, &cut).unwrap().group;
            assert!((phase_time(nu, &g).unwrap() - expected).abs() < 1e-10 * expected);
        }
        assert!((phase_time(10e9, &g).unwrap() - 0.663e-9).abs() < 1e-12);
    }

    #[test]
    fn buttiker_landauer_at_nine_ghz() {
        let g = GuideGeometry::fig1(0.15).unwrap();
        let t = buttiker_landauer_time(9e9, &g).unwrap();
        assert!((t - 1.50e-9).abs() < 0.015e-9, "{t}");
        let nu_in = cutoff_frequencies(&g).nu_in;
        assert_eq!(buttiker_landauer_time(nu_in, &g).unwrap(), f64::INFINITY);
        assert!(buttiker_landauer_time(1e12, &g).unwrap() > 0.15 / g.light_speed);
    }

    #[test]
    fn phase_time_is_finite_across_cutoff() {
        let g = GuideGeometry::fig1(0.15).unwrap();
        let nu_in = cutoff_frequencies(&g).nu_in;
        for nu in [nu_in - 1e6, nu_in, nu_in + 1e6] {
            assert!(phase_time(nu, &g).unwrap().is_finite());
        }
    }

    #[test]
    fn phase_curve_is_continuous() {
        let g = GuideGeometry::fig1(0.2).unwrap();
        let nus: Vec<f64> = (0..60).map(|i| 8e9 + 5e7 * i as f64).collect();
        let phases = transmitted_phase_curve(&nus, &g).unwrap();
        for w in phases.windows(2) {
            assert!((w[1] - w[0]).abs() < PI);
        }
    }

    #[test]
    fn sts_tag_is_not_a_baseline() {
        assert!(BaselineModel::try_from(ModelTag::Sts).is_err());
        assert_eq!(ModelTag::from(BaselineModel::PhaseTime), ModelTag::PhaseTime);
    }
}
