//! Narrowed rectangular waveguide as a barrier analog: TE₀,₁ cutoffs, guide
//! wavenumbers, the Lorentzian klystron line and the optical delay.
//!
//! Public functions take frequencies in Hz, lengths in m and return times in
//! s. Integrals are evaluated internally in GHz and ns so the absolute
//! tolerances of [`QuadratureSpec`] sit at a sensible scale.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64;

use crate::curve::{DelayCurve, ModelTag, SweepSpec};
use crate::numerics::{
    integrate_breaks, truncate_semi_infinite, NumericsReport, Pair, QuadratureSpec, TailEnvelope,
};
use crate::quantum::{barrier_denominator, transmission_coefficient, Denominator, Wavenumbers};
use crate::{Error, Result, SPEED_OF_LIGHT};

const I: Complex64 = Complex64::new(0.0, 1.0);
const GHZ: f64 = 1e9;

/// Guide dimensions of the X-band circuit with its P-band narrowing.
pub const FIG1_A: f64 = 10.16e-3;
pub const FIG1_B: f64 = 22.86e-3;
pub const FIG1_A_PRIME: f64 = 7.9e-3;
pub const FIG1_B_PRIME: f64 = 15.8e-3;

/// Outer guide of height `b` with a section of height `b′` and length `L`.
/// The widths are carried as metadata; only heights enter TE₀,₁ cutoffs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuideGeometry {
    pub b: f64,
    pub b_prime: f64,
    pub a: f64,
    pub a_prime: f64,
    pub length: f64,
    pub light_speed: f64,
}

impl GuideGeometry {
    /// `b′ = b` is accepted and describes an unobstructed guide.
    pub fn new(b: f64, b_prime: f64, a: f64, a_prime: f64, length: f64) -> Result<Self> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(b) && positive(b_prime) && b_prime <= b) {
            return Err(Error::Invalid {
                what: "guide heights",
                reason: "need 0 < b' <= b",
            });
        }
        if !(positive(a) && positive(a_prime)) {
            return Err(Error::Invalid {
                what: "guide widths",
                reason: "must be positive",
            });
        }
        if !positive(length) {
            return Err(Error::Domain {
                what: "narrowing length",
                value: length,
            });
        }
        Ok(Self {
            b,
            b_prime,
            a,
            a_prime,
            length,
            light_speed: SPEED_OF_LIGHT,
        })
    }

    /// X-band guide (10.16 × 22.86 mm²) narrowed to 7.9 × 15.8 mm².
    pub fn fig1(length: f64) -> Result<Self> {
        Self::new(FIG1_B, FIG1_B_PRIME, FIG1_A, FIG1_A_PRIME, length)
    }

    /// The X-band guide without narrowing.
    pub fn unobstructed(length: f64) -> Result<Self> {
        Self::new(FIG1_B, FIG1_B, FIG1_A, FIG1_A, length)
    }

    pub fn with_light_speed(mut self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Domain {
                what: "light speed",
                value: c,
            });
        }
        self.light_speed = c;
        Ok(self)
    }
}

/// TE₀,₁ cutoff frequencies of the narrowed (`nu_in`) and outer (`nu_out`)
/// guides, in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoffs {
    pub nu_in: f64,
    pub nu_out: f64,
    pub light_speed: f64,
}

pub fn cutoff_frequencies(g: &GuideGeometry) -> Cutoffs {
    Cutoffs {
        nu_in: g.light_speed / (2.0 * g.b_prime),
        nu_out: g.light_speed / (2.0 * g.b),
        light_speed: g.light_speed,
    }
}

fn check_above_outer(nu: f64, cut: &Cutoffs) -> Result<()> {
    if !(nu.is_finite() && nu > cut.nu_out) {
        return Err(Error::Domain {
            what: "frequency at or below the outer cutoff",
            value: nu,
        });
    }
    Ok(())
}

/// `k = (2π/c)√(ν² − ν_out²)` and `k1 = (2π/c)√(ν² − ν_in²)`, rad/m.
pub fn guide_wavenumbers(nu: f64, cut: &Cutoffs) -> Result<Wavenumbers> {
    check_above_outer(nu, cut)?;
    let scale = 2.0 * PI / cut.light_speed;
    let k = scale * ((nu - cut.nu_out) * (nu + cut.nu_out)).sqrt();
    let k1_sq = scale * scale * (nu - cut.nu_in) * (nu + cut.nu_in);
    Ok(Wavenumbers::from_squares(k, k1_sq))
}

/// `k0 = (2π/c)√(ν_in² − ν_out²)`, the wavenumber equivalent of the barrier
/// height.
pub fn equivalent_potential(cut: &Cutoffs) -> f64 {
    2.0 * PI / cut.light_speed * ((cut.nu_in - cut.nu_out) * (cut.nu_in + cut.nu_out)).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Velocities {
    pub phase: f64,
    pub group: f64,
}

/// Phase and group velocities of the outer guide.
pub fn velocities(nu: f64, cut: &Cutoffs) -> Result<Velocities> {
    check_above_outer(nu, cut)?;
    let root = ((nu - cut.nu_out) * (nu + cut.nu_out)).sqrt();
    Ok(Velocities {
        phase: cut.light_speed * nu / root,
        group: cut.light_speed * root / nu,
    })
}

/// Phase carried by the source amplitude.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SourcePhase {
    /// `|A_ν| e^{−i2πνt_μ}`: the two-pole line intensity, with the arrival
    /// phase as the only phase.
    #[default]
    LineIntensity,
    /// The full complex two-pole amplitude, including the phase of both poles. The
    /// pole phase adds an emission delay of about `1/(2πΛ)`.
    TwoPole,
}

/// Lorentzian klystron line centred on `nu_mu` with scale `lambda` (Hz),
/// launched a distance `ell` (m) before the narrowing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSpec {
    pub nu_mu: f64,
    pub lambda: f64,
    pub ell: f64,
    pub phase: SourcePhase,
}

impl SourceSpec {
    pub fn new(nu_mu: f64, lambda: f64, ell: f64) -> Result<Self> {
        if !(nu_mu.is_finite() && nu_mu > 0.0) {
            return Err(Error::Domain {
                what: "source frequency",
                value: nu_mu,
            });
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Domain {
                what: "source linewidth",
                value: lambda,
            });
        }
        if !(ell.is_finite() && ell >= 0.0) {
            return Err(Error::Domain {
                what: "launch distance",
                value: ell,
            });
        }
        Ok(Self {
            nu_mu,
            lambda,
            ell,
            phase: SourcePhase::default(),
        })
    }

    pub fn with_phase(mut self, phase: SourcePhase) -> Self {
        self.phase = phase;
        self
    }

    /// `t_μ = ℓ/v_phase(ν_μ)`.
    pub fn t_mu(&self, cut: &Cutoffs) -> Result<f64> {
        Ok(self.ell / velocities(self.nu_mu, cut)?.phase)
    }
}

/// Pole terms of the line shape and their derivative, in whatever
/// frequency unit the arguments share.
fn pole_terms(nu: f64, nu_mu: f64, lambda: f64) -> (Complex64, Complex64) {
    let first = Complex64::new(lambda / 2.0, nu + nu_mu);
    let second = Complex64::new(-lambda / 2.0, nu - nu_mu);
    let value = first.inv() - second.inv();
    let derivative = -I / (first * first) + I / (second * second);
    (value, derivative)
}

/// The complex two-pole Lorentzian amplitude
/// `√(Λ/2π)e^{−i2πνt_μ}{1/[i(ν+ν_μ)+Λ/2] − 1/[i(ν−ν_μ)−Λ/2]}`, in Hz^{-1/2}.
/// The [`SourceSpec::phase`] setting does not affect this function.
pub fn lorentzian_amplitude(nu: f64, src: &SourceSpec, cut: &Cutoffs) -> Result<Complex64> {
    let t_mu = src.t_mu(cut)?;
    let (b, _) = pole_terms(nu, src.nu_mu, src.lambda);
    Ok((src.lambda / (2.0 * PI)).sqrt() * Complex64::from_polar(1.0, -2.0 * PI * nu * t_mu) * b)
}

/// Guide in GHz and rad/m.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GuideModel {
    pub(crate) nu_in: f64,
    pub(crate) nu_out: f64,
    /// `2π/c` in rad/m per GHz.
    scale: f64,
    length: f64,
}

impl GuideModel {
    pub(crate) fn new(g: &GuideGeometry) -> Self {
        let cut = cutoff_frequencies(g);
        Self {
            nu_in: cut.nu_in / GHZ,
            nu_out: cut.nu_out / GHZ,
            scale: 2.0 * PI * GHZ / g.light_speed,
            length: g.length,
        }
    }

    /// `k` and `k1²` with their ν-derivatives.
    fn wavenumbers(&self, nu: f64) -> (f64, f64, f64, f64) {
        let s2 = self.scale * self.scale;
        let k = self.scale * ((nu - self.nu_out) * (nu + self.nu_out)).sqrt();
        let dk = s2 * nu / k;
        let k1_sq = s2 * (nu - self.nu_in) * (nu + self.nu_in);
        (k, dk, k1_sq, 2.0 * s2 * nu)
    }

    pub(crate) fn denominator(&self, nu: f64) -> Result<Denominator> {
        let (k, dk, k1_sq, dk1_sq) = self.wavenumbers(nu);
        barrier_denominator(k, dk, k1_sq, dk1_sq, self.length)
    }

    /// `T(ν)` from the closed form of the transmission coefficient.
    pub(crate) fn transmission(&self, nu: f64) -> Result<Complex64> {
        let (k, _, k1_sq, _) = self.wavenumbers(nu);
        transmission_coefficient(k, Wavenumbers::from_squares(k, k1_sq).k1, self.length)
    }

    /// `arg(T e^{ikL}) = −arg D`, wrapped to `(−π, π]`.
    pub(crate) fn phase(&self, nu: f64) -> Result<f64> {
        let d = self.denominator(nu)?;
        Ok((d.p * d.sinc_q).atan2(d.cos_q))
    }

    /// Phase time `(1/2π)·d arg(T e^{ikL})/dν` in ns, from the real and
    /// imaginary parts of the barrier denominator.
    pub(crate) fn phase_time(&self, nu: f64) -> Result<f64> {
        let d = self.denominator(nu)?;
        let ps = d.p * d.sinc_q;
        let num = d.cos_q * d.d_psinc - ps * d.dcos_q;
        Ok(num / (2.0 * PI * (d.cos_q * d.cos_q + ps * ps)))
    }
}

/// Source and guide in GHz, ns and rad/m.
#[derive(Debug, Clone, Copy)]
pub(crate) struct OpticalModel {
    nu_mu: f64,
    lambda: f64,
    t_mu: f64,
    phase: SourcePhase,
    pub(crate) guide: GuideModel,
}

impl OpticalModel {
    pub(crate) fn new(src: &SourceSpec, g: &GuideGeometry) -> Result<Self> {
        let cut = cutoff_frequencies(g);
        check_above_outer(src.nu_mu, &cut)?;
        Ok(Self {
            nu_mu: src.nu_mu / GHZ,
            lambda: src.lambda / GHZ,
            t_mu: src.t_mu(&cut)? * GHZ,
            phase: src.phase,
            guide: GuideModel::new(g),
        })
    }

    fn amplitude(&self, nu: f64) -> (Complex64, Complex64) {
        let (b, db) = pole_terms(nu, self.nu_mu, self.lambda);
        let norm = (self.lambda / (2.0 * PI)).sqrt();
        let (b, db) = match self.phase {
            SourcePhase::TwoPole => (b, db),
            SourcePhase::LineIntensity => {
                let m = b.norm();
                (Complex64::new(m, 0.0), Complex64::new((b.conj() * db).re / m, 0.0))
            }
        };
        let arrival = Complex64::from_polar(norm, -2.0 * PI * nu * self.t_mu);
        (arrival * b, arrival * (db - I * (2.0 * PI * self.t_mu) * b))
    }

    /// `|A_ν|²` in GHz⁻¹.
    pub(crate) fn intensity(&self, nu: f64) -> f64 {
        let (b, _) = pole_terms(nu, self.nu_mu, self.lambda);
        self.lambda / (2.0 * PI) * b.norm_sqr()
    }

    /// `F = T·A·e^{ikL}` and `dF/dν`; zero where the guide is too opaque to
    /// represent.
    fn field(&self, nu: f64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        if !(nu > self.guide.nu_out) {
            return (zero, zero);
        }
        let (k, dk, _, _) = self.guide.wavenumbers(nu);
        let (Ok(t), Ok(d)) = (self.guide.transmission(nu), self.guide.denominator(nu)) else {
            return (zero, zero);
        };
        let (a, da) = self.amplitude(nu);
        let length = self.guide.length;
        let shift = Complex64::from_polar(1.0, k * length);
        let dt = t * (-I * length * dk - d.derivative / d.value);
        let f = t * a * shift;
        let df = (dt * a + t * da + I * length * dk * t * a) * shift;
        (f, df)
    }

    /// Breakpoints between `lo` and `hi`: the inner cutoff and a geometric
    /// ladder of distances from the line centre.
    fn breaks(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = alloc::vec![lo, hi, self.guide.nu_in, self.nu_mu];
        let mut d = self.lambda / 4.0;
        while d < hi - lo + self.lambda {
            out.push(self.nu_mu - d);
            out.push(self.nu_mu + d);
            d *= 2.0;
        }
        out.retain(|b| *b >= lo && *b <= hi);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn envelope(&self) -> TailEnvelope {
        TailEnvelope::LorentzianPair {
            center: self.nu_mu,
            hwhm: self.lambda / 2.0,
        }
    }

    /// Integrates `g` from the outer cutoff upward, extending the upper limit
    /// until the Lorentzian tail bound is below `tail_fraction` of the
    /// weight returned by `weight_of`.
    pub(crate) fn integrate_truncated<V, G, W>(
        &self,
        mut g: G,
        weight_of: W,
        quad: &QuadratureSpec,
    ) -> Result<(V, f64, NumericsReport)>
    where
        V: crate::numerics::QuadValue,
        G: FnMut(f64) -> V,
        W: Fn(&V) -> f64,
    {
        let mut total = V::zero();
        let mut report = NumericsReport::default();
        let mut lower = self.guide.nu_out;
        let limit = truncate_semi_infinite(&self.envelope(), quad, |upper| {
            let (part, r) = integrate_breaks(&mut g, &self.breaks(lower, upper), quad)?;
            total = total + part;
            report.absorb(&r);
            lower = upper;
            Ok(weight_of(&total))
        })?;
        report.truncation_point = Some(limit * GHZ);
        Ok((total, limit, report))
    }
}

/// Optical delay with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalDelay {
    /// Delay in s.
    pub value: f64,
    /// Deviation of the real part of the numerator from its exact boundary
    /// value, relative to `∫|F*F′|dν`.
    pub imag_residue: f64,
    /// Upper integration limit in Hz.
    pub nu_max: f64,
    /// `∫|T A_ν|² dν` with `ν` in GHz.
    pub transmitted_weight: f64,
    pub report: NumericsReport,
}

/// `∫F*∂_νF dν / (2πi∫|F|² dν)` with `F = T(ν)A_ν e^{ik(ν)L}` over
/// `(ν_out, ∞)`.
pub fn optical_expected_time(src: &SourceSpec, g: &GuideGeometry, quad: &QuadratureSpec) -> Result<OpticalDelay> {
    quad.validate()?;
    let model = OpticalModel::new(src, g)?;
    let integrand = |nu: f64| {
        let (f, df) = model.field(nu);
        let x = f.conj() * df;
        Pair(Pair(x, f.norm_sqr()), x.norm())
    };
    let (Pair(Pair(x, weight), scale), limit, report) =
        model.integrate_truncated(integrand, |v: &Pair<Pair<Complex64, f64>, f64>| v.0 .1, quad)?;
    if !(weight > 1e-300) {
        return Err(Error::Degenerate("transmitted source weight vanishes"));
    }
    let lowest = model.guide.nu_out * (1.0 + 1e-12);
    let boundary = 0.5 * (model.field(limit).0.norm_sqr() - model.field(lowest).0.norm_sqr());
    let imag_residue = if scale > 0.0 { (x.re - boundary).abs() / scale } else { 0.0 };
    if imag_residue > quad.reality_tol {
        return Err(Error::NotReal {
            residue: imag_residue,
            tolerance: quad.reality_tol,
        });
    }
    let value = x.im / (2.0 * PI * weight) / GHZ;
    if !value.is_finite() {
        return Err(Error::NonFinite(value));
    }
    Ok(OpticalDelay {
        value,
        imag_residue,
        nu_max: limit * GHZ,
        transmitted_weight: weight,
        report,
    })
}

/// `F(ν)` and `dF/dν` at `nu` (Hz), in Hz^{-1/2} and Hz^{-3/2}.
pub fn transmitted_field(nu: f64, src: &SourceSpec, g: &GuideGeometry) -> Result<(Complex64, Complex64)> {
    let model = OpticalModel::new(src, g)?;
    check_above_outer(nu, &cutoff_frequencies(g))?;
    let (f, df) = model.field(nu / GHZ);
    let to_hz = GHZ.sqrt().recip();
    Ok((f * to_hz, df * to_hz / GHZ))
}

/// `∫|T A_ν|² τ_PT(ν) dν / ∫|T A_ν|² dν`, the phase time averaged over the
/// transmitted line, in s. Evaluated independently of
/// [`optical_expected_time`]: the weight comes from `|T|²|A|²` and the phase
/// time from real arithmetic on the barrier denominator.
pub fn weighted_phase_time(src: &SourceSpec, g: &GuideGeometry, quad: &QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    let model = OpticalModel::new(src, g)?;
    let integrand = |nu: f64| {
        if !(nu > model.guide.nu_out) {
            return Pair(0.0, 0.0);
        }
        let (Ok(t), Ok(tau)) = (model.guide.transmission(nu), model.guide.phase_time(nu)) else {
            return Pair(0.0, 0.0);
        };
        let w = t.norm_sqr() * model.intensity(nu);
        Pair(w * tau, w)
    };
    let (Pair(num, weight), _, _) = model.integrate_truncated(integrand, |v: &Pair<f64, f64>| v.1, quad)?;
    if !(weight > 1e-300) {
        return Err(Error::Degenerate("transmitted source weight vanishes"));
    }
    Ok(num / weight / GHZ)
}

/// Optical delay at every sweep frequency for a source of linewidth
/// `lambda` launched `ell` before the narrowing.
pub fn delay_curve(
    sweep: &SweepSpec,
    g: &GuideGeometry,
    lambda: f64,
    ell: f64,
    quad: &QuadratureSpec,
) -> DelayCurve {
    DelayCurve::evaluate(ModelTag::Sts, sweep, |nu| {
        let src = SourceSpec::new(nu, lambda, ell)?;
        Ok(optical_expected_time(&src, g, quad)?.value)
    })
}
