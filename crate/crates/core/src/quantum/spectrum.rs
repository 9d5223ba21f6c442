#[allow(unused_imports)]
use num_traits::Float;
use alloc::boxed::Box;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::barrier::{barrier_denominator, transmission_coefficient, BarrierSpec, Wavenumbers};
use super::QuantumUnits;
use crate::numerics::MonotoneCubic;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Polynomial phase `φ(k) = c0 + c1·k + c2·k²` applied to a closed-form
/// profile. `c1` shifts the packet in space, `c2` in time.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhasePolynomial {
    pub constant: f64,
    pub linear: f64,
    pub quadratic: f64,
}

impl PhasePolynomial {
    fn value(&self, k: f64) -> f64 {
        self.constant + k * (self.linear + k * self.quadratic)
    }

    fn slope(&self, k: f64) -> f64 {
        self.linear + 2.0 * self.quadratic * k
    }
}

/// Envelope of a closed-form amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `exp(−(k − center)²/(4·width²))`, so `|C|²` has standard deviation `width`.
    Gaussian { center: f64, width: f64 },
    /// `width²/((k − center)² + width²)`.
    Lorentzian { center: f64, width: f64 },
}

impl Profile {
    fn center(&self) -> f64 {
        match *self {
            Profile::Gaussian { center, .. } | Profile::Lorentzian { center, .. } => center,
        }
    }

    fn width(&self) -> f64 {
        match *self {
            Profile::Gaussian { width, .. } | Profile::Lorentzian { width, .. } => width,
        }
    }

    fn eval(&self, k: f64) -> (f64, f64) {
        match *self {
            Profile::Gaussian { center, width } => {
                let d = k - center;
                let g = (-d * d / (4.0 * width * width)).exp();
                (g, -d / (2.0 * width * width) * g)
            }
            Profile::Lorentzian { center, width } => {
                let d = k - center;
                let den = d * d + width * width;
                let g = width * width / den;
                (g, -2.0 * d * width * width / (den * den))
            }
        }
    }

    /// Distance from the centre beyond which the envelope is below `tol`.
    fn reach(&self, tol: f64) -> f64 {
        match *self {
            Profile::Gaussian { width, .. } => 2.0 * width * (1.0 / tol).ln().sqrt(),
            Profile::Lorentzian { width, .. } => width / tol.sqrt(),
        }
    }
}

/// `C(k) = scale · h(k) · profile(k) · e^{iφ(k)}` with the threshold factor
/// `h(k) = (k²/(k² + k_t²))²`. The threshold makes `|C|²/k` vanish as
/// `k → 0⁺`, which the closed-form expectation value relies on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub profile: Profile,
    pub scale: Complex64,
    pub phase: PhasePolynomial,
    pub threshold: f64,
}

impl ClosedForm {
    pub fn new(profile: Profile) -> Result<Self> {
        let (center, width) = (profile.center(), profile.width());
        if !(center.is_finite() && center > 0.0) {
            return Err(Error::Domain {
                what: "spectrum centre",
                value: center,
            });
        }
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::Domain {
                what: "spectrum width",
                value: width,
            });
        }
        Ok(Self {
            profile,
            scale: Complex64::new(1.0, 0.0),
            phase: PhasePolynomial::default(),
            threshold: 0.25 * center,
        })
    }

    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        Self::new(Profile::Gaussian { center, width })
    }

    pub fn lorentzian(center: f64, width: f64) -> Result<Self> {
        Self::new(Profile::Lorentzian { center, width })
    }

    pub fn with_phase(mut self, phase: PhasePolynomial) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_scale(mut self, scale: Complex64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold.max(0.0);
        self
    }

    /// Multiplies by `e^{+iE_k t0/ħ}`, which delays every arrival by `t0`.
    pub fn delayed_by(mut self, t0: f64, units: &QuantumUnits) -> Self {
        self.phase.quadratic += units.hbar * t0 / (2.0 * units.mass);
        self
    }

    fn threshold_factor(&self, k: f64) -> (f64, f64) {
        if self.threshold == 0.0 {
            return (1.0, 0.0);
        }
        let kt2 = self.threshold * self.threshold;
        let den = k * k + kt2;
        let r = k * k / den;
        let dr = 2.0 * k * kt2 / (den * den);
        (r * r, 2.0 * r * dr)
    }

    pub fn eval(&self, k: f64) -> (Complex64, Complex64) {
        let (g, dg) = self.profile.eval(k);
        let (h, dh) = self.threshold_factor(k);
        let rot = self.scale * Complex64::from_polar(1.0, self.phase.value(k));
        let env = h * g;
        let denv = dh * g + h * dg;
        let value = rot * env;
        let derivative = rot * Complex64::new(denv, self.phase.slope(k) * env);
        (value, derivative)
    }

    fn support(&self, tol: f64) -> (f64, f64) {
        let reach = self.profile.reach(tol);
        let c = self.profile.center();
        ((c - reach).max(0.0), c + reach)
    }

    fn breakpoints(&self, tol: f64) -> Vec<f64> {
        let (lo, hi) = self.support(tol);
        let (c, w) = (self.profile.center(), self.profile.width());
        let mut out = alloc::vec![lo, c, hi];
        let mut step = w;
        while step < hi - lo {
            out.push(c - step);
            out.push(c + step);
            step *= 4.0;
        }
        if self.threshold > 0.0 {
            out.push(self.threshold);
        }
        finish_breaks(out, lo, hi)
    }
}

fn finish_breaks(mut out: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    out.retain(|b| *b >= lo && *b <= hi);
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Amplitude tabulated on a wavenumber grid, interpolated with monotone
/// cubics on the real and imaginary parts. Zero outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledAmplitude {
    re: MonotoneCubic,
    im: MonotoneCubic,
}

impl SampledAmplitude {
    pub fn new(k: Vec<f64>, values: &[Complex64]) -> Result<Self> {
        if k.len() < 4 {
            return Err(Error::Invalid {
                what: "sampled spectrum",
                reason: "needs at least four samples",
            });
        }
        if k[0] < 0.0 {
            return Err(Error::Domain {
                what: "sampled wavenumber",
                value: k[0],
            });
        }
        let re = MonotoneCubic::new(k.clone(), values.iter().map(|c| c.re).collect())?;
        let im = MonotoneCubic::new(k, values.iter().map(|c| c.im).collect())?;
        Ok(Self { re, im })
    }

    pub fn eval(&self, k: f64) -> (Complex64, Complex64) {
        let (vr, dr) = self.re.eval(k);
        let (vi, di) = self.im.eval(k);
        (Complex64::new(vr, vi), Complex64::new(dr, di))
    }

    fn support(&self) -> (f64, f64) {
        let knots = self.re.knots();
        (knots[0], knots[knots.len() - 1])
    }

    fn breakpoints(&self) -> Vec<f64> {
        let knots = self.re.knots();
        let stride = knots.len().div_ceil(2000).max(1);
        let mut out: Vec<f64> = knots.iter().step_by(stride).copied().collect();
        out.push(knots[knots.len() - 1]);
        let (lo, hi) = self.support();
        finish_breaks(out, lo, hi)
    }
}

/// One branch (`C⁺` or `C⁻`) of a momentum spectrum.
#[derive(Debug, Clone, PartialEq)]
pub enum Amplitude {
    Closed(ClosedForm),
    Sampled(SampledAmplitude),
    /// `A(k)·T(k)`: an incident amplitude after crossing a barrier.
    Filtered { incident: Box<Amplitude>, barrier: BarrierSpec },
}

impl From<ClosedForm> for Amplitude {
    fn from(c: ClosedForm) -> Self {
        Amplitude::Closed(c)
    }
}

impl From<SampledAmplitude> for Amplitude {
    fn from(s: SampledAmplitude) -> Self {
        Amplitude::Sampled(s)
    }
}

/// Transmission coefficient and its k-derivative, or zero for `k ≤ 0`
/// and barriers too opaque to represent.
pub(crate) fn transmission_with_derivative(k: f64, barrier: &BarrierSpec) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    if !(k > 0.0) {
        return (zero, zero);
    }
    let k1_sq = k * k - barrier.threshold_wavenumber_sq();
    let w = Wavenumbers::from_squares(k, k1_sq);
    let Ok(t) = transmission_coefficient(k, w.k1, barrier.length) else {
        return (zero, zero);
    };
    let Ok(d) = barrier_denominator(k, 1.0, k1_sq, 2.0 * k, barrier.length) else {
        return (zero, zero);
    };
    let dt = t * (-I * barrier.length - d.derivative / d.value);
    (t, dt)
}

impl Amplitude {
    pub fn value(&self, k: f64) -> Complex64 {
        self.value_and_derivative(k).0
    }

    /// `(C(k), dC/dk)`.
    pub fn value_and_derivative(&self, k: f64) -> (Complex64, Complex64) {
        match self {
            Amplitude::Closed(c) => c.eval(k),
            Amplitude::Sampled(s) => s.eval(k),
            Amplitude::Filtered { incident, barrier } => {
                let (a, da) = incident.value_and_derivative(k);
                let (t, dt) = transmission_with_derivative(k, barrier);
                (a * t, da * t + a * dt)
            }
        }
    }

    /// Interval outside which the amplitude is below `tol` relative to its
    /// peak (closed forms) or identically zero (sampled grids).
    pub fn support(&self, tol: f64) -> (f64, f64) {
        match self {
            Amplitude::Closed(c) => c.support(tol),
            Amplitude::Sampled(s) => s.support(),
            Amplitude::Filtered { incident, .. } => incident.support(tol),
        }
    }

    pub fn breakpoints(&self, tol: f64) -> Vec<f64> {
        match self {
            Amplitude::Closed(c) => c.breakpoints(tol),
            Amplitude::Sampled(s) => s.breakpoints(),
            Amplitude::Filtered { incident, barrier } => {
                let mut out = incident.breakpoints(tol);
                let (lo, hi) = incident.support(tol);
                out.push(barrier.threshold_wavenumber_sq().sqrt());
                finish_breaks(out, lo, hi)
            }
        }
    }
}

/// Amplitudes `C⁺_k` and `C⁻_k` of detection with momentum `±ħk`, `k ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumSpectrum {
    pub plus: Option<Amplitude>,
    pub minus: Option<Amplitude>,
    pub units: QuantumUnits,
}

impl MomentumSpectrum {
    /// Right-moving packet: `C⁺ = A`, `C⁻ = 0`.
    pub fn incident(amplitude: impl Into<Amplitude>, units: QuantumUnits) -> Self {
        Self {
            plus: Some(amplitude.into()),
            minus: None,
            units,
        }
    }

    pub fn new(plus: Option<Amplitude>, minus: Option<Amplitude>, units: QuantumUnits) -> Result<Self> {
        if plus.is_none() && minus.is_none() {
            return Err(Error::Invalid {
                what: "momentum spectrum",
                reason: "needs at least one branch",
            });
        }
        Ok(Self { plus, minus, units })
    }

    /// Non-empty branches with their propagation sign.
    pub fn branches(&self) -> impl Iterator<Item = (f64, &Amplitude)> {
        self.plus
            .iter()
            .map(|a| (1.0, a))
            .chain(self.minus.iter().map(|a| (-1.0, a)))
    }
}
