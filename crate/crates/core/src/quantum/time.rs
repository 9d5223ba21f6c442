#[allow(unused_imports)]
use num_traits::Float;
use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::barrier::BarrierSpec;
use super::spectrum::{transmission_with_derivative, Amplitude, MomentumSpectrum};
use super::QuantumUnits;
use crate::numerics::{fft_in_place, integrate_breaks, integrate_panels, NumericsReport, Pair, QuadratureSpec};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative amplitude below which closed-form spectra are cut for the
/// expectation-value integrals.
const CLOSED_CUTOFF: f64 = 1e-9;
/// Relative amplitude cut for the time-domain oracle.
const DIRECT_CUTOFF: f64 = 1e-5;
/// Smallest accepted spectral norm.
const MIN_NORM: f64 = 1e-300;

/// Expectation value of the time operator at a fixed detection position.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeExpectation {
    pub value: f64,
    /// `|Re N − boundary| / ∫|Γ*Γ′|dk` for the numerator `N`; zero for an
    /// exact evaluation.
    pub imag_residue: f64,
    /// `∫(|C⁺|² + |C⁻|²) dk`.
    pub norm: f64,
    pub report: NumericsReport,
}

/// Accumulates `∫Γ*Γ′ dk` and `∫|C|² dk` over one branch, given a callback
/// returning `(C, C′)` and the extra phase slope `s·x`.
fn branch_moments<F>(
    mut eval: F,
    breaks: &[f64],
    phase_slope: f64,
    quad: &QuadratureSpec,
) -> Result<(Moments, NumericsReport)>
where
    F: FnMut(f64) -> (Complex64, Complex64),
{
    let integrand = |k: f64| {
        if !(k > 0.0) {
            return Pair(Pair(Complex64::new(0.0, 0.0), 0.0), 0.0);
        }
        let (c, dc) = eval(k);
        let g = c.norm_sqr();
        let num = (c.conj() * dc + I * (phase_slope * g) - g / (2.0 * k)) / k;
        Pair(Pair(num, g), num.norm())
    };
    let (Pair(Pair(num, den), scale), report) = integrate_breaks(integrand, breaks, quad)?;
    let (lo, hi) = (breaks[0], breaks[breaks.len() - 1]);
    let mut edge = |k: f64| if k > 0.0 { eval(k).0.norm_sqr() / k } else { 0.0 };
    let boundary = 0.5 * (edge(hi) - edge(lo));
    Ok((
        Moments {
            num,
            den,
            scale,
            boundary,
        },
        report,
    ))
}

/// Branch integrals entering an expectation value.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    /// `∫Γ*Γ′ dk`.
    num: Complex64,
    /// `∫|C|² dk`.
    den: f64,
    /// `∫|Γ*Γ′| dk`, the scale of the reality check.
    scale: f64,
    /// `½[|Γ|²]` over the integration range, the exact value of `Re num`.
    boundary: f64,
}

impl Moments {
    fn add(&mut self, o: &Moments) {
        self.num += o.num;
        self.den += o.den;
        self.scale += o.scale;
        self.boundary += o.boundary;
    }
}

fn finish(
    m: Moments,
    units: &QuantumUnits,
    report: NumericsReport,
    quad: &QuadratureSpec,
) -> Result<TimeExpectation> {
    if !(m.den > MIN_NORM) {
        return Err(Error::Degenerate("spectral norm vanishes"));
    }
    let imag_residue = if m.scale > 0.0 { (m.num.re - m.boundary).abs() / m.scale } else { 0.0 };
    if imag_residue > quad.reality_tol {
        return Err(Error::NotReal {
            residue: imag_residue,
            tolerance: quad.reality_tol,
        });
    }
    let value = units.time_factor() * m.num.im / m.den;
    if !value.is_finite() {
        return Err(Error::NonFinite(value));
    }
    Ok(TimeExpectation {
        value,
        imag_residue,
        norm: m.den,
        report,
    })
}

/// `⟨T̂⟩(x) = (m/iħ)∫Σ Γ*∂_kΓ dk / ∫Σ|C|² dk` with `Γ± = C± e^{±ikx}/√k`.
pub fn expected_time_closed(spec: &MomentumSpectrum, x: f64, quad: &QuadratureSpec) -> Result<TimeExpectation> {
    quad.validate()?;
    if !x.is_finite() {
        return Err(Error::Domain {
            what: "detection position",
            value: x,
        });
    }
    let mut total = Moments::default();
    let mut report = NumericsReport::default();
    for (sign, amp) in spec.branches() {
        let breaks = amp.breakpoints(CLOSED_CUTOFF);
        let (m, r) = branch_moments(|k| amp.value_and_derivative(k), &breaks, sign * x, quad)?;
        total.add(&m);
        report.absorb(&r);
    }
    finish(total, &spec.units, report, quad)
}

/// `C⁺ = A·T`, `C⁻ = 0` for an incident right-moving packet.
pub fn post_barrier_spectrum(incident: &MomentumSpectrum, barrier: &BarrierSpec) -> Result<MomentumSpectrum> {
    if incident.minus.is_some() {
        return Err(Error::Invalid {
            what: "incident spectrum",
            reason: "must not contain a left-moving branch",
        });
    }
    let Some(a) = incident.plus.as_ref() else {
        return Err(Error::Invalid {
            what: "incident spectrum",
            reason: "right-moving branch is empty",
        });
    };
    if incident.units != barrier.units {
        return Err(Error::Invalid {
            what: "units",
            reason: "spectrum and barrier disagree",
        });
    }
    Ok(MomentumSpectrum {
        plus: Some(Amplitude::Filtered {
            incident: Box::new(a.clone()),
            barrier: *barrier,
        }),
        minus: None,
        units: incident.units,
    })
}

/// Expected detection time just past the barrier, built from
/// `F = A·T·e^{ikL}` without forming the filtered spectrum.
pub fn expected_time_after_barrier(
    incident: &MomentumSpectrum,
    barrier: &BarrierSpec,
    quad: &QuadratureSpec,
) -> Result<TimeExpectation> {
    quad.validate()?;
    let filtered = post_barrier_spectrum(incident, barrier)?;
    let Some(Amplitude::Filtered { incident: a, .. }) = filtered.plus.as_ref() else {
        unreachable!("post_barrier_spectrum always filters the right-moving branch");
    };
    let length = barrier.length;
    let eval = |k: f64| {
        let (av, ad) = a.value_and_derivative(k);
        let (t, dt) = transmission_with_derivative(k, barrier);
        let shift = Complex64::from_polar(1.0, k * length);
        let f = av * t * shift;
        let df = (ad * t + av * dt + I * length * av * t) * shift;
        (f, df)
    };
    let breaks = filtered.plus.as_ref().map(|p| p.breakpoints(CLOSED_CUTOFF)).unwrap_or_default();
    let (m, report) = branch_moments(eval, &breaks, 0.0, quad)?;
    finish(m, &incident.units, report, quad)
}

/// Delay across the barrier and its two constituents.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayTime {
    pub value: f64,
    /// `⟨T̂⟩(L)` of the transmitted packet.
    pub exit: TimeExpectation,
    /// `⟨T̂⟩(0)` of the incident packet.
    pub entry: TimeExpectation,
}

pub fn delay_time(incident: &MomentumSpectrum, barrier: &BarrierSpec, quad: &QuadratureSpec) -> Result<DelayTime> {
    let exit = expected_time_after_barrier(incident, barrier, quad)?;
    let entry = expected_time_closed(incident, 0.0, quad)?;
    Ok(DelayTime {
        value: exit.value - entry.value,
        exit,
        entry,
    })
}

fn phase_samples(amp: &Amplitude, lo: f64, hi: f64) -> impl Iterator<Item = (f64, Complex64, Complex64)> + '_ {
    const SAMPLES: usize = 128;
    (0..=SAMPLES).map(move |i| {
        let k = lo + (hi - lo) * (i as f64) / (SAMPLES as f64);
        let (c, dc) = amp.value_and_derivative(k);
        (k, c, dc)
    })
}

/// Arrival-time density `ρ(t|x)`, normalized by `∫(|C⁺|² + |C⁻|²) dk` so
/// that it integrates to one over `t`.
pub fn rho_t_given_x(spec: &MomentumSpectrum, x: f64, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    if !(x.is_finite() && t.is_finite()) {
        return Err(Error::Domain {
            what: "detection event",
            value: if x.is_finite() { t } else { x },
        });
    }
    let units = spec.units;
    let mut total = 0.0;
    let mut norm = 0.0;
    for (sign, amp) in spec.branches() {
        let (lo, hi) = amp.support(DIRECT_CUTOFF);
        let slope = phase_samples(amp, lo, hi)
            .map(|(k, c, dc)| {
                let own = if c.norm_sqr() > 0.0 { (dc / c).im } else { 0.0 };
                (sign * x - units.hbar * k * t / units.mass + own).abs()
            })
            .fold(0.0, f64::max);
        let panels = ((hi - lo) * slope / PI).ceil() as usize + 8;
        let panels = panels.min(quad.max_subdivisions / 2).max(1);
        let integrand = |k: f64| {
            if !(k > 0.0) {
                return Complex64::new(0.0, 0.0);
            }
            let c = amp.value(k);
            c * k.sqrt() * Complex64::from_polar(1.0, sign * k * x - units.omega(k) * t)
        };
        let (a, _) = integrate_panels::<Complex64, _>(integrand, lo, hi, panels, quad)?;
        total += a.norm_sqr();
        let breaks = amp.breakpoints(CLOSED_CUTOFF);
        let (n, _) = integrate_breaks(|k: f64| amp.value(k).norm_sqr(), &breaks, quad)?;
        norm += n;
    }
    if !(norm > MIN_NORM) {
        return Err(Error::Degenerate("spectral norm vanishes"));
    }
    Ok(units.hbar / (2.0 * PI * units.mass) * total / norm)
}

/// Sampling window for the time-domain oracle. Unset fields are chosen
/// from the spectrum; an automatic half-width is doubled until the edges of
/// the window hold less than `edge_tolerance` of the density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub center: Option<f64>,
    pub half_width: Option<f64>,
    /// Time samples per Nyquist interval of the fastest phase.
    pub oversampling: usize,
    pub edge_tolerance: f64,
    pub max_doublings: u32,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            center: None,
            half_width: None,
            oversampling: 16,
            edge_tolerance: 1e-9,
            max_doublings: 10,
        }
    }
}

/// Result of the brute-force time-domain evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectTimeExpectation {
    pub value: f64,
    /// Fraction of `∫ρ dt` lying away from the window edges.
    pub captured: f64,
    pub window: (f64, f64),
    pub step: f64,
    pub samples: usize,
}

const MAX_SAMPLES: usize = 1 << 24;

struct BranchWindow<'a> {
    sign: f64,
    amp: &'a Amplitude,
    omega_lo: f64,
    omega_hi: f64,
}

/// Stationary-phase arrival `t(k) = (m/ħk)(s·x + arg′C)` at the mean
/// wavenumber, and the arrival spread over `±3Δk`.
fn arrival_estimate(
    amp: &Amplitude,
    sign: f64,
    x: f64,
    units: &QuantumUnits,
    quad: &QuadratureSpec,
) -> Result<(f64, f64, f64)> {
    let breaks = amp.breakpoints(CLOSED_CUTOFF);
    let moments = |k: f64| {
        let g = amp.value(k).norm_sqr();
        Pair(Pair(g, g * k), g * k * k)
    };
    let (Pair(Pair(m0, m1), m2), _) = integrate_breaks(moments, &breaks, quad)?;
    if !(m0 > MIN_NORM) {
        return Err(Error::Degenerate("spectral norm vanishes"));
    }
    let mean = m1 / m0;
    let spread = (m2 / m0 - mean * mean).max(0.0).sqrt();
    let arrival = |k: f64| {
        let k = k.max(1e-3 * mean);
        let (c, dc) = amp.value_and_derivative(k);
        let own = if c.norm_sqr() > 0.0 { (dc / c).im } else { 0.0 };
        units.time_factor() * (sign * x + own) / k
    };
    let center = arrival(mean);
    let dispersion = [mean - 3.0 * spread, mean + 3.0 * spread]
        .iter()
        .map(|&k| (arrival(k) - center).abs())
        .fold(0.0, f64::max);
    let domega = units.hbar * mean * spread / units.mass;
    Ok((center, dispersion, domega))
}

/// `∫tρ(t|x)dt / ∫ρ(t|x)dt` evaluated on a uniform time grid. The
/// amplitudes are sampled on a midpoint grid in `ω = E/ħ` and transformed
/// with a single FFT per branch.
pub fn expected_time_direct(
    spec: &MomentumSpectrum,
    x: f64,
    grid: &TimeGrid,
    quad: &QuadratureSpec,
) -> Result<DirectTimeExpectation> {
    quad.validate()?;
    if !x.is_finite() {
        return Err(Error::Domain {
            what: "detection position",
            value: x,
        });
    }
    if grid.oversampling < 2 || !(grid.edge_tolerance > 0.0) {
        return Err(Error::Invalid {
            what: "time grid",
            reason: "oversampling must be at least 2 and edge tolerance positive",
        });
    }
    let units = spec.units;
    let mut windows = Vec::new();
    let mut centers = Vec::new();
    let mut half_width: f64 = 0.0;
    for (sign, amp) in spec.branches() {
        let (lo, hi) = amp.support(DIRECT_CUTOFF);
        windows.push(BranchWindow {
            sign,
            amp,
            omega_lo: units.omega(lo),
            omega_hi: units.omega(hi),
        });
        let (center, dispersion, domega) = arrival_estimate(amp, sign, x, &units, quad)?;
        centers.push(center);
        half_width = half_width.max((10.0 / domega).max(5.0 * dispersion));
    }
    let c_lo = centers.iter().copied().fold(f64::INFINITY, f64::min);
    let c_hi = centers.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let center = grid.center.unwrap_or(0.5 * (c_lo + c_hi));
    let mut half_width = grid.half_width.unwrap_or(half_width + 0.5 * (c_hi - c_lo));
    if !(half_width.is_finite() && half_width > 0.0 && center.is_finite()) {
        return Err(Error::Degenerate("time window could not be determined"));
    }
    let omega_lo = windows.iter().map(|w| w.omega_lo).fold(f64::INFINITY, f64::min);
    let omega_hi = windows.iter().map(|w| w.omega_hi).fold(0.0, f64::max);
    let doublings = if grid.half_width.is_some() { 0 } else { grid.max_doublings };

    let mut captured = 0.0;
    for _ in 0..=doublings {
        let period = 2.0 * half_width;
        let domega = 2.0 * PI / period;
        let active = ((omega_hi - omega_lo) / domega).ceil() as usize + 1;
        let n = (active * grid.oversampling).next_power_of_two();
        if n > MAX_SAMPLES {
            return Err(Error::Unsupported("time grid exceeds the sample budget"));
        }
        let start = center - half_width;
        let dt = period / n as f64;
        let mut rho = vec![0.0; n];
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for w in &windows {
            for (j, slot) in buf.iter_mut().enumerate() {
                *slot = if j < active {
                    let omega = omega_lo + (j as f64 + 0.5) * domega;
                    let k = (2.0 * units.mass * omega / units.hbar).sqrt();
                    let c = w.amp.value(k);
                    c / k.sqrt() * Complex64::from_polar(units.time_factor() * domega, w.sign * k * x - omega * start)
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            fft_in_place(&mut buf)?;
            for (r, a) in rho.iter_mut().zip(&buf) {
                *r += a.norm_sqr();
            }
        }
        let mass: f64 = rho.iter().sum();
        if !(mass > MIN_NORM) {
            return Err(Error::Degenerate("arrival density vanishes"));
        }
        let guard = n / 32;
        let edge: f64 = rho[..guard].iter().chain(&rho[n - guard..]).sum();
        captured = 1.0 - edge / mass;
        if edge <= grid.edge_tolerance * mass {
            let first: f64 = rho.iter().enumerate().map(|(m, r)| (start + m as f64 * dt) * r).sum();
            return Ok(DirectTimeExpectation {
                value: first / mass,
                captured,
                window: (start, start + period),
                step: dt,
                samples: n,
            });
        }
        half_width *= 2.0;
    }
    Err(Error::Coverage { captured })
}
