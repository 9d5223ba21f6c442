#[allow(unused_imports)]
use num_traits::Float;
use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Tolerances and budgets shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of panels a single adaptive integral may hold.
    pub max_subdivisions: usize,
    /// Allowed ratio of the analytic tail bound to the accumulated integral
    /// when a semi-infinite range is truncated.
    pub tail_fraction: f64,
    /// Initial truncation point, in units of the envelope scale.
    pub truncation_multiplier: f64,
    /// Largest accepted imaginary residue of an expectation value.
    pub reality_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_subdivisions: 10_000,
            tail_fraction: 1e-3,
            truncation_multiplier: 200.0,
            reality_tol: 1e-6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.rel_tol) && self.rel_tol < 1.0) {
            return Err(Error::Invalid {
                what: "rel_tol",
                reason: "must lie in (0, 1)",
            });
        }
        if !positive(self.abs_tol)
            || !positive(self.tail_fraction)
            || !positive(self.truncation_multiplier)
            || !positive(self.reality_tol)
        {
            return Err(Error::Invalid {
                what: "quadrature spec",
                reason: "tolerances must be positive and finite",
            });
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Invalid {
                what: "max_subdivisions",
                reason: "must be positive",
            });
        }
        Ok(())
    }
}

/// Diagnostics attached to integral-valued results.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NumericsReport {
    /// Largest absolute error estimate over the integrated components.
    pub error_estimate: f64,
    pub subdivisions: usize,
    /// Upper limit used for a truncated semi-infinite range, if any.
    pub truncation_point: Option<f64>,
    pub warnings: Vec<&'static str>,
}

impl NumericsReport {
    /// Folds the diagnostics of another integral into this one.
    pub fn absorb(&mut self, other: &NumericsReport) {
        self.error_estimate = self.error_estimate.max(other.error_estimate);
        self.subdivisions += other.subdivisions;
        if other.truncation_point.is_some() {
            self.truncation_point = other.truncation_point;
        }
        for w in &other.warnings {
            if !self.warnings.contains(w) {
                self.warnings.push(w);
            }
        }
    }
}

impl fmt::Display for NumericsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "error estimate {:e} after {} subdivisions",
            self.error_estimate, self.subdivisions
        )?;
        if let Some(t) = self.truncation_point {
            write!(f, ", truncated at {t:e}")?;
        }
        for w in &self.warnings {
            write!(f, "; {w}")?;
        }
        Ok(())
    }
}

/// Values the adaptive integrator can accumulate. Error control is applied
/// per component, so integrals with different scales can share one pass.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    const COMPONENTS: usize;
    fn zero() -> Self;
    fn component_abs(&self, i: usize) -> f64;
    /// Same shape with every component replaced by its magnitude.
    fn magnitude(self) -> Self;
}

impl QuadValue for f64 {
    const COMPONENTS: usize = 1;
    fn zero() -> Self {
        0.0
    }
    fn component_abs(&self, _: usize) -> f64 {
        self.abs()
    }
    fn magnitude(self) -> Self {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    const COMPONENTS: usize = 1;
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn component_abs(&self, _: usize) -> f64 {
        self.norm()
    }
    fn magnitude(self) -> Self {
        Complex64::new(self.norm(), 0.0)
    }
}

/// Two integrals evaluated on the same nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair<A, B>(pub A, pub B);

impl<A: QuadValue, B: QuadValue> Add for Pair<A, B> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

impl<A: QuadValue, B: QuadValue> Sub for Pair<A, B> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Pair(self.0 - o.0, self.1 - o.1)
    }
}

impl<A: QuadValue, B: QuadValue> Mul<f64> for Pair<A, B> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Pair(self.0 * s, self.1 * s)
    }
}

impl<A: QuadValue, B: QuadValue> QuadValue for Pair<A, B> {
    const COMPONENTS: usize = A::COMPONENTS + B::COMPONENTS;
    fn zero() -> Self {
        Pair(A::zero(), B::zero())
    }
    fn component_abs(&self, i: usize) -> f64 {
        if i < A::COMPONENTS {
            self.0.component_abs(i)
        } else {
            self.1.component_abs(i - A::COMPONENTS)
        }
    }
    fn magnitude(self) -> Self {
        Pair(self.0.magnitude(), self.1.magnitude())
    }
}

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_COMPONENTS: usize = 4;
type Errors = [f64; MAX_COMPONENTS];

#[derive(Clone, Copy)]
struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: Errors,
    floor: Errors,
}

// QUADPACK's rescaling of the raw Kronrod-Gauss difference, applied per
// component.
fn rescale_error(raw: f64, resabs: f64, resasc: f64) -> (f64, f64) {
    let mut err = raw.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    let mut floor = 0.0;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        floor = 50.0 * f64::EPSILON * resabs;
        err = err.max(floor);
    }
    (err, floor)
}

fn kronrod<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> Panel<V> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut samples = [V::zero(); 15];
    samples[7] = f(center);
    for j in 0..7 {
        let dx = half * XGK[j];
        samples[j] = f(center - dx);
        samples[14 - j] = f(center + dx);
    }
    let weight = |i: usize| WGK[if i <= 7 { i } else { 14 - i }];
    let mut kron = V::zero();
    let mut resabs = V::zero();
    for (i, s) in samples.iter().enumerate() {
        kron = kron + *s * weight(i);
        resabs = resabs + s.magnitude() * weight(i);
    }
    let mut gauss = samples[7] * WG[3];
    for j in (1..7).step_by(2) {
        gauss = gauss + (samples[j] + samples[14 - j]) * WG[j / 2];
    }
    let mean = kron * 0.5;
    let mut resasc = V::zero();
    for (i, s) in samples.iter().enumerate() {
        resasc = resasc + (*s - mean).magnitude() * weight(i);
    }
    let diff = (kron - gauss) * half;
    let mut error = [0.0; MAX_COMPONENTS];
    let mut floor = [0.0; MAX_COMPONENTS];
    for i in 0..V::COMPONENTS {
        (error[i], floor[i]) = rescale_error(
            diff.component_abs(i),
            resabs.component_abs(i) * half.abs(),
            resasc.component_abs(i) * half.abs(),
        );
    }
    Panel {
        a,
        b,
        value: kron * half,
        error,
        floor,
    }
}

struct Queued {
    badness: f64,
    index: usize,
}

impl PartialEq for Queued {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Queued {
    fn cmp(&self, o: &Self) -> Ordering {
        self.badness
            .total_cmp(&o.badness)
            .then_with(|| o.index.cmp(&self.index))
    }
}

fn tolerances<V: QuadValue>(total: &V, spec: &QuadratureSpec, out: &mut [f64]) {
    for (i, t) in out.iter_mut().enumerate() {
        *t = spec.abs_tol.max(spec.rel_tol * total.component_abs(i));
    }
}

fn badness(err: &Errors, tol: &[f64]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, t) in tol.iter().enumerate() {
        worst = worst.max(err[i] / t);
    }
    worst
}

// True when every component that misses its tolerance is already at the
// round-off floor, so further bisection cannot help.
fn roundoff_limited(err: &Errors, floor: &Errors, tol: &[f64]) -> bool {
    tol.iter()
        .enumerate()
        .all(|(i, t)| err[i] <= *t || err[i] <= 2.0 * floor[i])
}

const ROUNDOFF_WARNING: &str = "accuracy limited by round-off";

fn add_errors(a: &mut Errors, b: &Errors, sign: f64) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += sign * y;
    }
}

/// Adaptive Gauss-Kronrod (7/15) integration of `f` over `[a, b]`.
pub fn integrate_adaptive<V, F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<(V, NumericsReport)>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    integrate_breaks(f, &[a, b], spec)
}

/// Adaptive integration over `[a, b]` starting from `panels` equal panels.
/// Used for oscillatory integrands, where the initial panel count is tied to
/// the phase advance of the integrand.
pub fn integrate_panels<V, F>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    spec: &QuadratureSpec,
) -> Result<(V, NumericsReport)>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    let n = panels.max(1);
    let breaks: Vec<f64> = (0..=n)
        .map(|i| if i == n { b } else { a + (b - a) * (i as f64) / (n as f64) })
        .collect();
    integrate_breaks(f, &breaks, spec)
}

/// Adaptive integration over consecutive intervals of the sorted breakpoint
/// list. Panels are refined largest-error first until every component meets
/// `max(abs_tol, rel_tol * |I|)`. The subdivision order depends only on the
/// integrand, so repeated evaluations are bit-identical.
pub fn integrate_breaks<V, F>(mut f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<(V, NumericsReport)>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    assert!(V::COMPONENTS <= MAX_COMPONENTS, "too many integrand components");
    if breaks.len() < 2 {
        return Err(Error::Invalid {
            what: "integration range",
            reason: "needs at least two breakpoints",
        });
    }
    if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Invalid {
            what: "integration range",
            reason: "breakpoints must be finite and non-decreasing",
        });
    }

    let mut panels: Vec<Panel<V>> = Vec::with_capacity(breaks.len() * 4);
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            panels.push(kronrod(&mut f, w[0], w[1]));
        }
    }
    let mut report = NumericsReport::default();
    if panels.is_empty() {
        return Ok((V::zero(), report));
    }

    let mut total = V::zero();
    let mut err_total: Errors = [0.0; MAX_COMPONENTS];
    let mut floor_total: Errors = [0.0; MAX_COMPONENTS];
    for p in &panels {
        total = total + p.value;
        add_errors(&mut err_total, &p.error, 1.0);
        add_errors(&mut floor_total, &p.floor, 1.0);
    }
    let mut tol = alloc::vec![0.0; V::COMPONENTS];
    tolerances(&total, spec, &mut tol);

    let mut heap = BinaryHeap::with_capacity(panels.len());
    for (index, p) in panels.iter().enumerate() {
        heap.push(Queued {
            badness: badness(&p.error, &tol),
            index,
        });
    }

    let mut converged = false;
    while let Some(top) = heap.pop() {
        tolerances(&total, spec, &mut tol);
        if badness(&err_total, &tol) <= 1.0 {
            converged = true;
            break;
        }
        if roundoff_limited(&err_total, &floor_total, &tol) {
            report.warnings.push(ROUNDOFF_WARNING);
            converged = true;
            break;
        }
        if panels.len() >= spec.max_subdivisions {
            break;
        }
        let p = panels[top.index];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) || (p.b - p.a) <= 1e3 * f64::EPSILON * p.a.abs().max(p.b.abs()) {
            if !report.warnings.contains(&"panel width reached round-off") {
                report.warnings.push("panel width reached round-off");
            }
            continue;
        }
        let left = kronrod(&mut f, p.a, mid);
        let right = kronrod(&mut f, mid, p.b);
        total = total - p.value + left.value + right.value;
        add_errors(&mut err_total, &p.error, -1.0);
        add_errors(&mut err_total, &left.error, 1.0);
        add_errors(&mut err_total, &right.error, 1.0);
        add_errors(&mut floor_total, &p.floor, -1.0);
        add_errors(&mut floor_total, &left.floor, 1.0);
        add_errors(&mut floor_total, &right.floor, 1.0);
        panels[top.index] = left;
        panels.push(right);
        heap.push(Queued {
            badness: badness(&left.error, &tol),
            index: top.index,
        });
        heap.push(Queued {
            badness: badness(&right.error, &tol),
            index: panels.len() - 1,
        });
    }

    // Re-sum in left-to-right order so the result does not depend on the
    // incremental update history.
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = V::zero();
    let mut error: Errors = [0.0; MAX_COMPONENTS];
    let mut floor: Errors = [0.0; MAX_COMPONENTS];
    for p in &panels {
        value = value + p.value;
        add_errors(&mut error, &p.error, 1.0);
        add_errors(&mut floor, &p.floor, 1.0);
    }
    report.subdivisions = panels.len();
    report.error_estimate = error.iter().copied().fold(0.0, f64::max);

    if (0..V::COMPONENTS).any(|i| !value.component_abs(i).is_finite()) {
        return Err(Error::Quadrature {
            reason: "non-finite integrand",
            report,
        });
    }
    if !converged {
        tolerances(&value, spec, &mut tol);
        if roundoff_limited(&error, &floor, &tol) {
            if !report.warnings.contains(&ROUNDOFF_WARNING) {
                report.warnings.push(ROUNDOFF_WARNING);
            }
        } else if badness(&error, &tol) > 1.0 {
            let reason = if panels.len() >= spec.max_subdivisions {
                "subdivision budget exhausted"
            } else {
                "tolerance unreachable at round-off"
            };
            return Err(Error::Quadrature { reason, report });
        }
    }
    Ok((value, report))
}
