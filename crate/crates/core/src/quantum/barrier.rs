#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64;

use super::QuantumUnits;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Rectangular barrier of height `V0` on `0 < x < L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSpec {
    pub height: f64,
    pub length: f64,
    pub units: QuantumUnits,
}

impl BarrierSpec {
    pub fn new(height: f64, length: f64, units: QuantumUnits) -> Result<Self> {
        if !(height.is_finite() && height >= 0.0) {
            return Err(Error::Domain {
                what: "barrier height",
                value: height,
            });
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Domain {
                what: "barrier length",
                value: length,
            });
        }
        Ok(Self { height, length, units })
    }

    /// Barrier in natural units (ħ = m = 1).
    pub fn natural(height: f64, length: f64) -> Result<Self> {
        Self::new(height, length, QuantumUnits::NATURAL)
    }

    /// `k0² = 2mV0/ħ²`, so that `k1² = k² − k0²`.
    pub fn threshold_wavenumber_sq(&self) -> f64 {
        2.0 * self.units.mass * self.height / (self.units.hbar * self.units.hbar)
    }
}

/// Wavenumbers outside (`k`) and inside (`k1`) the barrier. `k1` takes the
/// principal branch with `Im(k1) ≥ 0`: real above the barrier top, positive
/// imaginary (decaying) below it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumbers {
    pub k: f64,
    pub k1: Complex64,
}

impl Wavenumbers {
    /// Builds the pair from `k ≥ 0` and the real `k1²`.
    pub fn from_squares(k: f64, k1_sq: f64) -> Self {
        let k1 = if k1_sq >= 0.0 {
            Complex64::new(k1_sq.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-k1_sq).sqrt())
        };
        Self { k, k1 }
    }
}

pub fn wavenumbers(energy: f64, barrier: &BarrierSpec) -> Result<Wavenumbers> {
    if !(energy.is_finite() && energy > 0.0) {
        return Err(Error::Domain {
            what: "energy",
            value: energy,
        });
    }
    let k = barrier.units.wavenumber(energy);
    let k1_sq = 2.0 * barrier.units.mass * (energy - barrier.height) / (barrier.units.hbar * barrier.units.hbar);
    Ok(Wavenumbers::from_squares(k, k1_sq))
}

/// Below this `|k1|·L` the closed form is a removable 0/0 and the series of
/// the denominator is used instead.
const K1_GUARD: f64 = 1e-6;

/// Amplitude `T` of the transmitted wave `T e^{ikx}` for `x > L`:
/// `T = 4kk1 e^{−iL(k−k1)} / [(k+k1)² − e^{2iLk1}(k−k1)²]`.
pub fn transmission_coefficient(k: f64, k1: Complex64, length: f64) -> Result<Complex64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::Domain {
            what: "wavenumber k",
            value: k,
        });
    }
    if !(k1.re.is_finite() && k1.im.is_finite()) {
        return Err(Error::Domain {
            what: "wavenumber k1",
            value: k1.norm(),
        });
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::Domain {
            what: "barrier length",
            value: length,
        });
    }
    let outer_phase = Complex64::from_polar(1.0, -length * k);
    if k1.norm() * length < K1_GUARD {
        // cos(q) − i(k² + k1²)/(2k)·L·sin(q)/q with q² = k1²L², three terms.
        let w = k1 * k1 * length * length;
        let cos_q = 1.0 - w / 2.0 + w * w / 24.0;
        let sinc_q = 1.0 - w / 6.0 + w * w / 120.0;
        let denom = cos_q - I * (k * k + k1 * k1) * length / (2.0 * k) * sinc_q;
        return Ok(outer_phase / denom);
    }
    let numerator = 4.0 * k * k1 * (I * length * k1).exp() * outer_phase;
    let denom = (k + k1) * (k + k1) - (2.0 * I * length * k1).exp() * (k - k1) * (k - k1);
    Ok(numerator / denom)
}

type Matrix = [[Complex64; 2]; 2];

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

// Columns hold (value, derivative) of e^{iqx} and e^{-iqx} at x.
fn plane_wave_matrix(q: Complex64, x: f64) -> Matrix {
    let fwd = (I * q * x).exp();
    let bwd = (-I * q * x).exp();
    [[fwd, bwd], [I * q * fwd, -I * q * bwd]]
}

fn inverse(m: &Matrix) -> Matrix {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
}

/// Transmitted amplitude obtained by matching value and slope of plane waves
/// at both barrier edges. Kept independent of the closed form on purpose; it
/// is the reference the closed form is tested against.
pub fn transfer_matrix_transmission(energy: f64, barrier: &BarrierSpec) -> Result<Complex64> {
    if energy == barrier.height {
        return Err(Error::Unsupported(
            "transfer matrix is singular at the barrier top; use transmission_coefficient",
        ));
    }
    let w = wavenumbers(energy, barrier)?;
    let k = Complex64::new(w.k, 0.0);
    let length = barrier.length;
    // Left coefficients (A, B) = M · (F, 0) with
    // M = W_k(0)⁻¹ W_k1(0) W_k1(L)⁻¹ W_k(L).
    let m = matmul(
        &matmul(&inverse(&plane_wave_matrix(k, 0.0)), &plane_wave_matrix(w.k1, 0.0)),
        &matmul(&inverse(&plane_wave_matrix(w.k1, length)), &plane_wave_matrix(k, length)),
    );
    Ok(1.0 / m[0][0])
}

/// `D = cos q − i·(k² + k1²)L/(2k)·sin(q)/q` with `q² = k1²L²`, for which
/// `T e^{ikL} = 1/D`. Both `cos q` and `sin(q)/q` are entire in `q²`, so this
/// form is smooth through the barrier top and needs no complex branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Denominator {
    pub value: Complex64,
    /// Derivative with respect to the sweep parameter.
    pub derivative: Complex64,
    pub cos_q: f64,
    pub sinc_q: f64,
    /// Real factor `(k² + k1²)L/(2k)`.
    pub p: f64,
    pub dcos_q: f64,
    pub d_psinc: f64,
}

// cos(√w), sin(√w)/√w and their w-derivatives for real w.
fn cos_sinc(w: f64) -> (f64, f64, f64, f64) {
    if w.abs() < 1e-4 {
        let c = 1.0 - w / 2.0 + w * w / 24.0 - w * w * w / 720.0 + w * w * w * w / 40320.0;
        let s = 1.0 - w / 6.0 + w * w / 120.0 - w * w * w / 5040.0 + w * w * w * w / 362_880.0;
        let ds = -1.0 / 6.0 + w / 60.0 - w * w / 1680.0 + w * w * w / 90720.0;
        return (c, s, -s / 2.0, ds);
    }
    let (c, s) = if w > 0.0 {
        let u = w.sqrt();
        (u.cos(), u.sin() / u)
    } else {
        let u = (-w).sqrt();
        (u.cosh(), u.sinh() / u)
    };
    (c, s, -s / 2.0, (c - s) / (2.0 * w))
}

/// Evaluates [`Denominator`] given `k`, `k1²` and their derivatives with
/// respect to whatever parameter is being swept.
pub(crate) fn barrier_denominator(k: f64, dk: f64, k1_sq: f64, dk1_sq: f64, length: f64) -> Result<Denominator> {
    let w = k1_sq * length * length;
    let dw = dk1_sq * length * length;
    let (c, s, dc_dw, ds_dw) = cos_sinc(w);
    let sum = k * k + k1_sq;
    let p = sum * length / (2.0 * k);
    let dp = length * ((2.0 * k * dk + dk1_sq) / (2.0 * k) - sum * dk / (2.0 * k * k));
    let dcos_q = dc_dw * dw;
    let d_psinc = dp * s + p * ds_dw * dw;
    let value = Complex64::new(c, -p * s);
    let derivative = Complex64::new(dcos_q, -d_psinc);
    if !(value.re.is_finite() && value.im.is_finite() && derivative.re.is_finite() && derivative.im.is_finite()) {
        return Err(Error::Degenerate("barrier too opaque for double precision"));
    }
    Ok(Denominator {
        value,
        derivative,
        cos_q: c,
        sinc_q: s,
        p,
        dcos_q,
        d_psinc,
    })
}
