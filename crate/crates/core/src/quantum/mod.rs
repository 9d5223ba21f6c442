//! Time-operator expectation values for a particle in one dimension with a
//! rectangular barrier occupying `0 < x < L`.
//!
//! Units are explicit: [`QuantumUnits`] carries ħ and m (both 1 by default),
//! wavenumbers follow `k = √(2mE)/ħ` and the free dispersion is
//! `E_k = ħ²k²/2m`.


#[allow(unused_imports)]
use num_traits::Float;
mod barrier;
mod spectrum;
mod time;

pub use barrier::{
    transfer_matrix_transmission, transmission_coefficient, wavenumbers, BarrierSpec, Wavenumbers,
};
pub(crate) use barrier::{barrier_denominator, Denominator};
pub use spectrum::{Amplitude, ClosedForm, MomentumSpectrum, PhasePolynomial, Profile, SampledAmplitude};
pub use time::{
    delay_time, expected_time_after_barrier, expected_time_closed, expected_time_direct,
    post_barrier_spectrum, rho_t_given_x, DelayTime, DirectTimeExpectation, TimeExpectation, TimeGrid,
};

/// Reduced Planck constant and particle mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumUnits {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for QuantumUnits {
    fn default() -> Self {
        Self::NATURAL
    }
}

impl QuantumUnits {
    pub const NATURAL: QuantumUnits = QuantumUnits { hbar: 1.0, mass: 1.0 };

    pub fn new(hbar: f64, mass: f64) -> crate::Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0 && mass.is_finite() && mass > 0.0) {
            return Err(crate::Error::Invalid {
                what: "units",
                reason: "hbar and mass must be positive",
            });
        }
        Ok(Self { hbar, mass })
    }

    pub fn energy(&self, k: f64) -> f64 {
        self.hbar * self.hbar * k * k / (2.0 * self.mass)
    }

    /// Angular frequency `E_k/ħ`.
    pub fn omega(&self, k: f64) -> f64 {
        self.hbar * k * k / (2.0 * self.mass)
    }

    pub fn wavenumber(&self, energy: f64) -> f64 {
        (2.0 * self.mass * energy).sqrt() / self.hbar
    }

    /// `m/ħ`, the factor converting phase slopes `d(arg)/dk` into times.
    pub fn time_factor(&self) -> f64 {
        self.mass / self.hbar
    }
}
