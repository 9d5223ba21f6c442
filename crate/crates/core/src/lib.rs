//! Traversal-time expectation values for a quantum particle crossing a
//! rectangular barrier, and the same machinery mapped onto a narrowed
//! rectangular waveguide driven by a Lorentzian microwave source.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; IO, configuration files and plotting live in the
//! `stsdelay` harness crate.
//!
//! Layout:
//! - [`numerics`]: adaptive Gauss-Kronrod quadrature, semi-infinite
//!   truncation, central differences, a radix-2 FFT and monotone cubic
//!   interpolation.
//! - [`quantum`]: wavenumbers, the barrier transmission coefficient, momentum
//!   spectra and the time-operator expectation values built on them.
//! - [`waveguide`]: cutoff frequencies, the Lorentzian source and the optical
//!   delay obtained from the quantum expression.
//! - [`baselines`]: phase-time and Büttiker-Landauer comparison delays.
//! - [`curve`]: sweeps and delay curves shared by the models.

#![no_std]
// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod baselines;
pub mod curve;
mod error;
pub mod numerics;
pub mod quantum;
pub mod waveguide;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Vacuum speed of light used by the waveguide mapping, in m/s.
pub const SPEED_OF_LIGHT: f64 = 2.998e8;
