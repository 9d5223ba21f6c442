//! Shared numerical kernels with explicit tolerances and diagnostics.

mod differentiate;
mod fft;
mod interp;
mod quadrature;
mod truncation;

pub use differentiate::{differentiate_central, StencilOrder};
pub use fft::fft_in_place;
pub use interp::MonotoneCubic;
pub use quadrature::{
    integrate_adaptive, integrate_breaks, integrate_panels, NumericsReport, Pair, QuadValue,
    QuadratureSpec,
};
pub use truncation::{truncate_semi_infinite, TailEnvelope};

use alloc::vec::Vec;

/// Removes jumps larger than π between consecutive phase samples.
pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    use core::f64::consts::{PI, TAU};
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &p in wrapped {
        if let Some(q) = prev {
            let mut jump = p - q;
            while jump > PI {
                offset -= TAU;
                jump -= TAU;
            }
            while jump < -PI {
                offset += TAU;
                jump += TAU;
            }
        }
        prev = Some(p);
        out.push(p + offset);
    }
    out
}
