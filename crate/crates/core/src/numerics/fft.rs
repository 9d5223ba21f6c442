use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::{Error, Result};

/// In-place radix-2 forward transform, `X_m = Σ_j x_j e^{-2πi jm/N}`.
///
/// Only the forward direction is needed by the time-domain oracle; the length
/// must be a power of two.
pub fn fft_in_place(data: &mut [Complex64]) -> Result<()> {
    let n = data.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Invalid {
            what: "fft length",
            reason: "must be a non-zero power of two",
        });
    }
    let bits = n.trailing_zeros();
    if bits == 0 {
        return Ok(());
    }
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let angle = -TAU / len as f64;
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                // Twiddles are computed directly to avoid recurrence drift.
                let w = Complex64::from_polar(1.0, angle * k as f64);
                let u = data[start + k];
                let v = data[start + k + half] * w;
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn matches_direct_dft() {
        let n = 64;
        let input: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new((0.3 * j as f64).sin(), (0.17 * (j * j) as f64).cos()))
            .collect();
        let mut fast = input.clone();
        fft_in_place(&mut fast).unwrap();
        for (m, value) in fast.iter().enumerate() {
            let direct: Complex64 = input
                .iter()
                .enumerate()
                .map(|(j, x)| x * Complex64::from_polar(1.0, -TAU * (j * m) as f64 / n as f64))
                .sum();
            assert!((direct - value).norm() < 1e-11);
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        let mut v = alloc::vec![Complex64::new(0.0, 0.0); 12];
        assert!(fft_in_place(&mut v).is_err());
    }
}
