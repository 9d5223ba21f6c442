#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilOrder {
    Second,
    Fourth,
    Sixth,
}

impl StencilOrder {
    fn power(self) -> i32 {
        match self {
            StencilOrder::Second => 2,
            StencilOrder::Fourth => 4,
            StencilOrder::Sixth => 6,
        }
    }
}

/// Central finite difference of `f` at `x` with one Richardson refinement.
///
/// The step is `h0 * max(|x|, 1)`, so `h0` is a relative step for large
/// arguments (frequencies in Hz) and an absolute one near the origin.
pub fn differentiate_central<F>(mut f: F, x: f64, order: StencilOrder, h0: f64) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    if !(h0.is_finite() && h0 > 0.0) {
        return Err(Error::Invalid {
            what: "finite-difference step",
            reason: "must be positive",
        });
    }
    let h = h0 * x.abs().max(1.0);
    let coarse = stencil(&mut f, x, h, order)?;
    let fine = stencil(&mut f, x, 0.5 * h, order)?;
    let gain = 2.0_f64.powi(order.power());
    Ok((fine * gain - coarse) / (gain - 1.0))
}

fn stencil<F>(f: &mut F, x: f64, h: f64, order: StencilOrder) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    let mut sample = |dx: f64| -> Result<Complex64> {
        let v = f(x + dx);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(x + dx))
        }
    };
    let d = match order {
        StencilOrder::Second => (sample(h)? - sample(-h)?) / (2.0 * h),
        StencilOrder::Fourth => {
            (-sample(2.0 * h)? + sample(h)? * 8.0 - sample(-h)? * 8.0 + sample(-2.0 * h)?) / (12.0 * h)
        }
        StencilOrder::Sixth => {
            (sample(3.0 * h)? - sample(2.0 * h)? * 9.0 + sample(h)? * 45.0 - sample(-h)? * 45.0
                + sample(-2.0 * h)? * 9.0
                - sample(-3.0 * h)?)
                / (60.0 * h)
        }
    };
    Ok(d)
}
