use crate::numerics::NumericsReport;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what} = {value} is outside the domain of the operation")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid {what}: {reason}")]
    Invalid {
        what: &'static str,
        reason: &'static str,
    },

    #[error("quadrature failed ({reason}); {report}")]
    Quadrature {
        reason: &'static str,
        report: NumericsReport,
    },

    #[error("expectation value is not real: residue {residue:e} exceeds {tolerance:e}")]
    NotReal { residue: f64, tolerance: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("time window captured only {captured} of the density; widen the grid")]
    Coverage { captured: f64 },

    #[error("semi-infinite truncation bound not met before {limit:e}")]
    Truncation { limit: f64 },

    #[error("phase branch discontinuity near {nu} Hz")]
    PhaseBranch { nu: f64 },

    #[error("non-finite sample at {0}")]
    NonFinite(f64),

    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. }
                | Error::NotReal { .. }
                | Error::Coverage { .. }
                | Error::Truncation { .. }
                | Error::PhaseBranch { .. }
                | Error::NonFinite(_)
        )
    }
}
