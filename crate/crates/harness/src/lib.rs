//! Configuration, data loading, sweeps, residues and file output for the
//! `stsdelay` command-line tool. The physics lives in `stsdelay-core`.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod dataset;
pub mod output;
pub mod residues;
pub mod scenario;

use std::path::PathBuf;

pub use config::{load_config, parse_config, ExperimentConfig, Scenario};
pub use dataset::{load_dataset, parse_dataset, DataFile, DataSet};
pub use output::{emit_outputs, render_svg, write_curves_csv, write_residues_csv, OutputPaths};
pub use residues::{residues, ModelResidue, ResidueReport};
pub use scenario::{run_scenario, ScenarioResult};

/// Exit status for input that fails validation.
pub const EXIT_VALIDATION: u8 = 2;
/// Exit status for a numerical failure.
pub const EXIT_NUMERIC: u8 = 3;
/// Exit status for I/O failures.
pub const EXIT_IO: u8 = 1;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{source_name}:{line}: {message}")]
    Config {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("{source_name}: row {row}: {message}")]
    Data {
        source_name: String,
        row: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error(transparent)]
    Core(#[from] stsdelay_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{failed} of {total} model evaluations failed")]
    NumericFailures { failed: usize, total: usize },
}

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Config { .. } | HarnessError::Data { .. } | HarnessError::Validation(_) => EXIT_VALIDATION,
            HarnessError::Core(e) if e.is_numeric() => EXIT_NUMERIC,
            HarnessError::Core(_) => EXIT_VALIDATION,
            HarnessError::NumericFailures { .. } => EXIT_NUMERIC,
            HarnessError::Io { .. } | HarnessError::Csv { .. } => EXIT_IO,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        HarnessError::Csv {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
