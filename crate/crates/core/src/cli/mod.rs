//! Library side of the `qv-estimate` command: device specs, reports,
//! sweeps and exit codes.

mod report;
mod spec;
mod sweep;

pub use report::{
    estimate, fit_topology, fit_topology_graph, optimize, validate, EstimateEntry, EstimateReport,
    FitReport, OptimizeEntry, OptimizeReport, ValidateReport, ValidationCheck,
};
pub use spec::{parse_device_spec, parse_device_spec_str, DeviceSpec, TopologySpec};
pub use sweep::{sweep, write_csv, Scale, Series, SweepReport, SweepRequest, SweepRow, SweepVariable};

use serde::{Deserialize, Serialize};

use crate::distillation::{DistillationModel, DistillationScheme};
use crate::error::Error;
use crate::synthesis::SynthesisModel;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for inputs outside a model's domain.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit status for unreadable or malformed input.
pub const EXIT_PARSE: i32 = 3;
/// Exit status for numerically unattainable results.
pub const EXIT_NUMERIC: i32 = 4;

/// Which error model feeds the metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Native gates with the connectivity penalty.
    Physical,
    /// Surface code with no gate-synthesis cost.
    NaiveQec,
    /// Surface code, magic-state distillation and T synthesis.
    FullFt,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Physical => "physical",
            Mode::NaiveQec => "naive-qec",
            Mode::FullFt => "full-ft",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Parse(_) | CliError::Io(_) => EXIT_PARSE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    /// Prefixes the message with `what`.
    pub fn context(self, what: &str) -> Self {
        match self {
            CliError::Validation(m) => CliError::Validation(format!("{what}: {m}")),
            CliError::Parse(m) => CliError::Parse(format!("{what}: {m}")),
            CliError::Numeric(m) => CliError::Numeric(format!("{what}: {m}")),
            CliError::Io(m) => CliError::Io(format!("{what}: {m}")),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::DisconnectedGraph { .. } => {
                CliError::Validation(e.to_string())
            }
            Error::DegenerateFit(_) | Error::UnachievableTarget { .. } | Error::NumericDomain(_) => {
                CliError::Numeric(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Identifies the crate and every model constant behind a report.
pub fn model_version(distillation: &DistillationModel) -> String {
    let s = SynthesisModel::default();
    format!(
        "qv-estimator {}; synthesis rotations={} t-per-bit={}; {}",
        env!("CARGO_PKG_VERSION"),
        s.rotations_per_qubit_step,
        s.t_gates_per_bit,
        distillation.version()
    )
}

/// Rejects NaN and infinite values before they reach a report.
pub(crate) fn finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Numeric(format!("{name} evaluated to {x}")))
    }
}
