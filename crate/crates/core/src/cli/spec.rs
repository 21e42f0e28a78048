//! Device-spec JSON.
//!
//! ```json
//! {
//!   "name": "example",
//!   "n_max": 100,
//!   "topology": "grid",
//!   "eps_1": 1e-4,
//!   "eps_2": 1e-3
//! }
//! ```
//!
//! `topology` is a kind name (`"complete"`, `"grid"`, `"linear"`), the
//! object `{"kind": ...}`, or `{"edges": [[i, j], ...]}`. The optional
//! fields are `eps` (connected-pair error, overriding the SU(4)
//! composition of `eps_1`/`eps_2`), `eps_th` (0.01), `ancilla_factor` (1.5)
//! and `distillation`, which holds the distillation model parameters.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::architect::{FtOptions, DEFAULT_ANCILLA_FACTOR};
use crate::distillation::DistillationModel;
use crate::error::{check_closed_open, check_open, invalid, Result};
use crate::surface_code::DEFAULT_THRESHOLD;
use crate::synthesis::{su4_error, PhysicalErrorBudget, SynthesisModel};
use crate::topology::{TopologyGraph, TopologyKind, TopologyProfile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TopologyRepr")]
#[serde(untagged)]
pub enum TopologySpec {
    Kind { kind: TopologyKind },
    Edges { edges: Vec<[usize; 2]> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TopologyRepr {
    Name(TopologyKind),
    Kind { kind: TopologyKind },
    Edges { edges: Vec<[usize; 2]> },
}

impl TryFrom<TopologyRepr> for TopologySpec {
    type Error = String;

    fn try_from(r: TopologyRepr) -> std::result::Result<Self, String> {
        match r {
            TopologyRepr::Name(TopologyKind::Custom) | TopologyRepr::Kind { kind: TopologyKind::Custom } => {
                Err("custom topologies are given as {\"edges\": [[i, j], ...]}".into())
            }
            TopologyRepr::Name(kind) | TopologyRepr::Kind { kind } => Ok(TopologySpec::Kind { kind }),
            TopologyRepr::Edges { edges } => Ok(TopologySpec::Edges { edges }),
        }
    }
}

fn default_name() -> String {
    "device".into()
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

fn default_ancilla() -> f64 {
    DEFAULT_ANCILLA_FACTOR
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceSpec {
    #[serde(default = "default_name")]
    pub name: String,
    pub n_max: u64,
    pub topology: TopologySpec,
    pub eps_1: f64,
    pub eps_2: f64,
    /// Connected-pair error; derived from `eps_1`/`eps_2` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default = "default_threshold")]
    pub eps_th: f64,
    #[serde(default)]
    pub distillation: DistillationModel,
    #[serde(default = "default_ancilla")]
    pub ancilla_factor: f64,
}

impl DeviceSpec {
    /// Checks every invariant and syncs the distillation threshold.
    pub fn resolve(mut self) -> Result<Self> {
        if self.n_max < 1 {
            return Err(invalid("n_max", "at least one qubit is required"));
        }
        check_closed_open("eps_1", self.eps_1, 0.0, 1.0)?;
        check_closed_open("eps_2", self.eps_2, 0.0, 1.0)?;
        if let Some(eps) = self.eps {
            check_open("eps", eps, 0.0, 1.0)?;
        }
        check_open("eps_th", self.eps_th, 0.0, 1.0)?;
        if !(self.ancilla_factor.is_finite() && self.ancilla_factor >= 1.0) {
            return Err(invalid("ancilla_factor", format!("{} must be >= 1", self.ancilla_factor)));
        }
        if self.distillation.eps_th != DEFAULT_THRESHOLD && self.distillation.eps_th != self.eps_th {
            return Err(invalid(
                "distillation.eps_th",
                format!("{} conflicts with eps_th = {}", self.distillation.eps_th, self.eps_th),
            ));
        }
        self.distillation.eps_th = self.eps_th;
        self.distillation.validate()?;
        if let Some(g) = self.graph()? {
            g.ensure_connected()?;
        }
        Ok(self)
    }

    /// The custom coupling graph, if the spec lists edges.
    pub fn graph(&self) -> Result<Option<TopologyGraph>> {
        match &self.topology {
            TopologySpec::Kind { .. } => Ok(None),
            TopologySpec::Edges { edges } => {
                let n = usize::try_from(self.n_max)
                    .map_err(|_| invalid("n_max", "too large for an explicit edge list"))?;
                TopologyGraph::custom(n, edges.iter().map(|&[a, b]| (a, b))).map(Some)
            }
        }
    }

    pub fn topology_label(&self) -> &'static str {
        match &self.topology {
            TopologySpec::Kind { kind } => kind.as_str(),
            TopologySpec::Edges { .. } => TopologyKind::Custom.as_str(),
        }
    }

    /// Connectivity exponent `m`: nominal for named kinds, single-point
    /// estimate for edge lists.
    pub fn connectivity_exponent(&self) -> Result<f64> {
        match &self.topology {
            TopologySpec::Kind { kind } => Ok(kind.nominal_exponent().unwrap_or(0.0)),
            TopologySpec::Edges { .. } => {
                let g = self.graph()?.expect("edge list present");
                Ok(TopologyProfile::from_graph(g)?.m_fit)
            }
        }
    }

    /// Connected-pair SU(4) error.
    pub fn connected_pair_error(&self) -> Result<f64> {
        match self.eps {
            Some(eps) => Ok(eps),
            None => su4_error(&PhysicalErrorBudget::new(self.eps_1, self.eps_2)?),
        }
    }

    pub fn distillation_model(&self) -> DistillationModel {
        self.distillation.clone().with_threshold(self.eps_th)
    }

    pub fn ft_options(&self) -> FtOptions {
        FtOptions {
            ancilla_factor: self.ancilla_factor,
            synthesis: SynthesisModel::default(),
        }
    }
}

/// Parses and validates a device spec held in memory.
pub fn parse_device_spec_str(text: &str) -> std::result::Result<DeviceSpec, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: DeviceSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path.is_empty() || path == "." || path == "?" {
            CliError::Parse(inner.to_string())
        } else {
            CliError::Parse(format!("field `{path}`: {inner}"))
        }
    })?;
    spec.resolve().map_err(CliError::from)
}

/// Reads, parses and validates a device spec file.
pub fn parse_device_spec(path: &Path) -> std::result::Result<DeviceSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_device_spec_str(&text).map_err(|e| e.context(&path.display().to_string()))
}
