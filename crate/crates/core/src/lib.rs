//! Quantum volumetric class (QV-k) estimation.
//!
//! QV-k is the largest width `n` at which a circuit of depth `n^k` still
//! succeeds. This crate estimates it from device parameters: gate errors,
//! qubit count and connectivity. It also covers error-corrected machines,
//! where surface-code overhead, magic-state distillation and T-gate
//! synthesis all compete for the same physical qubits.
//!
//! ```
//! use qv_estimator::metrics::{qv_closed_form, MetricQuery};
//!
//! // 1000 fully connected qubits at 0.1% effective error
//! let est = qv_closed_form(&MetricQuery::new(1, 1000, 1e-3), 0.0).unwrap();
//! assert!((est.value - 1e-3f64.powf(-0.5)).abs() < 1e-9);
//! ```
//!
//! | module | contents |
//! |---|---|
//! | [`metrics`] | closed-form and brute-force QV-k |
//! | [`topology`] | coupling graphs, swap counts, connectivity exponent |
//! | [`synthesis`] | SU(4) error composition, T-count and rotation precision |
//! | [`surface_code`] | logical error, patch overhead, naive QEC optimizer |
//! | [`distillation`] | 15-to-1 magic-state factories |
//! | [`architect`] | joint code-distance / factory-size optimizer |
//! | [`validator`] | Monte Carlo check of the depth model |
//! | [`cli`] | device specs, reports and sweeps behind `qv-estimate` |

pub mod architect;
pub mod cli;
pub mod distillation;
pub mod error;
pub mod metrics;
pub mod surface_code;
pub mod synthesis;
pub mod topology;
pub mod validator;

pub use error::{Error, Result};
