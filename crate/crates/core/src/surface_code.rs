//! Surface-code overhead and logical error scaling, and the naive QEC
//! optimizer that trades logical qubits for a lower logical error.

use serde::{Deserialize, Serialize};

use crate::error::{check_open, check_open_closed, invalid, Result};
use crate::metrics::{qv_closed_form, MetricEstimate, MetricQuery};

pub const DEFAULT_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCodeConfig {
    pub d_c: u32,
    pub eps_th: f64,
}

impl SurfaceCodeConfig {
    pub fn new(d_c: u32) -> Self {
        Self {
            d_c,
            eps_th: DEFAULT_THRESHOLD,
        }
    }

    pub fn with_threshold(mut self, eps_th: f64) -> Self {
        self.eps_th = eps_th;
        self
    }

    /// Errors the code always corrects, `floor((d_c - 1) / 2)`.
    pub fn correctable_errors(&self) -> u32 {
        self.d_c.saturating_sub(1) / 2
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_c < 1 {
            return Err(invalid("d_c", "code distance must be at least 1"));
        }
        check_open("eps_th", self.eps_th, 0.0, 1.0)
    }
}

/// Physical qubits per logical qubit, `(2 d_c - 1)^2`.
pub fn qubits_per_logical(d_c: u32) -> Result<u64> {
    if d_c < 1 {
        return Err(invalid("d_c", "code distance must be at least 1"));
    }
    let side = 2 * u64::from(d_c) - 1;
    Ok(side * side)
}

/// Logical error `eps_th * (eps / eps_th)^((d_c + 1) / 2)`.
///
/// Exactly `eps` at `d_c = 1`. Above threshold the result can exceed 1;
/// callers that feed it into a metric cap it.
///
/// ```
/// use qv_estimator::surface_code::{logical_error, SurfaceCodeConfig};
/// let e = logical_error(1e-3, &SurfaceCodeConfig::new(3)).unwrap();
/// assert!((e - 1e-4).abs() < 1e-16);
/// ```
pub fn logical_error(eps: f64, cfg: &SurfaceCodeConfig) -> Result<f64> {
    cfg.validate()?;
    check_open_closed("eps", eps, 0.0, 1.0)?;
    if cfg.d_c == 1 {
        return Ok(eps);
    }
    let exponent = (f64::from(cfg.d_c) + 1.0) / 2.0;
    Ok(cfg.eps_th * (eps / cfg.eps_th).powf(exponent))
}

/// Largest distance whose patch fits on `n_max` qubits, `floor((sqrt(n_max) + 1) / 2)`.
pub fn max_code_distance(n_max: u64) -> u32 {
    let d = n_max.isqrt().div_ceil(2);
    u32::try_from(d.max(1)).unwrap_or(u32::MAX)
}

/// Caps an error rate to the metric's domain `(0, 1]`.
pub(crate) fn metric_rate(eps: f64) -> f64 {
    eps.clamp(f64::MIN_POSITIVE, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaiveQecResult {
    pub best_d_c: u32,
    pub n_l: u64,
    #[serde(rename = "eps_L")]
    pub eps_l: f64,
    pub metric: MetricEstimate,
}

/// Evaluates one code distance of the naive model.
pub fn evaluate_naive_qec(k: u32, n_max: u64, eps: f64, cfg: &SurfaceCodeConfig) -> Result<NaiveQecResult> {
    let n_l = n_max / qubits_per_logical(cfg.d_c)?;
    let eps_l = logical_error(eps, cfg)?;
    let rate = metric_rate(eps_l);
    let metric = if n_l == 0 {
        let n_opt = qv_closed_form(&MetricQuery::new(k, 1, rate), 0.0)?.n_opt;
        MetricEstimate::empty(n_opt)
    } else {
        qv_closed_form(&MetricQuery::new(k, n_l, rate), 0.0)?
    };
    Ok(NaiveQecResult {
        best_d_c: cfg.d_c,
        n_l,
        eps_l,
        metric,
    })
}

/// Exhaustive search over code distance ignoring fault-tolerant gate cost.
///
/// Every `d_c` in `1..=max_code_distance(n_max)` is tried; ties go to the
/// smaller distance.
pub fn optimize_naive_qec(k: u32, n_max: u64, eps: f64, eps_th: f64) -> Result<NaiveQecResult> {
    if k < 1 {
        return Err(invalid("k", "volumetric class must be at least 1"));
    }
    if n_max < 1 {
        return Err(invalid("n_max", "at least one qubit is required"));
    }
    check_open_closed("eps", eps, 0.0, 1.0)?;
    check_open("eps_th", eps_th, 0.0, 1.0)?;

    let mut best: Option<NaiveQecResult> = None;
    for d_c in 1..=max_code_distance(n_max) {
        let cfg = SurfaceCodeConfig::new(d_c).with_threshold(eps_th);
        let candidate = evaluate_naive_qec(k, n_max, eps, &cfg)?;
        if best.is_none_or(|b| candidate.metric.value > b.metric.value) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("d_c = 1 is always evaluated"))
}
