//! The QV-k metric family.
//!
//! A QV-k value is the largest width `n` for which a circuit of depth `n^k`
//! still runs with high probability. Depth is modelled from the effective
//! per-qubit per-step error rate: a layer of `n` qubits fails with
//! probability about `n * eps_eff`, so the depth reachable before the
//! survival probability drops below `success_threshold` is
//! `ln(1/success_threshold) / (n * eps_eff)`.
//!
//! Two evaluators are provided. [`qv_closed_form`] uses the analytic
//! crossing point of `n` and `d(n)^(1/k)`. [`qv_brute_force`] scans integer
//! widths literally and is kept as the oracle for the closed form.

use serde::{Deserialize, Serialize};

use crate::error::{check_open, check_open_closed, invalid, Result};

/// Survival probability `e^-1`, which makes the depth model exactly `1/(n eps)`.
pub const DEFAULT_SUCCESS_THRESHOLD: f64 = 1.0 / std::f64::consts::E;

/// Largest `n_max` accepted by [`qv_brute_force`].
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricQuery {
    /// Volumetric class: target depth scales as `n^k`.
    pub k: u32,
    /// Available qubits.
    pub n_max: u64,
    /// Effective error per qubit per step.
    pub eps_eff: f64,
    /// Survival probability that defines a "successful" depth.
    pub success_threshold: f64,
}

impl MetricQuery {
    pub fn new(k: u32, n_max: u64, eps_eff: f64) -> Self {
        Self {
            k,
            n_max,
            eps_eff,
            success_threshold: DEFAULT_SUCCESS_THRESHOLD,
        }
    }

    pub fn with_success_threshold(mut self, threshold: f64) -> Self {
        self.success_threshold = threshold;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(invalid("k", "volumetric class must be at least 1"));
        }
        if self.n_max < 1 {
            return Err(invalid("n_max", "at least one qubit is required"));
        }
        check_open_closed("eps_eff", self.eps_eff, 0.0, 1.0)?;
        check_open("success_threshold", self.success_threshold, 0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// More qubits would raise the metric.
    QubitLimited,
    /// Lower error would raise the metric; more qubits would not.
    ErrorLimited,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::QubitLimited => "qubit-limited",
            Regime::ErrorLimited => "error-limited",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricEstimate {
    /// The QV-k value.
    pub value: f64,
    pub regime: Regime,
    /// Width at which `n` and `d(n)^(1/k)` cross.
    pub n_opt: f64,
    /// Achievable depth at the returned width.
    pub depth_at_value: f64,
}

impl MetricEstimate {
    /// Estimate for a machine with no usable qubits.
    pub fn empty(n_opt: f64) -> Self {
        Self {
            value: 0.0,
            regime: Regime::QubitLimited,
            n_opt,
            depth_at_value: 0.0,
        }
    }
}

/// `ln(1/threshold)`, exactly 1 at the default threshold.
fn survival_log(threshold: f64) -> f64 {
    if threshold == DEFAULT_SUCCESS_THRESHOLD {
        1.0
    } else {
        -threshold.ln()
    }
}

/// Depth reachable on `n` qubits before survival drops below `success_threshold`.
///
/// ```
/// use qv_estimator::metrics::{achievable_depth, DEFAULT_SUCCESS_THRESHOLD};
/// let d = achievable_depth(20, 1e-3, DEFAULT_SUCCESS_THRESHOLD).unwrap();
/// assert!((d - 50.0).abs() < 1e-9);
/// ```
pub fn achievable_depth(n: u64, eps_eff: f64, success_threshold: f64) -> Result<f64> {
    if n < 1 {
        return Err(invalid("n", "at least one qubit is required"));
    }
    check_open_closed("eps_eff", eps_eff, 0.0, 1.0)?;
    check_open("success_threshold", success_threshold, 0.0, 1.0)?;
    Ok(depth_unchecked(n as f64, eps_eff, survival_log(success_threshold)))
}

fn depth_unchecked(n: f64, eps_eff: f64, survival_log: f64) -> f64 {
    survival_log / (n * eps_eff)
}

/// Connected-pair error inflated by routing, `n^m * eps`, capped at 1.
fn routed_error(n: f64, eps: f64, m: f64) -> f64 {
    (n.powf(m) * eps).min(1.0)
}

fn check_connectivity(m: f64) -> Result<()> {
    if m.is_finite() && (0.0..=1.0).contains(&m) {
        Ok(())
    } else {
        Err(invalid("m", format!("connectivity exponent {m} is outside [0, 1]")))
    }
}

/// Crossing width `(L/eps)^(1/(k+m+1))`, where `L = ln(1/threshold)`.
///
/// With `m = 0` this is the familiar `eps_eff^(-1/(k+1))`.
pub fn crossover_width(q: &MetricQuery, m: f64) -> Result<f64> {
    q.validate()?;
    check_connectivity(m)?;
    let l = survival_log(q.success_threshold);
    Ok((l / q.eps_eff).powf(1.0 / (f64::from(q.k) + m + 1.0)))
}

/// Analytic QV-k: `min(n_max, n_opt)`.
///
/// `q.eps_eff` is the connected-pair error `eps`. The routing penalty
/// `n^m` is applied on top of it. Pass `m = 0` when `eps_eff` already
/// includes routing.
///
/// ```
/// use qv_estimator::metrics::{qv_closed_form, MetricQuery, Regime};
/// let est = qv_closed_form(&MetricQuery::new(1, 1_000_000, 1e-4), 0.0).unwrap();
/// assert!((est.value - 100.0).abs() < 1e-9);
/// assert_eq!(est.regime, Regime::ErrorLimited);
/// ```
pub fn qv_closed_form(q: &MetricQuery, m: f64) -> Result<MetricEstimate> {
    let n_opt = crossover_width(q, m)?;
    let n_max = q.n_max as f64;
    let value = n_max.min(n_opt);
    let regime = if n_max < n_opt {
        Regime::QubitLimited
    } else {
        Regime::ErrorLimited
    };
    let l = survival_log(q.success_threshold);
    let depth_at_value = if value > 0.0 {
        depth_unchecked(value, routed_error(value, q.eps_eff, m), l)
    } else {
        0.0
    };
    Ok(MetricEstimate {
        value,
        regime,
        n_opt,
        depth_at_value,
    })
}

/// Literal integer argmax of `min(n, d(n)^(1/k))` over `1..=n_max`.
///
/// Ties go to the smallest width. `d(n)` is strictly decreasing in `n`, so
/// once `d(n)^(1/k)` falls to the best value seen, no wider circuit can
/// beat it and the scan stops there. The result is the same as scanning
/// every width.
pub fn qv_brute_force(q: &MetricQuery, m: f64) -> Result<MetricEstimate> {
    let n_opt = crossover_width(q, m)?;
    if q.n_max > BRUTE_FORCE_LIMIT {
        return Err(invalid(
            "n_max",
            format!("brute force is limited to n_max <= {BRUTE_FORCE_LIMIT}"),
        ));
    }
    let l = survival_log(q.success_threshold);
    let inv_k = 1.0 / f64::from(q.k);

    let mut best_value = f64::NEG_INFINITY;
    let mut best_depth = 0.0;
    for n in 1..=q.n_max {
        let width = n as f64;
        let depth = depth_unchecked(width, routed_error(width, q.eps_eff, m), l);
        let cap = depth.powf(inv_k);
        if cap <= best_value {
            break;
        }
        let value = width.min(cap);
        if value > best_value {
            best_value = value;
            best_depth = depth;
        }
    }

    let regime = if (q.n_max as f64) < n_opt {
        Regime::QubitLimited
    } else {
        Regime::ErrorLimited
    };
    Ok(MetricEstimate {
        value: best_value,
        regime,
        n_opt,
        depth_at_value: best_depth,
    })
}
