//! Fault-tolerant architecture optimizer.
//!
//! Physical qubits are split into a Data Block and a Distillation Block.
//! The Data Block holds logical qubits at code distance `d_c`, plus
//! ancilla patches for routing (50% extra by default). The Distillation
//! Block (`n_D` qubits) produces magic states whose error `eps_T` sets the
//! cost of T-synthesised rotations. The optimizer searches `(d_c, n_D)`
//! for the largest QV-k.
//!
//! Only distillation-level breakpoints are searched for `n_D`. Between two
//! breakpoints the metric can only fall, because extra distillation qubits
//! are idle and cost data qubits.

use serde::{Deserialize, Serialize};

use crate::distillation::{DistillationModel, DistillationScheme, Rung};
use crate::error::{check_open, invalid, Result};
use crate::metrics::{qv_closed_form, MetricEstimate, MetricQuery};
use crate::surface_code::{logical_error, max_code_distance, metric_rate, qubits_per_logical, SurfaceCodeConfig};
use crate::synthesis::SynthesisModel;

pub const DEFAULT_ANCILLA_FACTOR: f64 = 1.5;

/// Precision used when the optimal precision would reach 1.
pub const FALLBACK_PRECISION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchitectureLayout {
    pub n_max: u64,
    #[serde(rename = "n_D")]
    pub n_d: u64,
    pub d_c: u32,
    pub ancilla_factor: f64,
    #[serde(rename = "n_L")]
    pub n_l: u64,
}

/// `floor((n_max - n_D) / (ancilla_factor * (2 d_c - 1)^2))`.
///
/// ```
/// use qv_estimator::architect::logical_qubits;
/// assert_eq!(logical_qubits(1000, 100, 3, 1.5).unwrap(), 24);
/// ```
pub fn logical_qubits(n_max: u64, n_d: u64, d_c: u32, ancilla_factor: f64) -> Result<u64> {
    if n_d > n_max {
        return Err(invalid("n_D", format!("{n_d} exceeds n_max = {n_max}")));
    }
    if !(ancilla_factor.is_finite() && ancilla_factor >= 1.0) {
        return Err(invalid("ancilla_factor", format!("{ancilla_factor} must be >= 1")));
    }
    let per_logical = ancilla_factor * qubits_per_logical(d_c)? as f64;
    Ok(((n_max - n_d) as f64 / per_logical).floor() as u64)
}

impl ArchitectureLayout {
    pub fn new(n_max: u64, n_d: u64, d_c: u32, ancilla_factor: f64) -> Result<Self> {
        let n_l = logical_qubits(n_max, n_d, d_c, ancilla_factor)?;
        Ok(Self {
            n_max,
            n_d,
            d_c,
            ancilla_factor,
            n_l,
        })
    }

    /// Bare hardware: every qubit is a data qubit and gates are native.
    pub fn unencoded(n_max: u64) -> Self {
        Self {
            n_max,
            n_d: 0,
            d_c: 1,
            ancilla_factor: 1.0,
            n_l: n_max,
        }
    }

    pub fn is_unencoded(&self) -> bool {
        self.d_c == 1 && self.n_d == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FtOptions {
    pub ancilla_factor: f64,
    pub synthesis: SynthesisModel,
}

impl Default for FtOptions {
    fn default() -> Self {
        Self {
            ancilla_factor: DEFAULT_ANCILLA_FACTOR,
            synthesis: SynthesisModel::default(),
        }
    }
}

/// One evaluated `(d_c, n_D)` point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FtCandidate {
    pub layout: ArchitectureLayout,
    #[serde(rename = "eps_L")]
    pub eps_l: f64,
    /// Magic-state error; absent for the unencoded candidate.
    #[serde(rename = "eps_T")]
    pub eps_t: Option<f64>,
    /// Rotation precision; absent for the unencoded candidate.
    #[serde(rename = "eps_P")]
    pub eps_p: Option<f64>,
    pub eps_eff: f64,
    pub metric: MetricEstimate,
    pub distillation_levels: u32,
    pub factory_distance: u32,
    /// The optimal precision reached 1 and was replaced by 0.5.
    pub synthesis_dominated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FtOptimum {
    #[serde(flatten)]
    pub best: FtCandidate,
    /// Strictly better than running without error correction.
    pub beats_unencoded: bool,
    pub unencoded_value: f64,
}

fn metric_for(k: u32, n_l: u64, eps_eff: f64) -> Result<MetricEstimate> {
    let rate = metric_rate(eps_eff);
    if n_l == 0 {
        let n_opt = qv_closed_form(&MetricQuery::new(k, 1, rate), 0.0)?.n_opt;
        Ok(MetricEstimate::empty(n_opt))
    } else {
        qv_closed_form(&MetricQuery::new(k, n_l, rate), 0.0)
    }
}

fn unencoded_candidate(k: u32, n_max: u64, eps: f64) -> Result<FtCandidate> {
    Ok(FtCandidate {
        layout: ArchitectureLayout::unencoded(n_max),
        eps_l: eps,
        eps_t: None,
        eps_p: None,
        eps_eff: eps,
        metric: metric_for(k, n_max, eps)?,
        distillation_levels: 0,
        factory_distance: 0,
        synthesis_dominated: false,
    })
}

fn encoded_candidate(
    k: u32,
    layout: ArchitectureLayout,
    eps: f64,
    eps_th: f64,
    rung: &Rung,
    synthesis: &SynthesisModel,
) -> Result<FtCandidate> {
    let eps_l = logical_error(eps, &SurfaceCodeConfig::new(layout.d_c).with_threshold(eps_th))?;
    let eps_t = rung.eps_t;
    let mut eps_p = synthesis.optimal_precision(eps_t)?;
    let synthesis_dominated = eps_p >= 1.0;
    if synthesis_dominated {
        eps_p = FALLBACK_PRECISION;
    }
    let eps_eff = synthesis.effective_error(eps_p, eps_t, eps_l.min(1.0))?.min(1.0);
    Ok(FtCandidate {
        layout,
        eps_l,
        eps_t: Some(eps_t),
        eps_p: Some(eps_p),
        eps_eff,
        metric: metric_for(k, layout.n_l, eps_eff)?,
        distillation_levels: rung.level,
        factory_distance: rung.factory_distance,
        synthesis_dominated,
    })
}

fn check_inputs(k: u32, n_max: u64, eps: f64, eps_th: f64) -> Result<()> {
    if k < 1 {
        return Err(invalid("k", "volumetric class must be at least 1"));
    }
    if n_max < 1 {
        return Err(invalid("n_max", "at least one qubit is required"));
    }
    check_open("eps", eps, 0.0, 1.0)?;
    check_open("eps_th", eps_th, 0.0, 1.0)
}

/// Scores a single layout.
///
/// The unencoded layout (`d_c = 1`, `n_D = 0`) runs native gates with
/// `eps_eff = eps` on all `n_max` qubits. Every other layout pays for
/// T-synthesised rotations using the magic states its Distillation Block
/// can produce.
pub fn evaluate_architecture<S: DistillationScheme + ?Sized>(
    layout: &ArchitectureLayout,
    eps: f64,
    eps_th: f64,
    scheme: &S,
    k: u32,
    synthesis: &SynthesisModel,
) -> Result<FtCandidate> {
    check_inputs(k, layout.n_max, eps, eps_th)?;
    if layout.is_unencoded() {
        return unencoded_candidate(k, layout.n_max, eps);
    }
    let ladder = scheme.ladder(eps, layout.d_c, layout.n_d)?;
    let rung = ladder.last().expect("ladder always holds level 0");
    encoded_candidate(k, *layout, eps, eps_th, rung, synthesis)
}

/// Optimal architecture with the default options.
///
/// The model's surface-code threshold is set to `eps_th`.
pub fn optimize_ft(k: u32, n_max: u64, eps: f64, eps_th: f64, model: &DistillationModel) -> Result<FtOptimum> {
    let model = model.clone().with_threshold(eps_th);
    optimize_ft_with(k, n_max, eps, eps_th, &model, &FtOptions::default())
}

/// Exhaustive search over `d_c` in `1..=max_code_distance(n_max)` and the
/// distillation breakpoints that fit in `n_max`.
///
/// Ties go to the smaller `d_c`, then the smaller `n_D`. The unencoded
/// layout is the first candidate, so the result never falls below it.
pub fn optimize_ft_with<S: DistillationScheme + ?Sized>(
    k: u32,
    n_max: u64,
    eps: f64,
    eps_th: f64,
    scheme: &S,
    opts: &FtOptions,
) -> Result<FtOptimum> {
    check_inputs(k, n_max, eps, eps_th)?;
    let unencoded = unencoded_candidate(k, n_max, eps)?;
    let mut best = unencoded;

    let shared = if scheme.depends_on_code_distance() {
        None
    } else {
        Some(scheme.ladder(eps, 1, n_max)?)
    };

    for d_c in 1..=max_code_distance(n_max) {
        let owned;
        let ladder = match &shared {
            Some(l) => l,
            None => {
                owned = scheme.ladder(eps, d_c, n_max)?;
                &owned
            }
        };
        for rung in ladder {
            if d_c == 1 && rung.cost == 0 {
                continue;
            }
            let layout = ArchitectureLayout::new(n_max, rung.cost, d_c, opts.ancilla_factor)?;
            if layout.n_l == 0 {
                continue;
            }
            let candidate = encoded_candidate(k, layout, eps, eps_th, rung, &opts.synthesis)?;
            if candidate.metric.value > best.metric.value {
                best = candidate;
            }
        }
    }

    Ok(FtOptimum {
        beats_unencoded: best.metric.value > unencoded.metric.value,
        unencoded_value: unencoded.metric.value,
        best,
    })
}
