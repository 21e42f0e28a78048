use serde::Serialize;

use super::spec::DeviceSpec;
use super::{finite, model_version, CliError, Mode};
use crate::architect::{optimize_ft_with, FtOptimum};
use crate::error::invalid;
use crate::metrics::{qv_closed_form, MetricQuery, Regime};
use crate::surface_code::{evaluate_naive_qec, max_code_distance, optimize_naive_qec, NaiveQecResult, SurfaceCodeConfig};
use crate::topology::{fit_connectivity_exponent, ConnectivityFit, FitPoint, TopologyKind, TopologyProfile};
use crate::validator::{
    exact_layer_failure, exact_mean_depth, linearized_depth, simulate_depth_to_first_error,
    single_step_stats, SampleStats, TrialConfig,
};

type CliResult<T> = Result<T, CliError>;

fn check_ks(ks: &[u32]) -> CliResult<()> {
    if ks.is_empty() {
        return Err(invalid("k", "at least one class is required").into());
    }
    if ks.contains(&0) {
        return Err(invalid("k", "volumetric class must be at least 1").into());
    }
    Ok(())
}

/// One QV-k estimate with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateEntry {
    pub k: u32,
    pub value: f64,
    pub regime: Regime,
    pub n_opt: f64,
    pub depth_at_value: f64,
    /// Connectivity exponent; physical mode only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    /// Connected-pair physical error.
    pub eps: f64,
    pub eps_eff: f64,
    #[serde(rename = "eps_L", skip_serializing_if = "Option::is_none")]
    pub eps_l: Option<f64>,
    #[serde(rename = "eps_T", skip_serializing_if = "Option::is_none")]
    pub eps_t: Option<f64>,
    #[serde(rename = "eps_P", skip_serializing_if = "Option::is_none")]
    pub eps_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_c: Option<u32>,
    #[serde(rename = "n_D", skip_serializing_if = "Option::is_none")]
    pub n_d: Option<u64>,
    #[serde(rename = "n_L", skip_serializing_if = "Option::is_none")]
    pub n_l: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distillation_levels: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beats_unencoded: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub model_version: String,
    pub mode: Mode,
    pub spec: DeviceSpec,
    pub results: Vec<EstimateEntry>,
}

impl EstimateReport {
    /// One row per class, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,mode,metric_value,regime,d_c,n_D,eps_eff\n");
        for e in &self.results {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                e.k,
                self.mode,
                num(e.value),
                e.regime,
                opt(e.d_c),
                opt(e.n_d),
                num(e.eps_eff)
            ));
        }
        out
    }
}

pub(crate) fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Shortest round-trip form, in exponent notation when small or large.
pub(crate) fn num(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

fn physical_entry(k: u32, n_max: u64, eps: f64, m: f64) -> CliResult<EstimateEntry> {
    let est = qv_closed_form(&MetricQuery::new(k, n_max, eps), m)?;
    let eps_eff = if est.value >= 1.0 {
        (est.value.powf(m) * eps).min(1.0)
    } else {
        eps
    };
    Ok(EstimateEntry {
        k,
        value: est.value,
        regime: est.regime,
        n_opt: est.n_opt,
        depth_at_value: est.depth_at_value,
        m: Some(m),
        eps,
        eps_eff,
        eps_l: None,
        eps_t: None,
        eps_p: None,
        d_c: None,
        n_d: None,
        n_l: None,
        distillation_levels: None,
        beats_unencoded: None,
    })
}

fn naive_entry(k: u32, n_max: u64, eps: f64, eps_th: f64) -> CliResult<EstimateEntry> {
    let r = optimize_naive_qec(k, n_max, eps, eps_th)?;
    Ok(EstimateEntry {
        k,
        value: r.metric.value,
        regime: r.metric.regime,
        n_opt: r.metric.n_opt,
        depth_at_value: r.metric.depth_at_value,
        m: None,
        eps,
        eps_eff: r.eps_l.min(1.0),
        eps_l: Some(r.eps_l),
        eps_t: None,
        eps_p: None,
        d_c: Some(r.best_d_c),
        n_d: None,
        n_l: Some(r.n_l),
        distillation_levels: None,
        beats_unencoded: None,
    })
}

fn ft_entry(k: u32, spec: &DeviceSpec, eps: f64) -> CliResult<EstimateEntry> {
    let model = spec.distillation_model();
    let r = optimize_ft_with(k, spec.n_max, eps, spec.eps_th, &model, &spec.ft_options())?;
    let b = r.best;
    Ok(EstimateEntry {
        k,
        value: b.metric.value,
        regime: b.metric.regime,
        n_opt: b.metric.n_opt,
        depth_at_value: b.metric.depth_at_value,
        m: None,
        eps,
        eps_eff: b.eps_eff,
        eps_l: Some(b.eps_l),
        eps_t: b.eps_t,
        eps_p: b.eps_p,
        d_c: Some(b.layout.d_c),
        n_d: Some(b.layout.n_d),
        n_l: Some(b.layout.n_l),
        distillation_levels: Some(b.distillation_levels),
        beats_unencoded: Some(r.beats_unencoded),
    })
}

fn check_entry(e: &EstimateEntry) -> CliResult<()> {
    finite("metric_value", e.value)?;
    finite("eps_eff", e.eps_eff)?;
    finite("n_opt", e.n_opt)?;
    Ok(())
}

/// QV-k for each class in `ks` under `mode`.
pub fn estimate(spec: &DeviceSpec, ks: &[u32], mode: Mode) -> CliResult<EstimateReport> {
    check_ks(ks)?;
    let eps = spec.connected_pair_error()?;
    if eps <= 0.0 {
        return Err(invalid("eps", "connected-pair error is zero; the metric is unbounded").into());
    }
    let m = spec.connectivity_exponent()?;
    let results = ks
        .iter()
        .map(|&k| {
            let e = match mode {
                Mode::Physical => physical_entry(k, spec.n_max, eps, m)?,
                Mode::NaiveQec => naive_entry(k, spec.n_max, eps, spec.eps_th)?,
                Mode::FullFt => ft_entry(k, spec, eps)?,
            };
            check_entry(&e)?;
            Ok(e)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(EstimateReport {
        model_version: model_version(&spec.distillation_model()),
        mode,
        spec: spec.clone(),
        results,
    })
}

/// Optimizer output for one class.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum OptimizeEntry {
    NaiveQec {
        k: u32,
        best: NaiveQecResult,
        /// Every code distance that fits, in increasing order.
        by_distance: Vec<NaiveQecResult>,
    },
    FullFt {
        k: u32,
        #[serde(flatten)]
        optimum: FtOptimum,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeReport {
    pub model_version: String,
    pub mode: Mode,
    pub spec: DeviceSpec,
    pub results: Vec<OptimizeEntry>,
}

/// Full optimizer output (chosen layout and its ingredients) per class.
pub fn optimize(spec: &DeviceSpec, ks: &[u32], mode: Mode) -> CliResult<OptimizeReport> {
    check_ks(ks)?;
    let eps = spec.connected_pair_error()?;
    if eps <= 0.0 {
        return Err(invalid("eps", "connected-pair error is zero; the metric is unbounded").into());
    }
    let results = ks
        .iter()
        .map(|&k| match mode {
            Mode::Physical => Err(invalid("mode", "physical mode has nothing to optimize").into()),
            Mode::NaiveQec => {
                let best = optimize_naive_qec(k, spec.n_max, eps, spec.eps_th)?;
                let by_distance = (1..=max_code_distance(spec.n_max))
                    .map(|d| {
                        let cfg = SurfaceCodeConfig::new(d).with_threshold(spec.eps_th);
                        evaluate_naive_qec(k, spec.n_max, eps, &cfg)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(OptimizeEntry::NaiveQec { k, best, by_distance })
            }
            Mode::FullFt => {
                let model = spec.distillation_model();
                let optimum = optimize_ft_with(k, spec.n_max, eps, spec.eps_th, &model, &spec.ft_options())?;
                finite("metric_value", optimum.best.metric.value)?;
                Ok(OptimizeEntry::FullFt { k, optimum })
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(OptimizeReport {
        model_version: model_version(&spec.distillation_model()),
        mode,
        spec: spec.clone(),
        results,
    })
}

/// Empirical estimate against its analytic expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationCheck {
    pub empirical: f64,
    pub std_error: f64,
    pub exact: f64,
    pub linearized: f64,
    /// `(empirical - exact) / std_error`; absent when the sample has no spread.
    pub z_score: Option<f64>,
    /// Within three standard errors of `exact`.
    pub pass: bool,
}

fn compare(stats: SampleStats, exact: f64, linearized: f64) -> ValidationCheck {
    let diff = stats.mean - exact;
    let (z_score, pass) = if stats.std_error > 0.0 {
        let z = diff / stats.std_error;
        (Some(z), z.abs() <= 3.0)
    } else {
        (None, diff.abs() <= 1e-12 * exact.abs().max(1.0))
    };
    ValidationCheck {
        empirical: stats.mean,
        std_error: stats.std_error,
        exact,
        linearized,
        z_score,
        pass,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateReport {
    pub model_version: String,
    pub config: TrialConfig,
    /// Mean depth to the first failing layer.
    pub depth: ValidationCheck,
    /// Failure probability of a single layer.
    pub single_step: ValidationCheck,
    pub pass: bool,
}

/// Monte Carlo check of the depth model.
pub fn validate(cfg: &TrialConfig) -> CliResult<ValidateReport> {
    cfg.validate()?;
    let depth_stats = simulate_depth_to_first_error(cfg)?;
    let depth = compare(
        depth_stats,
        exact_mean_depth(cfg.n, cfg.eps_eff),
        linearized_depth(cfg.n, cfg.eps_eff),
    );
    let single_step = compare(
        single_step_stats(cfg)?,
        exact_layer_failure(cfg.n, cfg.eps_eff),
        (cfg.n as f64 * cfg.eps_eff).min(1.0),
    );
    Ok(ValidateReport {
        model_version: format!("qv-estimator {}; chacha8 stream-per-trial", env!("CARGO_PKG_VERSION")),
        config: *cfg,
        pass: depth.pass && single_step.pass,
        depth,
        single_step,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub topology: TopologyKind,
    /// Nominal exponent of the family, if it has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nominal_m: Option<f64>,
    pub m_fit: f64,
    pub fit_residual: f64,
    pub points: Vec<FitPoint>,
}

/// Fits the connectivity exponent of a named family over `sizes`.
pub fn fit_topology(kind: TopologyKind, sizes: &[usize]) -> CliResult<FitReport> {
    let ConnectivityFit {
        m_fit,
        fit_residual,
        points,
    } = fit_connectivity_exponent(kind, sizes)?;
    Ok(FitReport {
        topology: kind,
        nominal_m: kind.nominal_exponent(),
        m_fit: finite("m_fit", m_fit)?,
        fit_residual,
        points,
    })
}

/// Single-point exponent of the graph in `spec`.
pub fn fit_topology_graph(spec: &DeviceSpec) -> CliResult<FitReport> {
    let Some(graph) = spec.graph()? else {
        return Err(invalid("topology", "the spec names a family; pass --kind and --sizes to fit it").into());
    };
    let p = TopologyProfile::from_graph(graph)?;
    Ok(FitReport {
        topology: TopologyKind::Custom,
        nominal_m: None,
        m_fit: p.m_fit,
        fit_residual: p.fit_residual,
        points: vec![FitPoint {
            qubit_count: p.graph.qubit_count(),
            avg_swaps: p.avg_swaps,
        }],
    })
}
