//! Parameter sweeps.
//!
//! Rows come out ordered by `k`, then series, then sweep point, whatever
//! order the parallel workers finish in.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{num, opt};
use super::spec::DeviceSpec;
use super::{finite, model_version, CliError, Mode};
use crate::architect::{optimize_ft_with, FALLBACK_PRECISION};
use crate::error::{invalid, Result as ModelResult};
use crate::metrics::{qv_closed_form, MetricQuery, Regime};
use crate::surface_code::optimize_naive_qec;
use crate::synthesis::{su4_error, PhysicalErrorBudget, SynthesisModel};
use crate::topology::TopologyKind;

type CliResult<T> = Result<T, CliError>;

/// The swept quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum SweepVariable {
    /// Physical qubit count.
    #[serde(rename = "n_max")]
    #[value(name = "n_max")]
    NMax,
    /// Two-qubit gate error, with `eps_1` kept at the spec's ratio.
    #[serde(rename = "eps_2")]
    #[value(name = "eps_2")]
    Eps2,
    /// Connected-pair error fed straight to the model.
    #[serde(rename = "eps_eff")]
    #[value(name = "eps_eff")]
    EpsEff,
    /// Magic-state error, with a perfect logical layer.
    #[serde(rename = "eps_T")]
    #[value(name = "eps_T")]
    EpsT,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::NMax => "n_max",
            SweepVariable::Eps2 => "eps_2",
            SweepVariable::EpsEff => "eps_eff",
            SweepVariable::EpsT => "eps_T",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Log,
    Linear,
}

/// One curve family: an explicit exponent or a named topology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Series {
    M(f64),
    Topology(TopologyKind),
}

impl Series {
    fn label(&self) -> String {
        match self {
            Series::M(m) => num(*m),
            Series::Topology(kind) => kind.as_str().to_string(),
        }
    }

    fn exponent(&self, spec: &DeviceSpec) -> CliResult<f64> {
        match self {
            Series::M(m) => Ok(*m),
            Series::Topology(TopologyKind::Custom) => {
                if spec.graph()?.is_none() {
                    return Err(invalid("topology", "`custom` needs an edge list in the spec").into());
                }
                Ok(spec.connectivity_exponent()?)
            }
            Series::Topology(kind) => Ok(kind.nominal_exponent().unwrap_or(0.0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRequest {
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
    pub k_values: Vec<u32>,
    /// Curve families; a single `m = 0` when empty.
    #[serde(default)]
    pub series: Vec<Series>,
    pub mode: Mode,
}

impl SweepRequest {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(invalid("range", format!("need lo < hi, got [{}, {}]", self.lo, self.hi)).into());
        }
        if self.points < 2 {
            return Err(invalid("points", "at least two points are required").into());
        }
        if self.scale == Scale::Log && self.lo <= 0.0 {
            return Err(invalid("range", "a log sweep needs lo > 0").into());
        }
        match self.variable {
            SweepVariable::NMax if self.lo < 1.0 => {
                return Err(invalid("range", "n_max sweeps start at 1 or above").into())
            }
            SweepVariable::Eps2 if self.lo < 0.0 || self.hi >= 1.0 => {
                return Err(invalid("range", "eps_2 must stay in [0, 1)").into())
            }
            SweepVariable::EpsEff | SweepVariable::EpsT if self.lo <= 0.0 || self.hi > 1.0 => {
                return Err(invalid("range", format!("{} must stay in (0, 1]", self.variable.as_str())).into())
            }
            _ => {}
        }
        if self.k_values.is_empty() || self.k_values.contains(&0) {
            return Err(invalid("k", "need one or more classes, each at least 1").into());
        }
        let uses_m = self.mode == Mode::Physical || self.variable == SweepVariable::EpsT;
        if !uses_m && self.series.iter().any(|s| *s != Series::M(0.0)) {
            return Err(invalid(
                "m",
                "connectivity series apply to physical mode and eps_T sweeps only",
            )
            .into());
        }
        for s in &self.series {
            if let Series::M(m) = s {
                if !(m.is_finite() && *m >= 0.0) {
                    return Err(invalid("m", format!("{m} must be >= 0")).into());
                }
            }
        }
        if self.variable == SweepVariable::EpsT && self.mode != Mode::FullFt {
            return Err(invalid("mode", "eps_T sweeps need mode full-ft").into());
        }
        Ok(())
    }

    /// Sweep points; the ends are exactly `lo` and `hi`.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i == last {
                    return self.hi;
                }
                let t = i as f64 / last as f64;
                match self.scale {
                    Scale::Linear => self.lo + (self.hi - self.lo) * t,
                    Scale::Log => (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * t).exp(),
                }
            })
            .map(|x| {
                if self.variable == SweepVariable::NMax {
                    x.round().max(1.0)
                } else {
                    x
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    /// Value of the swept variable.
    pub x: f64,
    pub k: u32,
    /// Exponent or topology id.
    pub m: String,
    pub metric_value: f64,
    pub regime: Regime,
    pub d_c: Option<u32>,
    #[serde(rename = "n_D")]
    pub n_d: Option<u64>,
    pub eps_eff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub model_version: String,
    pub request: SweepRequest,
    pub spec: DeviceSpec,
    pub rows: Vec<SweepRow>,
}

struct Point {
    n_max: u64,
    eps: f64,
}

fn point(spec: &DeviceSpec, variable: SweepVariable, x: f64) -> ModelResult<Point> {
    let base_eps = || spec.connected_pair_error();
    Ok(match variable {
        SweepVariable::NMax => Point {
            n_max: x as u64,
            eps: base_eps()?,
        },
        SweepVariable::Eps2 => {
            let ratio = if spec.eps_2 > 0.0 { spec.eps_1 / spec.eps_2 } else { 0.1 };
            Point {
                n_max: spec.n_max,
                eps: su4_error(&PhysicalErrorBudget::new(ratio * x, x)?)?,
            }
        }
        SweepVariable::EpsEff | SweepVariable::EpsT => Point {
            n_max: spec.n_max,
            eps: x,
        },
    })
}

fn evaluate(spec: &DeviceSpec, req: &SweepRequest, k: u32, m: f64, label: &str, x: f64) -> CliResult<SweepRow> {
    let p = point(spec, req.variable, x)?;
    if p.eps <= 0.0 {
        return Err(invalid("eps", format!("connected-pair error is zero at {} = {x}", req.variable.as_str())).into());
    }
    let (est, d_c, n_d, eps_eff) = if req.variable == SweepVariable::EpsT {
        let synthesis = SynthesisModel::default();
        let mut eps_p = synthesis.optimal_precision(p.eps)?;
        if eps_p >= 1.0 {
            eps_p = FALLBACK_PRECISION;
        }
        let eps_eff = synthesis.effective_error(eps_p, p.eps, 0.0)?.min(1.0);
        let est = qv_closed_form(&MetricQuery::new(k, p.n_max, eps_eff), m)?;
        (est, None, None, eps_eff)
    } else {
        match req.mode {
            Mode::Physical => {
                let est = qv_closed_form(&MetricQuery::new(k, p.n_max, p.eps), m)?;
                let eps_eff = if est.value >= 1.0 { (est.value.powf(m) * p.eps).min(1.0) } else { p.eps };
                (est, None, None, eps_eff)
            }
            Mode::NaiveQec => {
                let r = optimize_naive_qec(k, p.n_max, p.eps, spec.eps_th)?;
                (r.metric, Some(r.best_d_c), None, r.eps_l.min(1.0))
            }
            Mode::FullFt => {
                let model = spec.distillation_model();
                let r = optimize_ft_with(k, p.n_max, p.eps, spec.eps_th, &model, &spec.ft_options())?;
                (r.best.metric, Some(r.best.layout.d_c), Some(r.best.layout.n_d), r.best.eps_eff)
            }
        }
    };
    Ok(SweepRow {
        x,
        k,
        m: label.to_string(),
        metric_value: finite("metric_value", est.value)?,
        regime: est.regime,
        d_c,
        n_d,
        eps_eff: finite("eps_eff", eps_eff)?,
    })
}

/// Evaluates every `(k, series, point)` combination in parallel.
pub fn sweep(req: &SweepRequest, spec: &DeviceSpec) -> CliResult<SweepReport> {
    req.validate()?;
    let series = if req.series.is_empty() {
        vec![Series::M(0.0)]
    } else {
        req.series.clone()
    };
    let curves = series
        .iter()
        .map(|s| Ok((s.exponent(spec)?, s.label())))
        .collect::<CliResult<Vec<_>>>()?;
    let grid = req.grid();
    let mut tasks = Vec::with_capacity(req.k_values.len() * curves.len() * grid.len());
    for &k in &req.k_values {
        for c in 0..curves.len() {
            tasks.extend(grid.iter().map(|&x| (k, c, x)));
        }
    }
    let rows = tasks
        .into_par_iter()
        .map(|(k, c, x)| evaluate(spec, req, k, curves[c].0, &curves[c].1, x))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(SweepReport {
        model_version: model_version(&spec.distillation_model()),
        request: req.clone(),
        spec: spec.clone(),
        rows,
    })
}

/// CSV rendering with a header row and LF line endings.
pub fn write_csv(report: &SweepReport) -> String {
    let variable = report.request.variable;
    let mut out = format!("{},k,m,metric_value,regime,d_c,n_D,eps_eff\n", variable.as_str());
    for r in &report.rows {
        let x = if variable == SweepVariable::NMax {
            (r.x as u64).to_string()
        } else {
            num(r.x)
        };
        out.push_str(&format!(
            "{x},{},{},{},{},{},{},{}\n",
            r.k,
            r.m,
            num(r.metric_value),
            r.regime,
            opt(r.d_c),
            opt(r.n_d),
            num(r.eps_eff)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_device_spec_str;

    fn spec() -> DeviceSpec {
        parse_device_spec_str(
            r#"{"n_max": 1000000, "topology": "complete", "eps_1": 1e-4, "eps_2": 1e-3, "eps": 1e-3}"#,
        )
        .unwrap()
    }

    fn request(variable: SweepVariable, lo: f64, hi: f64, mode: Mode) -> SweepRequest {
        SweepRequest {
            variable,
            lo,
            hi,
            points: 12,
            scale: Scale::Log,
            k_values: vec![1, 2, 3],
            series: vec![],
            mode,
        }
    }

    #[test]
    fn grid_hits_both_ends() {
        let r = request(SweepVariable::EpsEff, 1e-6, 1e-1, Mode::Physical);
        let g = r.grid();
        assert_eq!(g.len(), 12);
        assert_eq!(g[0], 1e-6);
        assert_eq!(g[11], 1e-1);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let mut lin = r.clone();
        lin.scale = Scale::Linear;
        lin.lo = 0.0;
        assert!((lin.grid()[1] - 0.1 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn connectivity_bands_are_ordered() {
        let mut r = request(SweepVariable::EpsEff, 1e-6, 1e-1, Mode::Physical);
        r.points = 20;
        r.series = vec![Series::M(0.0), Series::M(0.5), Series::M(1.0)];
        let rep = sweep(&r, &spec()).unwrap();
        assert_eq!(rep.rows.len(), 3 * 3 * 20);
        for k in 0..3 {
            let base = k * 60;
            for i in 0..20 {
                let m0 = rep.rows[base + i].metric_value;
                let m5 = rep.rows[base + 20 + i].metric_value;
                let m1 = rep.rows[base + 40 + i].metric_value;
                assert!(m0 >= m5 && m5 >= m1, "{m0} {m5} {m1}");
            }
        }
    }

    #[test]
    fn naive_qec_stairs_are_monotone() {
        let mut r = request(SweepVariable::NMax, 10.0, 1e6, Mode::NaiveQec);
        r.points = 40;
        r.k_values = vec![1];
        let rep = sweep(&r, &spec()).unwrap();
        for w in rep.rows.windows(2) {
            assert!(w[1].metric_value >= w[0].metric_value);
            assert!(w[1].d_c >= w[0].d_c);
        }
    }

    #[test]
    fn csv_is_deterministic_with_header() {
        let mut r = request(SweepVariable::NMax, 10.0, 1e5, Mode::FullFt);
        r.k_values = vec![1, 2];
        let a = write_csv(&sweep(&r, &spec()).unwrap());
        let b = write_csv(&sweep(&r, &spec()).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("n_max,k,m,metric_value,regime,d_c,n_D,eps_eff\n"));
        assert_eq!(a.lines().count(), 1 + 2 * 12);
        assert!(!a.contains('\r'));
        let first = a.lines().nth(1).unwrap();
        assert!(first.starts_with("10,1,0.0,"), "{first}");
    }

    #[test]
    fn eps_t_sweep_improves_with_better_states() {
        let mut r = request(SweepVariable::EpsT, 1e-12, 1e-3, Mode::FullFt);
        r.k_values = vec![1];
        let rep = sweep(&r, &spec()).unwrap();
        for w in rep.rows.windows(2) {
            assert!(w[1].metric_value <= w[0].metric_value);
        }
    }

    #[test]
    fn eps_2_sweep_keeps_ratio() {
        let mut r = request(SweepVariable::Eps2, 1e-5, 1e-2, Mode::Physical);
        r.k_values = vec![1];
        let rep = sweep(&r, &spec()).unwrap();
        let last = rep.rows.last().unwrap();
        let eps = su4_error(&PhysicalErrorBudget::new(1e-3, 1e-2).unwrap()).unwrap();
        assert!((last.eps_eff - eps).abs() < 1e-15);
    }

    #[test]
    fn topology_series_use_ids() {
        let mut r = request(SweepVariable::EpsEff, 1e-4, 1e-2, Mode::Physical);
        r.series = vec![Series::Topology(TopologyKind::Grid)];
        let rep = sweep(&r, &spec()).unwrap();
        assert_eq!(rep.rows[0].m, "grid");
        r.series = vec![Series::Topology(TopologyKind::Custom)];
        assert_eq!(sweep(&r, &spec()).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn invalid_requests() {
        let bad = [
            request(SweepVariable::EpsEff, 1e-2, 1e-3, Mode::Physical),
            SweepRequest {
                points: 1,
                ..request(SweepVariable::EpsEff, 1e-3, 1e-2, Mode::Physical)
            },
            request(SweepVariable::EpsT, 1e-6, 1e-3, Mode::Physical),
            request(SweepVariable::Eps2, 1e-3, 1.5, Mode::Physical),
            SweepRequest {
                series: vec![Series::M(1.0)],
                ..request(SweepVariable::NMax, 10.0, 100.0, Mode::NaiveQec)
            },
        ];
        for r in bad {
            assert_eq!(sweep(&r, &spec()).unwrap_err().exit_code(), 2, "{r:?}");
        }
    }
}
