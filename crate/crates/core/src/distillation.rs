//! Magic-state distillation overhead.
//!
//! A distillation block turns noisy injected magic states into cleaner
//! ones. The model here is the 15-to-1 protocol applied recursively. Each
//! level consumes 15 states from the level below and outputs one, with
//! `eps_out = 35 * eps_in^3`. A level-`l` factory costs the footprint of a
//! level-1 factory times `15^(l-1)`.
//!
//! The footprint of a level-1 factory is `beta * 15 * (2 d_f - 1)^2`
//! physical qubits: fifteen surface-code patches at the factory distance
//! `d_f`. How `d_f` is chosen matters a great deal (see
//! [`FactoryDistance`]).
//!
//! Other schemes can be plugged in through [`DistillationScheme`].

use serde::{Deserialize, Serialize};

use crate::error::{check_open, invalid, Error, Result};
use crate::surface_code::{logical_error, SurfaceCodeConfig, DEFAULT_THRESHOLD};

/// Largest factory distance the output-matching policy will consider.
pub const MAX_FACTORY_DISTANCE: u32 = 100_000;

/// How the code distance of the distillation factories is picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactoryDistance {
    /// Smallest distance whose logical error does not exceed the level's
    /// distilled output error. Levels that no distance can support are
    /// unavailable.
    #[default]
    MatchOutput,
    /// Same distance as the data block.
    TiedToData,
    /// A fixed distance for every level.
    Fixed(u32),
}

/// One affordable distillation level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rung {
    pub level: u32,
    /// Physical qubits for the whole block at this level (0 for level 0).
    pub cost: u64,
    /// Output magic-state error.
    #[serde(rename = "eps_T")]
    pub eps_t: f64,
    /// Factory code distance (0 for level 0).
    pub factory_distance: u32,
}

/// A magic-state factory model.
pub trait DistillationScheme: Sync {
    /// Levels in order of increasing cost, starting with the raw injected
    /// state at cost 0. Output error strictly decreases along the ladder,
    /// and only rungs costing at most `max_budget` are returned.
    fn ladder(&self, eps: f64, d_c: u32, max_budget: u64) -> Result<Vec<Rung>>;

    /// Whether [`ladder`](Self::ladder) depends on the data-block distance.
    fn depends_on_code_distance(&self) -> bool {
        true
    }

    /// Identifies the model and its parameters in reports.
    fn version(&self) -> String;
}

/// Recursive 15-to-1 distillation with a configurable footprint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DistillationModel {
    /// Footprint multiplier `beta`.
    pub footprint_factor: f64,
    /// States consumed per distilled output.
    pub inputs_per_output: u32,
    /// `c` in `eps_out = c * eps_in^p`.
    pub output_coefficient: f64,
    /// `p` in `eps_out = c * eps_in^p`.
    pub output_exponent: i32,
    /// Error of injected states; the physical error rate when unset.
    pub injection_error: Option<f64>,
    pub factory_distance: FactoryDistance,
    /// Surface-code threshold used when matching factory distance.
    pub eps_th: f64,
    /// Deepest recursion considered.
    pub max_levels: u32,
}

impl Default for DistillationModel {
    fn default() -> Self {
        Self {
            footprint_factor: 1.0,
            inputs_per_output: 15,
            output_coefficient: 35.0,
            output_exponent: 3,
            injection_error: None,
            factory_distance: FactoryDistance::MatchOutput,
            eps_th: DEFAULT_THRESHOLD,
            max_levels: 6,
        }
    }
}

impl DistillationModel {
    pub fn with_factory_distance(mut self, policy: FactoryDistance) -> Self {
        self.factory_distance = policy;
        self
    }

    pub fn with_threshold(mut self, eps_th: f64) -> Self {
        self.eps_th = eps_th;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.footprint_factor.is_finite() && self.footprint_factor > 0.0) {
            return Err(invalid("footprint_factor", "must be positive"));
        }
        if self.inputs_per_output < 2 {
            return Err(invalid("inputs_per_output", "must be at least 2"));
        }
        if !(self.output_coefficient.is_finite() && self.output_coefficient > 0.0) {
            return Err(invalid("output_coefficient", "must be positive"));
        }
        if self.output_exponent < 2 {
            return Err(invalid("output_exponent", "must be at least 2"));
        }
        if let Some(e) = self.injection_error {
            check_open("injection_error", e, 0.0, 1.0)?;
        }
        if let FactoryDistance::Fixed(0) = self.factory_distance {
            return Err(invalid("factory_distance", "fixed distance must be at least 1"));
        }
        check_open("eps_th", self.eps_th, 0.0, 1.0)
    }

    /// Injected error above which a level makes things worse, `c^(-1/(p-1))`.
    pub fn break_even_error(&self) -> f64 {
        self.output_coefficient
            .powf(-1.0 / f64::from(self.output_exponent - 1))
    }

    fn distill_once(&self, eps_in: f64) -> f64 {
        self.output_coefficient * eps_in.powi(self.output_exponent)
    }

    /// Physical qubits of one level-1 factory at distance `d_f`.
    pub fn base_unit_cost(&self, d_f: u32) -> u64 {
        let side = 2.0 * f64::from(d_f) - 1.0;
        let cost = self.footprint_factor * f64::from(self.inputs_per_output) * side * side;
        (cost.ceil() as u64).max(1)
    }

    fn factory_distance_for(&self, eps: f64, d_c: u32, target: f64) -> Result<Option<u32>> {
        match self.factory_distance {
            FactoryDistance::TiedToData => Ok(Some(d_c)),
            FactoryDistance::Fixed(d) => Ok(Some(d)),
            FactoryDistance::MatchOutput => matching_distance(eps, self.eps_th, target),
        }
    }
}

/// Smallest `d` with `logical_error(eps, d) <= target`, if any.
fn matching_distance(eps: f64, eps_th: f64, target: f64) -> Result<Option<u32>> {
    let ok = |d: u32| -> Result<bool> {
        Ok(logical_error(eps, &SurfaceCodeConfig::new(d).with_threshold(eps_th))? <= target)
    };
    if eps >= eps_th {
        // logical error does not shrink with distance
        return Ok(ok(1)?.then_some(1));
    }
    let needed = (target / eps_th).ln() / (eps / eps_th).ln();
    let guess = (2.0 * needed - 1.0).ceil();
    if !guess.is_finite() || guess > f64::from(MAX_FACTORY_DISTANCE) {
        return Ok(None);
    }
    let mut d = (guess as u32).max(1);
    while d > 1 && ok(d - 1)? {
        d -= 1;
    }
    while !ok(d)? {
        d += 1;
        if d > MAX_FACTORY_DISTANCE {
            return Ok(None);
        }
    }
    Ok(Some(d))
}

impl DistillationScheme for DistillationModel {
    fn ladder(&self, eps: f64, d_c: u32, max_budget: u64) -> Result<Vec<Rung>> {
        self.validate()?;
        check_open("eps", eps, 0.0, 1.0)?;
        if d_c < 1 {
            return Err(invalid("d_c", "code distance must be at least 1"));
        }
        let injection = self.injection_error.unwrap_or(eps);
        let mut rungs = vec![Rung {
            level: 0,
            cost: 0,
            eps_t: injection,
            factory_distance: 0,
        }];

        let inputs = u64::from(self.inputs_per_output);
        let mut eps_in = injection;
        let mut multiplier = 1u64;
        for level in 1..=self.max_levels {
            let eps_out = self.distill_once(eps_in);
            if !eps_out.is_normal() || eps_out >= eps_in {
                break;
            }
            let Some(d_f) = self.factory_distance_for(eps, d_c, eps_out)? else {
                break;
            };
            let Some(cost) = self.base_unit_cost(d_f).checked_mul(multiplier) else {
                break;
            };
            if cost > max_budget {
                break;
            }
            rungs.push(Rung {
                level,
                cost,
                eps_t: eps_out,
                factory_distance: d_f,
            });
            eps_in = eps_out;
            match multiplier.checked_mul(inputs) {
                Some(m) => multiplier = m,
                None => break,
            }
        }
        Ok(rungs)
    }

    fn depends_on_code_distance(&self) -> bool {
        self.factory_distance == FactoryDistance::TiedToData
    }

    fn version(&self) -> String {
        let distance = match self.factory_distance {
            FactoryDistance::MatchOutput => "match-output".to_string(),
            FactoryDistance::TiedToData => "tied-to-data".to_string(),
            FactoryDistance::Fixed(d) => format!("fixed-{d}"),
        };
        let injection = self
            .injection_error
            .map_or_else(|| "physical".to_string(), |e| e.to_string());
        format!(
            "{}-to-1(c={},p={},beta={},d_f={},inj={},th={},levels<={})",
            self.inputs_per_output,
            self.output_coefficient,
            self.output_exponent,
            self.footprint_factor,
            distance,
            injection,
            self.eps_th,
            self.max_levels
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistillationOutcome {
    pub levels: u32,
    pub qubits_used: u64,
    #[serde(rename = "eps_T")]
    pub eps_t: f64,
    pub factory_distance: u32,
}

/// Best magic-state error reachable with `budget` distillation qubits.
///
/// ```
/// use qv_estimator::distillation::{distill, DistillationModel};
/// let model = DistillationModel::default();
/// assert_eq!(distill(0, 1e-3, 3, &model).unwrap().eps_t, 1e-3);
/// let out = distill(100_000, 1e-3, 3, &model).unwrap();
/// assert_eq!(out.levels, 1);
/// assert!((out.eps_t - 3.5e-8).abs() < 1e-20);
/// ```
pub fn distill<S: DistillationScheme + ?Sized>(
    budget: u64,
    eps: f64,
    d_c: u32,
    scheme: &S,
) -> Result<DistillationOutcome> {
    let ladder = scheme.ladder(eps, d_c, budget)?;
    let top = ladder.last().expect("ladder always holds level 0");
    Ok(DistillationOutcome {
        levels: top.level,
        qubits_used: top.cost,
        eps_t: top.eps_t,
        factory_distance: top.factory_distance,
    })
}

/// Smallest budget whose [`distill`] outcome has `eps_T <= target`.
pub fn required_budget<S: DistillationScheme + ?Sized>(
    target: f64,
    eps: f64,
    d_c: u32,
    scheme: &S,
) -> Result<u64> {
    if !(target.is_finite() && target > 0.0) {
        return Err(invalid("target", format!("{target} must be positive")));
    }
    let ladder = scheme.ladder(eps, d_c, u64::MAX)?;
    ladder
        .iter()
        .find(|r| r.eps_t <= target)
        .map(|r| r.cost)
        .ok_or(Error::UnachievableTarget {
            target,
            injection: ladder[0].eps_t,
        })
}
