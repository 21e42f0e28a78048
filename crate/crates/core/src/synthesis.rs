//! Gate-level error models.
//!
//! On physical hardware a random two-qubit SU(4) is compiled into at most
//! seven single-qubit gates and three entangling gates. Under a fault
//! tolerant code the single-qubit rotations must instead be approximated
//! from T gates. Each rotation then costs a T-count that grows with the
//! requested precision, and every T gate consumes an imperfect magic state.

use serde::{Deserialize, Serialize};

use crate::error::{check_closed_open, invalid, Result};

/// Single-qubit SU(2) gates in a general SU(4) decomposition.
pub const SU4_SINGLE_QUBIT_GATES: i32 = 7;
/// Entangling gates in a general SU(4) decomposition.
pub const SU4_TWO_QUBIT_GATES: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalErrorBudget {
    /// Single-qubit gate error.
    pub eps_1: f64,
    /// Two-qubit entangling gate error.
    pub eps_2: f64,
}

impl PhysicalErrorBudget {
    pub fn new(eps_1: f64, eps_2: f64) -> Result<Self> {
        let b = Self { eps_1, eps_2 };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        check_closed_open("eps_1", self.eps_1, 0.0, 1.0)?;
        check_closed_open("eps_2", self.eps_2, 0.0, 1.0)
    }
}

/// Error of one connected-pair SU(4): `1 - (1-eps_1)^7 (1-eps_2)^3`.
///
/// Evaluated in product form through `ln_1p`/`exp_m1`, which stays accurate
/// when both rates are tiny.
///
/// ```
/// use qv_estimator::synthesis::{su4_error, PhysicalErrorBudget};
/// let eps = su4_error(&PhysicalErrorBudget::new(1e-4, 1e-3).unwrap()).unwrap();
/// assert!((eps - 3.694693763561796e-3).abs() < 1e-15);
/// ```
pub fn su4_error(budget: &PhysicalErrorBudget) -> Result<f64> {
    budget.validate()?;
    let log_survival = f64::from(SU4_SINGLE_QUBIT_GATES) * (-budget.eps_1).ln_1p()
        + f64::from(SU4_TWO_QUBIT_GATES) * (-budget.eps_2).ln_1p();
    Ok(-log_survival.exp_m1())
}

/// T gates needed to approximate one arbitrary rotation to precision `eps_p`.
pub fn t_count(eps_p: f64) -> Result<f64> {
    SynthesisModel::default().t_count(eps_p)
}

/// Effective error per qubit per step for T-synthesised gates, default model.
pub fn ft_effective_error(eps_p: f64, eps_t: f64, eps_l: f64) -> Result<f64> {
    SynthesisModel::default().effective_error(eps_p, eps_t, eps_l)
}

/// Precision minimising rotation plus T-gate error, default model.
pub fn optimal_precision(eps_t: f64) -> Result<f64> {
    SynthesisModel::default().optimal_precision(eps_t)
}

/// Counting constants for the fault-tolerant gate decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisModel {
    /// Arbitrary rotations per qubit per step: nine rotations per SU(4),
    /// shared by two qubits.
    pub rotations_per_qubit_step: f64,
    /// T-count per bit of precision, `t_count = -c * log2(eps_p)`.
    pub t_gates_per_bit: f64,
}

impl Default for SynthesisModel {
    fn default() -> Self {
        Self {
            rotations_per_qubit_step: 4.5,
            t_gates_per_bit: 3.0,
        }
    }
}

impl SynthesisModel {
    pub fn t_count(&self, eps_p: f64) -> Result<f64> {
        if !(eps_p.is_finite() && eps_p > 0.0 && eps_p <= 1.0) {
            return Err(invalid("eps_P", format!("{eps_p} is outside (0, 1]")));
        }
        Ok(-self.t_gates_per_bit * eps_p.log2())
    }

    /// `r*eps_p + r*t_count(eps_p)*eps_t + eps_l` with `r` rotations per step.
    pub fn effective_error(&self, eps_p: f64, eps_t: f64, eps_l: f64) -> Result<f64> {
        if !(eps_p.is_finite() && eps_p > 0.0 && eps_p < 1.0) {
            return Err(invalid("eps_P", format!("{eps_p} is outside (0, 1)")));
        }
        check_closed_open("eps_T", eps_t, 0.0, 1.0)?;
        if !(eps_l.is_finite() && (0.0..=1.0).contains(&eps_l)) {
            return Err(invalid("eps_L", format!("{eps_l} is outside [0, 1]")));
        }
        let r = self.rotations_per_qubit_step;
        Ok(r * eps_p + r * self.t_count(eps_p)? * eps_t + eps_l)
    }

    /// Minimiser of the rotation and T terms, `c * eps_t / ln 2`, capped at 1.
    pub fn optimal_precision(&self, eps_t: f64) -> Result<f64> {
        if !(eps_t.is_finite() && eps_t > 0.0 && eps_t < 1.0) {
            return Err(invalid("eps_T", format!("{eps_t} is outside (0, 1)")));
        }
        Ok((self.t_gates_per_bit * eps_t / std::f64::consts::LN_2).min(1.0))
    }

    /// Bundles the rates into a [`SynthesisPlan`], clamping the result to `[0, 1]`.
    pub fn plan(&self, eps_p: f64, eps_t: f64, eps_l: f64) -> Result<SynthesisPlan> {
        let raw = self.effective_error(eps_p, eps_t, eps_l)?;
        Ok(SynthesisPlan {
            eps_p,
            eps_t,
            t_count_per_rotation: self.t_count(eps_p)?,
            eps_l,
            eps_eff: raw.min(1.0),
            clamped: raw > 1.0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisPlan {
    #[serde(rename = "eps_P")]
    pub eps_p: f64,
    #[serde(rename = "eps_T")]
    pub eps_t: f64,
    pub t_count_per_rotation: f64,
    #[serde(rename = "eps_L")]
    pub eps_l: f64,
    pub eps_eff: f64,
    /// `eps_eff` was capped at 1.
    pub clamped: bool,
}
