//! Monte Carlo check of the depth model.
//!
//! Each layer applies one operation per qubit, and each operation fails
//! independently with probability `eps_eff`. A circuit survives until the
//! first layer with any failure. The sample mean of that depth should match
//! the geometric mean `1 / (1 - (1 - eps_eff)^n)`. For small `n * eps_eff`
//! that is close to the linearised `1 / (n * eps_eff)` used by the metrics.
//!
//! # Reproducibility
//!
//! Trial `i` draws from `ChaCha8Rng::seed_from_u64(seed)` switched to
//! stream `i`. Every trial has its own stream, and depth sums accumulate
//! as integers, so results are bit-identical for a given seed whatever
//! the thread count or schedule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub n: u64,
    pub eps_eff: f64,
    pub trials: u64,
    pub seed: u64,
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(invalid("n", "at least one qubit is required"));
        }
        if self.trials < 1 {
            return Err(invalid("trials", "at least one trial is required"));
        }
        if !(self.eps_eff.is_finite() && (0.0..=1.0).contains(&self.eps_eff)) {
            return Err(invalid("eps_eff", format!("{} is outside [0, 1]", self.eps_eff)));
        }
        Ok(())
    }
}

/// RNG for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Sample statistics of a Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub mean: f64,
    pub std_error: f64,
}

/// Mean and standard error from exact integer moments.
fn stats_from_sums(trials: u64, sum: u128, sum_sq: u128) -> SampleStats {
    let t = u128::from(trials);
    let mean = sum as f64 / trials as f64;
    if trials < 2 {
        return SampleStats { mean, std_error: 0.0 };
    }
    // t * sum_sq - sum^2 is exact and non-negative
    let spread = t * sum_sq - sum * sum;
    let variance = spread as f64 / (t * (t - 1)) as f64;
    SampleStats {
        mean,
        std_error: (variance / trials as f64).sqrt(),
    }
}

fn layer_fails(rng: &mut ChaCha8Rng, n: u64, eps: f64) -> bool {
    (0..n).any(|_| rng.random_bool(eps))
}

/// Layers survived up to and including the first failing one, averaged over trials.
pub fn simulate_depth_to_first_error(cfg: &TrialConfig) -> Result<SampleStats> {
    cfg.validate()?;
    if cfg.eps_eff == 0.0 {
        return Err(invalid("eps_eff", "error-free circuits never fail"));
    }
    let (sum, sum_sq) = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i);
            let mut depth = 1u64;
            while !layer_fails(&mut rng, cfg.n, cfg.eps_eff) {
                depth += 1;
            }
            let d = u128::from(depth);
            (d, d * d)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(stats_from_sums(cfg.trials, sum, sum_sq))
}

/// Fraction of depth-one circuits with at least one error, with its standard error.
pub fn single_step_stats(cfg: &TrialConfig) -> Result<SampleStats> {
    cfg.validate()?;
    let failures: u64 = (0..cfg.trials)
        .into_par_iter()
        .map(|i| u64::from(layer_fails(&mut trial_rng(cfg.seed, i), cfg.n, cfg.eps_eff)))
        .sum();
    let f = u128::from(failures);
    // indicator variables: sum of squares equals sum
    Ok(stats_from_sums(cfg.trials, f, f))
}

pub fn single_step_error_rate(cfg: &TrialConfig) -> Result<f64> {
    Ok(single_step_stats(cfg)?.mean)
}

/// Exact layer failure probability `1 - (1 - eps)^n`.
pub fn exact_layer_failure(n: u64, eps: f64) -> f64 {
    -(n as f64 * (-eps).ln_1p()).exp_m1()
}

/// Exact mean depth to first failure, `1 / (1 - (1 - eps)^n)`.
pub fn exact_mean_depth(n: u64, eps: f64) -> f64 {
    1.0 / exact_layer_failure(n, eps)
}

/// Linearised depth `1 / (n * eps)` used by the metric model.
pub fn linearized_depth(n: u64, eps: f64) -> f64 {
    1.0 / (n as f64 * eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: u64, eps_eff: f64, trials: u64) -> TrialConfig {
        TrialConfig {
            n,
            eps_eff,
            trials,
            seed: 7,
        }
    }

    #[test]
    fn rejects_invalid_configs() {
        assert!(simulate_depth_to_first_error(&cfg(1, 0.5, 0)).is_err());
        assert!(simulate_depth_to_first_error(&cfg(0, 0.5, 10)).is_err());
        assert!(simulate_depth_to_first_error(&cfg(1, 1.5, 10)).is_err());
        assert!(simulate_depth_to_first_error(&cfg(1, 0.0, 10)).is_err());
        assert!(single_step_error_rate(&cfg(1, -0.1, 10)).is_err());
    }

    #[test]
    fn certain_failure_has_unit_depth() {
        for n in [1, 5, 40] {
            let s = simulate_depth_to_first_error(&cfg(n, 1.0, 1000)).unwrap();
            assert_eq!(s.mean, 1.0);
            assert_eq!(s.std_error, 0.0);
        }
    }

    #[test]
    fn single_qubit_geometric_mean() {
        let s = simulate_depth_to_first_error(&cfg(1, 0.5, 100_000)).unwrap();
        assert!((s.mean - 2.0).abs() <= 3.0 * s.std_error, "{s:?}");
    }

    #[test]
    fn single_step_examples() {
        assert_eq!(single_step_error_rate(&cfg(1, 0.0, 1000)).unwrap(), 0.0);
        let s = single_step_stats(&cfg(2, 0.5, 100_000)).unwrap();
        assert!((s.mean - 0.75).abs() <= 3.0 * s.std_error);
    }

    #[test]
    fn single_step_small_error() {
        let c = TrialConfig {
            n: 10,
            eps_eff: 1e-3,
            trials: 1_000_000,
            seed: 11,
        };
        let s = single_step_stats(&c).unwrap();
        let exact = exact_layer_failure(10, 1e-3);
        assert!((exact - 0.009955119790251765).abs() < 1e-15);
        assert!((s.mean - exact).abs() <= 3.0 * s.std_error, "{s:?}");
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let c = cfg(8, 0.02, 5_000);
        let a = simulate_depth_to_first_error(&c).unwrap();
        let b = simulate_depth_to_first_error(&c).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn thread_count_does_not_matter() {
        let c = cfg(8, 0.02, 5_000);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_depth_to_first_error(&c).unwrap())
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.mean.to_bits(), four.mean.to_bits());
        assert_eq!(one.std_error.to_bits(), four.std_error.to_bits());
    }

    #[test]
    fn linearized_model_within_five_percent_when_small() {
        for &(n, eps) in &[(20u64, 1e-3), (100, 1e-3), (10, 1e-2), (1000, 1e-5)] {
            let exact = exact_mean_depth(n, eps);
            let lin = linearized_depth(n, eps);
            assert!(n as f64 * eps <= 0.1);
            assert!((exact - lin).abs() <= 0.05 * exact);
        }
    }

    #[test]
    fn moment_arithmetic() {
        let s = stats_from_sums(4, 1 + 2 + 3 + 4, 1 + 4 + 9 + 16);
        assert_eq!(s.mean, 2.5);
        let var: f64 = 5.0 / 3.0;
        assert!((s.std_error - (var / 4.0).sqrt()).abs() < 1e-15);
    }
}
