//! Results checked against independent computations: all-pairs shortest
//! paths by Floyd–Warshall, a golden-section minimiser, and values frozen
//! from a separate floating-point prototype of the optimizer.

use qv_estimator::architect::optimize_ft;
use qv_estimator::distillation::{DistillationModel, DistillationScheme, FactoryDistance};
use qv_estimator::synthesis::{ft_effective_error, optimal_precision, su4_error, PhysicalErrorBudget};
use qv_estimator::topology::{average_swap_count, fit_connectivity_exponent, TopologyGraph, TopologyKind};
use qv_estimator::validator::{simulate_depth_to_first_error, single_step_stats, TrialConfig};

fn floyd_warshall_swaps(n: usize, edges: &[(usize, usize)]) -> f64 {
    const INF: u64 = u64::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in edges {
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let total: u64 = d.iter().enumerate().map(|(i, row)| row[i + 1..].iter().sum::<u64>()).sum();
    total as f64 / (n * (n - 1) / 2) as f64 - 1.0
}

fn lcg(state: &mut u64) -> u64 {
    *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    *state >> 33
}

#[test]
fn swap_counts_match_floyd_warshall() {
    let mut state = 2024u64;
    for trial in 0..60 {
        let n = 2 + (lcg(&mut state) % 45) as usize;
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| ((lcg(&mut state) % i as u64) as usize, i)).collect();
        for _ in 0..(lcg(&mut state) % (2 * n as u64)) {
            let a = (lcg(&mut state) % n as u64) as usize;
            let b = (lcg(&mut state) % n as u64) as usize;
            if a != b {
                edges.push((a, b));
            }
        }
        let g = TopologyGraph::custom(n, edges.iter().copied()).unwrap();
        let got = average_swap_count(&g).unwrap();
        let want = floyd_warshall_swaps(n, &edges);
        assert!((got - want).abs() <= 1e-12, "trial {trial}: {got} vs {want}");
    }
}

#[test]
fn named_graphs_match_floyd_warshall() {
    assert!((average_swap_count(&TopologyGraph::linear_chain(3).unwrap()).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    let g = TopologyGraph::square_grid(100).unwrap();
    let edges: Vec<_> = g.edges().iter().copied().collect();
    let fw = floyd_warshall_swaps(100, &edges);
    assert_eq!(fw, 5.666666666666667);
    assert!((average_swap_count(&g).unwrap() - fw).abs() < 1e-12);
    for (s, n_swaps) in [(4, 5.0 / 3.0), (8, 13.0 / 3.0), (12, 7.0), (16, 29.0 / 3.0)] {
        let g = TopologyGraph::square_grid(s * s).unwrap();
        assert!((average_swap_count(&g).unwrap() - n_swaps).abs() < 1e-12, "side {s}");
    }
}

#[test]
fn exponent_fits_match_least_squares_reference() {
    let grid = fit_connectivity_exponent(TopologyKind::Grid, &[16, 64, 144, 256]).unwrap();
    assert!((grid.m_fit - 0.5).abs() < 1e-12);
    assert!(grid.fit_residual < 1e-12);
    let chain = fit_connectivity_exponent(TopologyKind::Linear, &[10, 50, 100, 200]).unwrap();
    assert!((chain.m_fit - 0.9686).abs() < 1e-4, "{}", chain.m_fit);
}

/// Golden-section search on `ln eps_P`.
fn golden_argmin(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-12 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

#[test]
fn optimal_precision_matches_numeric_minimum() {
    for exp in [-10, -9, -8, -7, -6, -5, -4, -3] {
        let eps_t = 10f64.powi(exp);
        let lp = golden_argmin(|lp| ft_effective_error(lp.exp(), eps_t, 0.0).unwrap(), (1e-30f64).ln(), 0.0);
        let numeric = lp.exp();
        let closed = optimal_precision(eps_t).unwrap();
        assert!((numeric - closed).abs() <= 0.01 * closed, "eps_T = {eps_t}: {numeric} vs {closed}");
    }
}

#[test]
fn su4_composition_reference() {
    let e = su4_error(&PhysicalErrorBudget::new(1e-4, 1e-3).unwrap()).unwrap();
    assert!((e - 3.694693763561796e-3).abs() <= 1e-13 * e, "{e}");
}

#[test]
fn monte_carlo_matches_geometric_mean() {
    let cfg = TrialConfig {
        n: 20,
        eps_eff: 1e-3,
        trials: 100_000,
        seed: 42,
    };
    let s = simulate_depth_to_first_error(&cfg).unwrap();
    let exact = 1.0 / (1.0 - 0.999f64.powi(20));
    assert!((exact - 50.476663320677034).abs() < 1e-9);
    assert!((s.mean - exact).abs() <= 3.0 * s.std_error, "{s:?}");
    assert!((s.mean - 50.0).abs() <= 5.0);
}

#[test]
fn monte_carlo_error_shrinks_as_inverse_sqrt_trials() {
    let base = TrialConfig {
        n: 10,
        eps_eff: 1e-2,
        trials: 10_000,
        seed: 5,
    };
    let small = simulate_depth_to_first_error(&base).unwrap();
    let large = simulate_depth_to_first_error(&TrialConfig { trials: 160_000, ..base }).unwrap();
    let ratio = large.std_error / small.std_error;
    assert!((ratio - 0.25).abs() < 0.03, "ratio {ratio}");
    let exact = 1.0 / (1.0 - 0.99f64.powi(10));
    assert!((large.mean - exact).abs() <= 3.0 * large.std_error);

    let step = single_step_stats(&TrialConfig { trials: 400_000, ..base }).unwrap();
    assert!((step.mean - (1.0 - 0.99f64.powi(10))).abs() <= 3.0 * step.std_error);
}

#[test]
fn distillation_ladders_match_reference() {
    let model = DistillationModel::default();
    let ladder = model.ladder(1e-3, 3, 10_000_000).unwrap();
    let costs: Vec<u64> = ladder.iter().map(|r| r.cost).collect();
    assert_eq!(costs, [0, 5415, 1_199_025]);
    assert!((ladder[1].eps_t - 3.5e-8).abs() < 1e-20);
    assert!((ladder[2].eps_t - 1.500625e-21).abs() < 1e-33);

    let ladder = model.ladder(1e-4, 3, 10_000_000).unwrap();
    let costs: Vec<u64> = ladder.iter().map(|r| r.cost).collect();
    assert_eq!(costs, [0, 3375, 632_025]);
}

/// `(eps, n_max, value, d_c, n_D)` from the reference prototype.
const FT_REFERENCE: &[(f64, u64, f64, u32, u64)] = &[
    (0.01, 1_000, 10.0, 1, 0),
    (0.01, 1_000_000, 10.0, 1, 0),
    (0.003, 1_000, 18.257418583505537, 1, 0),
    (0.003, 100_000, 63.57527556088266, 15, 12_615),
    (0.003, 1_000_000, 63.659739164272594, 51, 12_615),
    (0.001, 1_000, 31.622776601683793, 1, 0),
    (0.001, 10_000, 94.75125898683275, 3, 5_415),
    (0.001, 100_000, 284.143090959891, 7, 5_415),
    (0.001, 1_000_000, 296.3584264925896, 24, 5_415),
    (0.0001, 1_000, 100.0, 1, 0),
    (0.0001, 10_000, 315.97359351170087, 2, 3_375),
    (0.0001, 100_000, 1314.0, 4, 3_375),
    (0.0001, 1_000_000, 6190.4752379562005, 5, 3_375),
];

#[test]
fn ft_optimum_matches_reference_table() {
    let model = DistillationModel::default();
    for &(eps, n_max, value, d_c, n_d) in FT_REFERENCE {
        let r = optimize_ft(1, n_max, eps, 0.01, &model).unwrap();
        let got = r.best.metric.value;
        assert!((got - value).abs() <= 1e-9 * value, "eps {eps} n_max {n_max}: {got} vs {value}");
        assert_eq!((r.best.layout.d_c, r.best.layout.n_d), (d_c, n_d), "eps {eps} n_max {n_max}");
    }
}

fn viability_threshold(model: &DistillationModel) -> u64 {
    let beats = |n| optimize_ft(1, n, 1e-3, 0.01, model).unwrap().beats_unencoded;
    let (mut lo, mut hi) = (1u64, 1_000_000u64);
    assert!(beats(hi));
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if beats(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[test]
fn viability_thresholds_match_reference() {
    assert_eq!(viability_threshold(&DistillationModel::default()), 5847);
    let tied = DistillationModel::default().with_factory_distance(FactoryDistance::TiedToData);
    assert_eq!(viability_threshold(&tied), 567);
}
