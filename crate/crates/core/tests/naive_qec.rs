use qv_estimator::surface_code::{max_code_distance, optimize_naive_qec, qubits_per_logical};

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<u64> {
    (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            (lo.ln() + (hi.ln() - lo.ln()) * t).exp().round() as u64
        })
        .collect()
}

#[test]
fn stair_steps_are_monotone() {
    for eps in [1e-3, 1e-4] {
        let mut last_value = 0.0;
        let mut last_d = 0;
        for n_max in log_grid(10.0, 1e6, 200) {
            let r = optimize_naive_qec(1, n_max, eps, 0.01).unwrap();
            assert!(r.metric.value >= last_value, "eps {eps} n_max {n_max}");
            assert!(r.best_d_c >= last_d, "eps {eps} n_max {n_max}");
            last_value = r.metric.value;
            last_d = r.best_d_c;
        }
    }
}

#[test]
fn every_integer_size_is_monotone_up_to_ten_thousand() {
    let mut prev = optimize_naive_qec(1, 1, 1e-3, 0.01).unwrap();
    for n_max in 2..=10_000u64 {
        let r = optimize_naive_qec(1, n_max, 1e-3, 0.01).unwrap();
        assert!(r.metric.value >= prev.metric.value, "n_max {n_max}");
        assert!(r.best_d_c >= prev.best_d_c, "n_max {n_max}");
        assert!(r.best_d_c <= max_code_distance(n_max));
        assert!(qubits_per_logical(r.best_d_c).unwrap() * r.n_l <= n_max);
        prev = r;
    }
}

#[test]
fn lower_error_reaches_higher_values() {
    for n_max in log_grid(100.0, 1e6, 30) {
        let a = optimize_naive_qec(1, n_max, 1e-3, 0.01).unwrap();
        let b = optimize_naive_qec(1, n_max, 1e-4, 0.01).unwrap();
        assert!(b.metric.value >= a.metric.value, "n_max {n_max}");
    }
}
