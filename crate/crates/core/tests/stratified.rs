use proptest::prelude::*;
use survopt::repro::fixtures;
use survopt::stats::{v_moments, StratifiedPopulation, StratumInput};
use survopt::stratified::{pre_table, solve_tp, tp_mse_at, StratEstimatorId};

#[test]
fn bundled_table_mean_row_is_exactly_100() {
    let rows = pre_table(&fixtures::stratified().unwrap()).unwrap();
    assert_eq!(rows.len(), StratEstimatorId::ALL.len());
    assert_eq!(rows[0].estimator, StratEstimatorId::Mean);
    assert_eq!(rows[0].pre, 100.0);
}

#[test]
fn tp_is_the_minimum_over_its_constants() {
    let pop = fixtures::stratified().unwrap();
    let v = v_moments(&pop).unwrap();
    let sol = solve_tp(&v, &pop).unwrap();
    let (b1, b2) = survopt::stats::regression_coefficients(&pop).unwrap();
    for (d1, d2) in [(0.01, 0.0), (-0.01, 0.0), (0.0, 0.01), (0.0, -0.01), (0.02, -0.02)] {
        let mse = tp_mse_at(&v, b1, b2, pop.mean_y, sol.m1 + d1, sol.m2 + d2).3;
        assert!(mse >= sol.mse * (1.0 - 1e-12), "({d1}, {d2}): {mse} < {}", sol.mse);
    }
}

fn stratum() -> impl Strategy<Value = StratumInput> {
    (20u64..500, 0.05f64..0.5, 1.0f64..100.0, 1.0f64..100.0, 1.0f64..100.0, -0.9f64..0.9, -0.9f64..0.9, 0.0f64..0.8)
        .prop_filter("correlation matrix must be positive definite", |t| {
            let (a, b, c) = (t.5, t.6, t.7);
            1.0 - a * a - b * b - c * c + 2.0 * a * b * c > 1e-3
        })
        .prop_map(|(big_n, frac, my, mx, mz, ryx, ryz, rxz)| {
            let n = ((big_n as f64 * frac) as u64).max(2);
            serde_json::from_value(serde_json::json!({
                "N_h": big_n, "n_h": n, "mean_y": my, "mean_x": mx, "mean_z": mz,
                "S_y": my * 0.3, "S_x": mx * 0.4, "S_z": mz * 0.5,
                "rho_yx": ryx, "rho_yz": ryz, "rho_xz": rxz
            }))
            .unwrap()
        })
}

proptest! {
    #[test]
    fn moments_and_pre_are_well_formed(strata in prop::collection::vec(stratum(), 1..6)) {
        let pop = StratifiedPopulation::from_inputs(&strata).unwrap();
        let v = v_moments(&pop).unwrap();
        prop_assert!(v.satisfies_cauchy_schwarz(1e-9));
        if let Ok(rows) = pre_table(&pop) {
            prop_assert_eq!(rows[0].pre, 100.0);
            for r in &rows {
                prop_assert!(r.mse.is_finite() && r.pre > 0.0, "{:?}", r);
            }
        }
    }
}
