use proptest::prelude::*;
use survopt::attribute::{min_mse_tp, mse_tp, q_of, solve_weights, two_phase_min_mse, two_phase_mse_tp, solve_weights_two_phase, AttrClassConfig, TwoPhaseConfig};
use survopt::repro::fixtures;
use survopt::stats::AttributeSummary;

#[test]
fn bundled_weights_attain_the_minimum() {
    let pops = fixtures::attribute_single_phase().unwrap();
    for a in [pops.pop1, pops.pop2] {
        let cfg = AttrClassConfig::default();
        let w = solve_weights(&cfg, &a).unwrap();
        assert!((w.sum() - 1.0).abs() < 1e-12);
        assert!((q_of(&w, &cfg, &a).unwrap() - a.k_p()).abs() < 1e-12);
        let mse = mse_tp(&w, &cfg, &a).unwrap();
        assert!((mse - min_mse_tp(&a)).abs() <= 1e-9 * min_mse_tp(&a));
    }
}

#[test]
fn two_phase_weights_attain_the_minimum() {
    let pops = fixtures::attribute_two_phase().unwrap();
    for a in [pops.pop1, pops.pop2] {
        let cfg = TwoPhaseConfig { m_exp: 1.0, n_exp: 1.0, gamma: 1.0, K1: 1.0, K2: 1.0, K3: 1.0, K4: 1.0, K5: 1.0 };
        let w = solve_weights_two_phase(&cfg, &a).unwrap();
        let mse = two_phase_mse_tp(&w, &cfg, &a).unwrap();
        let min = two_phase_min_mse(&a).unwrap();
        assert!((mse - min).abs() <= 1e-9 * min, "{mse} vs {min}");
    }
}

#[test]
fn two_phase_needs_first_phase_data() {
    let a = fixtures::attribute_single_phase().unwrap().pop1;
    assert!(two_phase_min_mse(&a).is_err());
}

fn summary() -> impl Strategy<Value = AttributeSummary> {
    (50u64..1000, 0.05f64..0.4, 1.0f64..1e3, 0.05f64..0.95, 0.1f64..3.0, -0.9f64..0.9).prop_map(
        |(big_n, frac, mean_y, p, c_y, rho_pb)| AttributeSummary {
            big_n,
            n: ((big_n as f64 * frac) as u64).max(2),
            mean_y,
            p,
            c_y,
            c_p: ((1.0 - p) / p).sqrt(),
            rho_pb,
            beta2_phi: 0.0,
            s_phi: None,
            n_prime: None,
            p_prime: None,
        },
    )
}

proptest! {
    #[test]
    fn weights_cancel_bias_and_reach_the_bound(a in summary(), k3 in 0.5f64..2.0, k5 in 0.5f64..2.0) {
        let cfg = AttrClassConfig { K3: k3, K5: k5, ..AttrClassConfig::default() };
        if let Ok(w) = solve_weights(&cfg, &a) {
            prop_assert!((w.sum() - 1.0).abs() < 1e-9);
            let min = min_mse_tp(&a);
            let mse = mse_tp(&w, &cfg, &a).unwrap();
            prop_assert!((mse - min).abs() <= 1e-9 * a.var_mean());
        }
    }
}
