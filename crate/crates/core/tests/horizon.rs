use survopt::horizon::{
    components_by_quadrature, cycle, exhaustive_grid, ga_optimize, optimize, replay_rows, solve_k, total_cost, GaConfig,
    HorizonParams,
};
use survopt::repro::fixtures;

/// Independent oracle: trajectories integrated with scipy `solve_ivp`/`quad`
/// at tolerance 1e-12, with `t_r` found by `brentq`. Columns: m, k, TC, t_r.
const ORACLE: [(u32, f64, f64, f64); 3] = [
    (2, 0.6, 14795.659306695292, 5.994245660112445),
    (5, 0.7, 5771.143696135121, 2.723717471141045),
    (12, 0.62, 3477.816881399931, 0.6904774669992058),
];

#[test]
fn total_cost_matches_oracle() {
    let p = HorizonParams::example1();
    for (m, k, tc, tr) in ORACLE {
        let t = total_cost(m, k, &p).unwrap();
        assert!((t.tc - tc).abs() <= 1e-9 * tc, "m={m}: {} vs {tc}", t.tc);
        assert!((t.cycle.t_r - tr).abs() <= 1e-9);
    }
}

#[test]
fn closed_form_components_match_quadrature() {
    let p = HorizonParams::example1();
    for (m, k, ..) in ORACLE {
        let c = cycle(&p, m, k).unwrap();
        let closed = total_cost(m, k, &p).unwrap().components;
        let quad = components_by_quadrature(&p, &c, 1e-11).unwrap();
        for (a, b) in closed.as_array().iter().zip(quad.as_array()) {
            assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0));
        }
    }
}

#[test]
fn optimize_agrees_with_grid_and_ga() {
    let p = HorizonParams::example1();
    let opt = optimize(&p).unwrap().policy;
    let (_, _, grid) = exhaustive_grid(&p, 30, 0.001).unwrap();
    assert!(opt.TC <= grid * (1.0 + 1e-3));
    let ga = ga_optimize(&p, &GaConfig { seed: 7, ..Default::default() }).unwrap();
    assert!((ga.best.TC - opt.TC).abs() <= 0.01 * opt.TC);
}

#[test]
fn stationary_roots_are_minima() {
    let p = HorizonParams::example1();
    for m in 1..=14 {
        if let Ok(s) = solve_k(m, &p) {
            if s.converged {
                assert!(s.d2tc > 0.0, "m={m}");
            }
        }
    }
}

#[test]
fn printed_row_manipulations_leave_cost_unchanged() {
    let fx = fixtures::horizon().unwrap();
    let rows = replay_rows(&fx.params, [fx.table[0], fx.table[1]], fx.after_crossover, fx.after_mutation);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0].tc_at_k, rows[2].tc_at_k);
    assert_eq!(rows[0].tc_at_k, rows[4].tc_at_k);
    assert_eq!(rows[1].tc_at_k, rows[3].tc_at_k);
}

#[test]
fn invalid_policies_rejected() {
    let p = HorizonParams::example1();
    assert!(total_cost(0, 0.5, &p).is_err());
    assert!(total_cost(2, 1.0, &p).is_err());
    assert!(total_cost(2, 0.01, &p).is_err());
}

#[test]
fn sensitivity_sweep_keeps_other_params() {
    let p = HorizonParams::example1();
    let rows = survopt::horizon::sensitivity_b(&p, &survopt::horizon::B_SWEEP).unwrap();
    assert_eq!(rows.len(), 3);
    let base = rows.iter().find(|(b, _)| *b == 0.1).unwrap().1;
    assert_eq!(base, survopt::horizon::optimize(&p).unwrap().policy);
    assert!(rows.iter().all(|(_, q)| q.TC.is_finite() && q.k > 0.0 && q.k < 1.0));
}
