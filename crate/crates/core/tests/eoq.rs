use proptest::prelude::*;
use survopt::eoq::{crisp_cost, crisp_cost_no_release, solve_crisp, solve_fuzzy, CostCoeffs, EoqParams};
use survopt::validate::eoq_example;
use survopt::{Convention, Error};

// Independent oracle: Nelder-Mead on the crisp cost (scipy, tolerances 1e-10).
const ORACLE_Q: f64 = 265.91810554912126;
const ORACLE_K: f64 = 44.721357422596206;
const ORACLE_COST: f64 = 2205.025252561952;

#[test]
fn crisp_optimum_matches_oracle() {
    let (crisp, _) = eoq_example().unwrap();
    let s = solve_crisp(&crisp).unwrap();
    assert!(s.converged);
    assert!((s.Q - ORACLE_Q).abs() < 1e-5);
    assert!((s.K.unwrap() - ORACLE_K).abs() < 1e-5);
    assert!((s.cost - ORACLE_COST).abs() < 1e-8);
}

#[test]
fn fuzzy_solver_collapses_to_crisp() {
    let (crisp, _) = eoq_example().unwrap();
    let c = solve_crisp(&crisp).unwrap();
    for conv in [Convention::StrictPrint, Convention::SignConsistent] {
        let f = solve_fuzzy(&crisp.to_fuzzy(), conv).unwrap();
        assert!((f.Q - c.Q).abs() < 1e-9 && (f.cost - c.cost).abs() < 1e-9);
    }
}

#[test]
fn release_needs_f_above_h() {
    let (mut crisp, _) = eoq_example().unwrap();
    crisp.H = crisp.F;
    assert_eq!(solve_crisp(&crisp).unwrap_err(), Error::KReleaseUndefined);
}

fn params() -> impl Strategy<Value = (EoqParams, f64, f64)> {
    (100.0f64..1e4, 10.0f64..500.0, 0.5f64..10.0, 0.01f64..5.0, 10.0f64..500.0, 0.01f64..2.0, 0.01f64..3.0, 0.1f64..1000.0, 0.01f64..1.0)
        .prop_map(|(d, a, h, gap, w, ct, cs, dq, fk)| {
            let p = EoqParams { D: d, A: a, F: h + gap, H: h, W: w, Ct: ct, Ct_star: Some(cs) };
            (p, w + dq, fk * w)
        })
}

proptest! {
    #[test]
    fn release_saving_identity((p, q, k) in params()) {
        let lhs = crisp_cost_no_release(q, &p).unwrap() - crisp_cost(q, k, &p).unwrap();
        let rhs = (1.0 - p.W / q) * (p.D * (p.Ct_star.unwrap() - p.Ct / k) - k / 2.0 * (p.F - p.H));
        let scale = crisp_cost(q, k, &p).unwrap().abs().max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * scale);
    }

    #[test]
    fn coefficient_form_matches_cost((p, q, k) in params()) {
        let c = CostCoeffs::from_fuzzy(&p.to_fuzzy(), Convention::StrictPrint);
        let direct = crisp_cost(q, k, &p).unwrap();
        prop_assert!((c.eval(q, k) - direct).abs() <= 1e-9 * direct.abs().max(1.0));
    }
}
