use proptest::prelude::*;
use survopt::repro::fixtures;
use survopt::srs::{mse_classical, mse_dual, solve_tm, tm_mse_at, ClassicalId, FamilyConfig, TmConfig};
use survopt::stats::SrsSummary;

fn close(a: f64, b: f64, tol: f64) -> bool {
    ((a - b) / b).abs() <= tol
}

#[test]
fn printed_population_one_mses() {
    let s = fixtures::srs().unwrap().pop1;
    assert!(close(mse_classical(ClassicalId::T0, &s), 5411349.0, 0.005));
    assert!(close(mse_classical(ClassicalId::T1, &s), 2542740.0, 0.005));
    assert!(close(mse_classical(ClassicalId::T3, &s), 2542893.0, 0.005));
    assert!(close(mse_dual(1, &s).unwrap(), 137519.8, 0.005));
}

#[test]
fn tm_optimum_beats_neighbours() {
    let s = fixtures::srs().unwrap().pop1;
    let cfg = TmConfig { psi: 1.0, delta: 1.0, omega: 1.0, mu: 1.0, alpha: 1.0, beta: 1.0 };
    let sol = solve_tm(&cfg, &s).unwrap();
    assert!((tm_mse_at(&sol.T, s.mean_y, sol.m1, sol.m2) - sol.mse).abs() <= 1e-9 * sol.mse);
    for d in [1e-3, -1e-3] {
        assert!(tm_mse_at(&sol.T, s.mean_y, sol.m1 + d, sol.m2) >= sol.mse);
        assert!(tm_mse_at(&sol.T, s.mean_y, sol.m1, sol.m2 + d) >= sol.mse);
    }
}

fn summary() -> impl Strategy<Value = SrsSummary> {
    (10u64..1000, 0.05f64..0.5, 1.0f64..1e4, 1.0f64..1e4, 0.05f64..2.0, 0.05f64..2.0, -0.99f64..0.99).prop_map(
        |(big_n, frac, mean_y, mean_x, c_y, c_x, rho)| SrsSummary {
            big_n,
            n: ((big_n as f64 * frac) as u64).clamp(2, big_n - 1),
            mean_y,
            mean_x,
            c_y,
            c_x,
            rho,
        },
    )
}

proptest! {
    #[test]
    fn family_mse_matches_closed_forms(s in summary()) {
        let var = s.lambda() * (s.c_y * s.mean_y).powi(2);
        prop_assert!((mse_classical(ClassicalId::T0, &s) - var).abs() <= 1e-9 * var);
        // Ratio: lambda Y^2 (Cy^2 + Cx^2 - 2 rho Cy Cx).
        let ratio = s.lambda() * s.mean_y.powi(2) * (s.c_y.powi(2) + s.c_x.powi(2) - 2.0 * s.c_yx());
        prop_assert!((mse_classical(ClassicalId::T1, &s) - ratio).abs() <= 1e-9 * var.max(ratio.abs()));
        // The optimum over the family scale g alpha v equals the regression bound.
        let bound = var * (1.0 - s.rho * s.rho);
        let g = s.rho * s.c_y / s.c_x;
        let best = FamilyConfig { a_coef: 1.0, b_coef: 0.0, alpha: 1.0, g }.mse(&s);
        prop_assert!((best - bound).abs() <= 1e-9 * var);
    }
}
