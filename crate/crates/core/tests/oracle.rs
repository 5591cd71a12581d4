use survopt::oracle::mc::{binomial, empirical_mse, Estimator, Mode};
use survopt::oracle::population::{generate_population, summarize_pair, SyntheticPopulation, Targets};
use survopt::srs::ClassicalId;
use survopt::stats::SrsSummary;

/// Ratio-estimator MSE over all 15 samples, computed with itertools/numpy.
const RATIO_ENUM: f64 = 0.7239190425101114;

fn tiny() -> SyntheticPopulation {
    SyntheticPopulation::from_values(
        vec![12.0, 15.0, 9.0, 20.0, 17.0, 11.0],
        vec![30.0, 34.0, 25.0, 41.0, 38.0, 27.0],
        2,
    )
    .unwrap()
}

#[test]
fn enumeration_matches_independent_value() {
    let pop = tiny();
    let s = summarize_pair(&pop.y, &pop.x, 2);
    let r = empirical_mse(&pop, &Estimator::Family(ClassicalId::T1.config(&s)), 2, 0, 0, Mode::Auto).unwrap();
    assert!(r.exhaustive);
    assert_eq!(r.draws, 15);
    assert!((r.mse - RATIO_ENUM).abs() <= 1e-12);
}

#[test]
fn binomial_values() {
    assert_eq!(binomial(6, 2), 15);
    assert_eq!(binomial(10, 3), 120);
    assert_eq!(binomial(52, 5), 2_598_960);
}

#[test]
fn monte_carlo_is_seed_deterministic() {
    let targets = SrsSummary { big_n: 60, n: 10, mean_y: 20.0, mean_x: 10.0, c_y: 0.4, c_x: 0.3, rho: 0.7 };
    let pop = generate_population(&Targets::Srs(targets), 5).unwrap();
    assert_eq!(pop, generate_population(&Targets::Srs(targets), 5).unwrap());
    let run = |seed| empirical_mse(&pop, &Estimator::Mean, 10, 10_000, seed, Mode::MonteCarlo).unwrap();
    assert_eq!(run(1), run(1));
    assert_ne!(run(1).mse, run(2).mse);
}

#[test]
fn too_few_replicates_rejected() {
    let pop = tiny();
    assert!(empirical_mse(&pop, &Estimator::Mean, 2, 10, 0, Mode::MonteCarlo).is_err());
    assert!(empirical_mse(&pop, &Estimator::Mean, 6, 0, 0, Mode::Auto).is_err());
}
