//! Empirical MSE of an estimator under SRSWOR, by Monte Carlo or by
//! exhaustive enumeration of all samples when that is cheap.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::attribute::{AttrClassConfig, WeightTriple};
use crate::error::{Error, Result};
use crate::oracle::population::{mean, SyntheticPopulation};
use crate::srs::FamilyConfig;

/// Enumeration replaces Monte Carlo up to this many samples.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;
pub const MIN_REPLICATES: usize = 10_000;
/// Largest tolerated share of draws on which the estimator is undefined.
pub const DEGENERATE_SHARE: f64 = 1e-3;
const CHUNK: usize = 4096;

/// Estimator expressions evaluated on a drawn sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Estimator {
    Mean,
    Family(FamilyConfig),
    AttrT1(AttrClassConfig),
    AttrT2(AttrClassConfig),
    AttrCombination { cfg: AttrClassConfig, w: WeightTriple },
    /// Exponential-regression form with two auxiliaries; needs `z`.
    Tp { m1: f64, m2: f64, b1: f64, b2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Auto,
    MonteCarlo,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McResult {
    pub mse: f64,
    pub bias: f64,
    pub stderr: f64,
    pub draws: usize,
    pub degenerate: usize,
    pub exhaustive: bool,
    pub warning: Option<String>,
}

struct Means {
    big_x: f64,
    big_z: f64,
}

fn evaluate(est: &Estimator, pop: &SyntheticPopulation, m: &Means, idx: &[usize]) -> f64 {
    let ybar = idx.iter().map(|&i| pop.y[i]).sum::<f64>() / idx.len() as f64;
    let xbar = || idx.iter().map(|&i| pop.x[i]).sum::<f64>() / idx.len() as f64;
    match est {
        Estimator::Mean => ybar,
        Estimator::Family(c) => c.estimate(ybar, xbar(), m.big_x),
        Estimator::AttrT1(c) => c.estimate_t1(ybar, xbar(), m.big_x),
        Estimator::AttrT2(c) => c.estimate_t2(ybar, xbar(), m.big_x),
        Estimator::AttrCombination { cfg, w } => {
            let p = xbar();
            w.w0 * ybar + w.w1 * cfg.estimate_t1(ybar, p, m.big_x) + w.w2 * cfg.estimate_t2(ybar, p, m.big_x)
        }
        Estimator::Tp { m1, m2, b1, b2 } => {
            let z = pop.z.as_ref().expect("checked before sampling");
            let zbar = idx.iter().map(|&i| z[i]).sum::<f64>() / idx.len() as f64;
            let x = xbar();
            ybar * (m1 * (m.big_x - x) / (m.big_x + x)).exp() * (m2 * (m.big_z - zbar) / (m.big_z + zbar)).exp()
                + b1 * (m.big_x - x)
                + b2 * (m.big_z - zbar)
        }
    }
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn aggregate(values: &[Option<f64>], truth: f64, exhaustive: bool) -> Result<McResult> {
    let draws = values.len();
    let ok: Vec<f64> = values.iter().flatten().copied().collect();
    let degenerate = draws - ok.len();
    if ok.is_empty() {
        return Err(Error::Domain("estimator undefined on every draw".into()));
    }
    let share = degenerate as f64 / draws as f64;
    if share >= DEGENERATE_SHARE {
        return Err(Error::Domain(format!("estimator undefined on {degenerate} of {draws} draws")));
    }
    let warning = (degenerate > 0).then(|| format!("{degenerate} degenerate draws excluded"));
    let k = ok.len() as f64;
    let sq: Vec<f64> = ok.iter().map(|v| (v - truth).powi(2)).collect();
    let mse = sq.iter().sum::<f64>() / k;
    let bias = ok.iter().map(|v| v - truth).sum::<f64>() / k;
    let stderr = if exhaustive {
        0.0
    } else {
        (sq.iter().map(|s| (s - mse).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
    };
    Ok(McResult { mse, bias, stderr, draws, degenerate, exhaustive, warning })
}

/// Empirical MSE, bias and standard error of `est` at sample size `n`.
/// Replicate `i` draws from ChaCha stream `i / CHUNK` of `seed`, so results
/// do not depend on thread scheduling.
pub fn empirical_mse(
    pop: &SyntheticPopulation,
    est: &Estimator,
    n: usize,
    replicates: usize,
    seed: u64,
    mode: Mode,
) -> Result<McResult> {
    let big_n = pop.len();
    if !(n >= 1 && n < big_n) {
        return Err(Error::InvalidInput(format!("need 1 <= n < N (n={n}, N={big_n})")));
    }
    if matches!(est, Estimator::Tp { .. }) && pop.z.is_none() {
        return Err(Error::InvalidInput("t_p needs a second auxiliary".into()));
    }
    let means = Means { big_x: mean(&pop.x), big_z: pop.z.as_deref().map_or(f64::NAN, mean) };
    let truth = pop.mean_y();
    let finite = |v: f64| v.is_finite().then_some(v);

    let combos = binomial(big_n as u64, n as u64);
    let exhaustive = match mode {
        Mode::Exhaustive => true,
        Mode::MonteCarlo => false,
        Mode::Auto => combos <= ENUMERATION_LIMIT,
    };
    if exhaustive {
        if combos > ENUMERATION_LIMIT {
            return Err(Error::InvalidInput(format!("{combos} samples exceed the enumeration limit")));
        }
        let mut idx: Vec<usize> = (0..n).collect();
        let mut values = Vec::with_capacity(combos as usize);
        loop {
            values.push(finite(evaluate(est, pop, &means, &idx)));
            if !next_combination(&mut idx, big_n) {
                break;
            }
        }
        return aggregate(&values, truth, true);
    }

    if replicates < MIN_REPLICATES {
        return Err(Error::InvalidInput(format!("at least {MIN_REPLICATES} replicates required")));
    }
    let chunks = replicates.div_ceil(CHUNK);
    let values: Vec<Option<f64>> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(replicates - c * CHUNK);
            let means = &means;
            (0..len)
                .map(move |_| {
                    let idx = sample(&mut rng, big_n, n).into_vec();
                    finite(evaluate(est, pop, means, &idx))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    aggregate(&values, truth, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(200, 20) > ENUMERATION_LIMIT, true);
    }

    #[test]
    fn enumeration_count() {
        let mut idx = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut idx, 6) {
            count += 1;
        }
        assert_eq!(count, 15);
    }

    #[test]
    fn mean_variance_exact_by_enumeration() {
        let y = vec![3.0, 7.0, 1.0, 9.0, 4.0, 6.0];
        let pop = SyntheticPopulation::from_values(y.clone(), vec![1.0; 6], 2).unwrap();
        let r = empirical_mse(&pop, &Estimator::Mean, 2, 0, 0, Mode::Auto).unwrap();
        let s2 = crate::oracle::population::cov(&y, &y);
        assert!(r.exhaustive);
        assert!((r.mse - (0.5 - 1.0 / 6.0) * s2).abs() < 1e-12);
        assert!(r.bias.abs() < 1e-12);
    }
}
