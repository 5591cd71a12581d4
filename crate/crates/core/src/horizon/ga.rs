//! Real-coded genetic search over `(m, k)` and a replay of table-row field
//! swaps that recomputes the cost of each manipulated row.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cost::total_cost;
use super::solve::{d2tc_dk2, k_min};
use super::{HorizonParams, HorizonPolicy};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum GaMode {
    #[default]
    Standard,
    Replay,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub seed: u64,
    pub m_max: u32,
    pub mode: GaMode,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 30,
            generations: 100,
            crossover_rate: 0.9,
            mutation_rate: 0.1,
            seed: 0,
            m_max: 30,
            mode: GaMode::Standard,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let rate = |r: f64| (0.0..=1.0).contains(&r);
        if self.population_size < 2 || !rate(self.crossover_rate) || !rate(self.mutation_rate) || self.m_max == 0 {
            return Err(Error::Config("need population >= 2, rates in [0, 1], m_max >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaResult {
    pub best: HorizonPolicy,
    /// Best cost after initialisation and after each generation.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Individual {
    m: u32,
    k: f64,
}

const K_LO: f64 = 1e-3;
const K_HI: f64 = 0.999;

fn repair(p: &HorizonParams, mut ind: Individual) -> Individual {
    while ind.m > 1 && k_min(p, ind.m) >= K_HI {
        ind.m -= 1;
    }
    ind.k = ind.k.clamp(K_LO, K_HI).max(k_min(p, ind.m)).min(K_HI);
    ind
}

fn fitness(p: &HorizonParams, ind: &Individual) -> f64 {
    total_cost(ind.m, ind.k, p).map_or(f64::INFINITY, |t| t.tc)
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn tournament(rng: &mut ChaCha8Rng, costs: &[f64]) -> usize {
    let a = rng.gen_range(0..costs.len());
    let b = rng.gen_range(0..costs.len());
    if costs[b] < costs[a] {
        b
    } else {
        a
    }
}

fn argmin(costs: &[f64]) -> usize {
    costs.iter().enumerate().fold(0, |best, (i, &c)| if c < costs[best] { i } else { best })
}

/// Tournament selection, blend crossover on `k`, parent swap on `m`, Gaussian
/// mutation on `k` with a unit step on `m`, and one elite. Each individual of
/// each generation draws from its own ChaCha stream.
pub fn ga_optimize(p: &HorizonParams, cfg: &GaConfig) -> Result<GaResult> {
    p.validate()?;
    cfg.validate()?;
    if cfg.mode == GaMode::Replay {
        return Err(Error::Config("replay mode replays table rows; use replay_rows".into()));
    }
    let n = cfg.population_size;
    let noise = Normal::new(0.0, 0.05).expect("valid sigma");
    let mut pop: Vec<Individual> = (0..n)
        .map(|i| {
            let mut rng = stream(cfg.seed, i as u64);
            repair(p, Individual { m: rng.gen_range(1..=cfg.m_max), k: rng.gen_range(0.01..0.99) })
        })
        .collect();
    let mut costs: Vec<f64> = pop.par_iter().map(|ind| fitness(p, ind)).collect();
    let mut history = vec![costs[argmin(&costs)]];

    for g in 0..cfg.generations {
        let elite = pop[argmin(&costs)];
        let mut next = vec![elite];
        for i in 1..n {
            let mut rng = stream(cfg.seed, ((g + 1) * n + i) as u64);
            let a = pop[tournament(&mut rng, &costs)];
            let b = pop[tournament(&mut rng, &costs)];
            let mut child = a;
            if rng.gen::<f64>() < cfg.crossover_rate {
                let w: f64 = rng.gen_range(-0.25..1.25);
                child.k = w * a.k + (1.0 - w) * b.k;
                if rng.gen::<bool>() {
                    child.m = b.m;
                }
            }
            if rng.gen::<f64>() < cfg.mutation_rate {
                child.k += noise.sample(&mut rng);
            }
            if rng.gen::<f64>() < cfg.mutation_rate {
                child.m = if rng.gen::<bool>() { child.m + 1 } else { child.m.saturating_sub(1) };
                child.m = child.m.clamp(1, cfg.m_max);
            }
            next.push(repair(p, child));
        }
        pop = next;
        costs = pop.par_iter().map(|ind| fitness(p, ind)).collect();
        history.push(costs[argmin(&costs)]);
    }
    let best = pop[argmin(&costs)];
    let cost = total_cost(best.m, best.k, p)?;
    let convex = d2tc_dk2(p, best.m, best.k) > 0.0;
    Ok(GaResult { best: HorizonPolicy::from_cost(&cost, false, convex), history })
}

/// A printed table row; only `m` and `k` determine a policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct TableRow {
    pub m: u32,
    pub k: f64,
    pub t_r: f64,
    pub t1: f64,
    pub T: f64,
    pub Q: f64,
    pub TC: f64,
}

/// One manipulated row with costs recomputed from the model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoRow {
    pub stage: &'static str,
    pub row: TableRow,
    /// Cost at `(m, k)`.
    pub tc_at_k: Option<f64>,
    /// `k` implied by the row's `t1` field and `T = H / m`.
    pub k_from_t1: f64,
    pub tc_at_k_from_t1: Option<f64>,
}

fn demo_row(p: &HorizonParams, stage: &'static str, row: TableRow) -> DemoRow {
    let k_from_t1 = row.t1 / (p.H / row.m as f64);
    let eval = |k: f64| total_cost(row.m, k, p).ok().map(|t| t.tc);
    DemoRow { stage, row, tc_at_k: eval(row.k), k_from_t1, tc_at_k_from_t1: eval(k_from_t1) }
}

/// Replays a crossover that exchanges the `(t_r, t1)` fields of two rows and a
/// mutation that swaps `t_r` and `t1` within the first child. `after_crossover`
/// and `after_mutation` carry the printed costs of the manipulated rows.
pub fn replay_rows(
    p: &HorizonParams,
    parents: [TableRow; 2],
    after_crossover: [f64; 2],
    after_mutation: f64,
) -> Vec<DemoRow> {
    let [a, b] = parents;
    let c0 = TableRow { t_r: b.t_r, t1: b.t1, TC: after_crossover[0], ..a };
    let c1 = TableRow { t_r: a.t_r, t1: a.t1, TC: after_crossover[1], ..b };
    let mutated = TableRow { t_r: c0.t1, t1: c0.t_r, TC: after_mutation, ..c0 };
    vec![
        demo_row(p, "before-crossover", a),
        demo_row(p, "before-crossover", b),
        demo_row(p, "after-crossover", c0),
        demo_row(p, "after-crossover", c1),
        demo_row(p, "after-mutation", mutated),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elitism_is_monotone() {
        let p = HorizonParams::example1();
        let cfg = GaConfig { generations: 15, seed: 3, ..Default::default() };
        let r = ga_optimize(&p, &cfg).unwrap();
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn seeded_runs_repeat() {
        let p = HorizonParams::example1();
        let cfg = GaConfig { generations: 10, seed: 7, ..Default::default() };
        assert_eq!(ga_optimize(&p, &cfg).unwrap(), ga_optimize(&p, &cfg).unwrap());
    }

    #[test]
    fn config_checked() {
        let cfg = GaConfig { population_size: 1, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
