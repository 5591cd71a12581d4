//! Seeded property and oracle suites. Each suite returns a verdict with one
//! entry per check; a verdict passes only when every check does.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convention::Convention;
use crate::eoq::{self, EoqParams};
use crate::error::{Error, Result};
use crate::fuzzy::{self, TrapezoidalFuzzy};
use crate::horizon::{self, HorizonParams};
use crate::oracle::mc::{empirical_mse, Estimator, Mode};
use crate::oracle::numeric::{grid_min, grid_points};
use crate::oracle::population::{generate_population, SyntheticPopulation, Targets};
use crate::srs::ClassicalId;
use crate::stats::SrsSummary;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    SamplingMc,
    Fuzzy,
    Eoq,
    Horizon,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["sampling-mc", "fuzzy", "eoq", "horizon", "all"];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::SamplingMc => "sampling-mc",
            Suite::Fuzzy => "fuzzy",
            Suite::Eoq => "eoq",
            Suite::Horizon => "horizon",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sampling-mc" => Suite::SamplingMc,
            "fuzzy" => Suite::Fuzzy,
            "eoq" => Suite::Eoq,
            "horizon" => Suite::Horizon,
            "all" => Suite::All,
            _ => return Err(Error::InvalidInput(format!("unknown suite '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Observed statistic, compared against `threshold`.
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `value <= threshold`.
    fn at_most(name: &str, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: value <= threshold, value, threshold, detail: detail.into() }
    }

    /// Passes when `value > threshold`.
    fn above(name: &str, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: value > threshold, value, threshold, detail: detail.into() }
    }

    fn failed(name: &str, err: &Error) -> Self {
        Check { name: name.into(), passed: false, value: f64::NAN, threshold: f64::NAN, detail: err.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Verdict {
    fn new(suite: Suite, seed: u64, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Verdict { suite: suite.as_str().into(), seed, checks, passed }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serialises")
    }

    /// One line per check, `name,passed,value,threshold`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,check,passed,value,threshold\n");
        for c in &self.checks {
            out.push_str(&format!("{},{},{},{},{}\n", self.suite, c.name, c.passed, c.value, c.threshold));
        }
        out
    }
}

/// Runs `suite` with every random stream derived from `seed`.
pub fn run(suite: Suite, seed: u64) -> Verdict {
    let checks = match suite {
        Suite::SamplingMc => sampling_mc(seed),
        Suite::Fuzzy => fuzzy_identities(seed),
        Suite::Eoq => eoq_checks(seed),
        Suite::Horizon => horizon_checks(seed),
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::SamplingMc, Suite::Fuzzy, Suite::Eoq, Suite::Horizon] {
                all.extend(run(s, seed).checks.into_iter().map(|c| Check { name: format!("{s}/{}", c.name), ..c }));
            }
            all
        }
    };
    Verdict::new(suite, seed, checks)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn unwrap_check(name: &str, r: Result<Check>) -> Check {
    r.unwrap_or_else(|e| Check::failed(name, &e))
}

// ---------------------------------------------------------------- sampling

pub const MC_REPLICATES: usize = 100_000;

/// Target profile of the synthetic population for the ratio-estimator check.
pub fn mc_targets() -> SrsSummary {
    SrsSummary { big_n: 200, n: 40, mean_y: 50.0, mean_x: 40.0, c_y: 0.5, c_x: 0.45, rho: 0.9 }
}

fn sampling_mc(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let targets = mc_targets();
    match generate_population(&Targets::Srs(targets), seed) {
        Ok(pop) => {
            checks.push(Check::at_most(
                "generator-rho",
                pop.rho_gap(&Targets::Srs(targets)),
                crate::oracle::population::RHO_TOL,
                format!("N = {}, target rho = {}", pop.len(), targets.rho),
            ));
            checks.push(unwrap_check("ratio-mc-vs-formula", ratio_vs_formula(&pop, targets.n as usize, seed)));
            checks.push(unwrap_check("mean-mc-unbiased", mean_unbiased(&pop, targets.n as usize, seed)));
        }
        Err(e) => checks.push(Check::failed("generator-rho", &e)),
    }
    checks.push(unwrap_check("enumeration-vs-brute-force", enumeration_vs_brute_force()));
    checks.push(unwrap_check("mean-enumeration-exact", mean_enumeration_exact()));
    checks
}

fn achieved_summary(pop: &SyntheticPopulation, n: usize) -> SrsSummary {
    crate::oracle::population::summarize_pair(&pop.y, &pop.x, n as u64)
}

fn ratio_vs_formula(pop: &SyntheticPopulation, n: usize, seed: u64) -> Result<Check> {
    let s = achieved_summary(pop, n);
    let cfg = ClassicalId::T1.config(&s);
    let formula = cfg.mse(&s);
    let mc = empirical_mse(pop, &Estimator::Family(cfg), n, MC_REPLICATES, seed, Mode::MonteCarlo)?;
    Ok(Check::at_most(
        "ratio-mc-vs-formula",
        rel(mc.mse, formula),
        0.10,
        format!("empirical {:.6} vs first-order {:.6} over {} draws", mc.mse, formula, mc.draws),
    ))
}

fn mean_unbiased(pop: &SyntheticPopulation, n: usize, seed: u64) -> Result<Check> {
    let s = achieved_summary(pop, n);
    let exact = s.lambda() * (s.c_y * s.mean_y).powi(2);
    let mc = empirical_mse(pop, &Estimator::Mean, n, MC_REPLICATES, seed ^ 0x5eed, Mode::MonteCarlo)?;
    // Standard error of the MSE estimate itself.
    let z = (mc.mse - exact).abs() / mc.stderr.max(f64::MIN_POSITIVE);
    Ok(Check::at_most(
        "mean-mc-unbiased",
        z,
        3.0,
        format!("empirical {:.6} vs exact {:.6} (stderr {:.3e})", mc.mse, exact, mc.stderr),
    ))
}

/// Small fixed population for exhaustive checks.
fn tiny_population() -> Result<SyntheticPopulation> {
    SyntheticPopulation::from_values(
        vec![12.0, 15.0, 9.0, 20.0, 17.0, 11.0],
        vec![30.0, 34.0, 25.0, 41.0, 38.0, 27.0],
        2,
    )
}

fn enumeration_vs_brute_force() -> Result<Check> {
    let pop = tiny_population()?;
    let big_x = pop.x.iter().sum::<f64>() / 6.0;
    let truth = pop.mean_y();
    let mut sq = 0.0;
    let mut count = 0.0;
    for i in 0..6 {
        for j in (i + 1)..6 {
            let yb = (pop.y[i] + pop.y[j]) / 2.0;
            let xb = (pop.x[i] + pop.x[j]) / 2.0;
            sq += (yb * big_x / xb - truth).powi(2);
            count += 1.0;
        }
    }
    let brute = sq / count;
    let s = achieved_summary(&pop, 2);
    let est = Estimator::Family(ClassicalId::T1.config(&s));
    let en = empirical_mse(&pop, &est, 2, 0, 0, Mode::Exhaustive)?;
    Ok(Check::at_most(
        "enumeration-vs-brute-force",
        rel(en.mse, brute),
        1e-12,
        format!("enumerated {} samples: {:.12} vs {:.12}", en.draws, en.mse, brute),
    ))
}

fn mean_enumeration_exact() -> Result<Check> {
    let pop = tiny_population()?;
    let s = achieved_summary(&pop, 2);
    let exact = s.lambda() * (s.c_y * s.mean_y).powi(2);
    let en = empirical_mse(&pop, &Estimator::Mean, 2, 0, 0, Mode::Exhaustive)?;
    Ok(Check::at_most("mean-enumeration-exact", rel(en.mse, exact), 1e-12, "sample mean over all C(6, 2) samples"))
}

// ---------------------------------------------------------------- fuzzy

pub const FUZZY_TRIALS: usize = 10_000;

fn random_trapezoid(rng: &mut ChaCha8Rng) -> TrapezoidalFuzzy {
    let c = rng.gen_range(0.1..100.0);
    let a = c + rng.gen_range(0.0..10.0);
    let b = a + rng.gen_range(0.0..10.0);
    let d = b + rng.gen_range(0.0..10.0);
    TrapezoidalFuzzy::new(c, a, b, d)
}

fn max_gap(x: [f64; 4], y: [f64; 4]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs() / (1.0 + b.abs())).fold(0.0, f64::max)
}

fn fuzzy_identities(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut lin, mut arith, mut collapse, mut shape, mut integral, mut member) = (0.0f64, 0.0f64, 0.0f64, 0usize, 0.0f64, 0usize);
    for _ in 0..FUZZY_TRIALS {
        let x = random_trapezoid(&mut rng);
        let y = random_trapezoid(&mut rng);
        let k: f64 = rng.gen_range(0.01..10.0);
        let gm = |t: &TrapezoidalFuzzy| fuzzy::graded_mean(t);

        // Graded-mean linearity.
        lin = lin
            .max(rel(gm(&(x + y)), gm(&x) + gm(&y)))
            .max((gm(&(x - y)) - (gm(&x) - gm(&y))).abs() / (1.0 + gm(&x) + gm(&y)))
            .max(rel(gm(&x.scale(k)), k * gm(&x)));

        // Componentwise arithmetic of positive trapezoids.
        let (xa, ya) = (x.to_array(), y.to_array());
        let Ok(q) = x.div(y) else {
            shape += 1;
            continue;
        };
        arith = arith
            .max(max_gap((x + y).to_array(), std::array::from_fn(|i| xa[i] + ya[i])))
            .max(max_gap((x - y).to_array(), std::array::from_fn(|i| xa[i] - ya[3 - i])))
            .max(max_gap((x * y).to_array(), std::array::from_fn(|i| xa[i] * ya[i])))
            .max(max_gap(q.to_array(), std::array::from_fn(|i| xa[i] / ya[3 - i])));
        shape += [x + y, x - y, x * y, q].iter().filter(|t| !t.is_canonical()).count();

        // Crisp numbers collapse to ordinary arithmetic.
        let (u, v) = (x.c, y.d);
        let (cu, cv) = (TrapezoidalFuzzy::crisp(u), TrapezoidalFuzzy::crisp(v));
        let cq = cu.div(cv).map(|t| t.to_array()).unwrap_or([f64::NAN; 4]);
        collapse = collapse
            .max(max_gap((cu + cv).to_array(), [u + v; 4]))
            .max(max_gap((cu - cv).to_array(), [u - v; 4]))
            .max(max_gap((cu * cv).to_array(), [u * v; 4]))
            .max(max_gap(cq, [u / v; 4]))
            .max((gm(&cu) - u).abs() / (1.0 + u.abs()));
        if collapse.is_nan() {
            collapse = f64::INFINITY;
        }

        // Closed-form graded mean against its defining integral.
        integral = integral.max(match fuzzy::graded_mean_integral(&x, 1e-12) {
            Ok(v) => rel(v, gm(&x)),
            Err(_) => f64::INFINITY,
        });

        // Membership is one on the core and zero outside the support.
        let core = x.a + (x.b - x.a) * rng.gen::<f64>();
        let ok = fuzzy::membership(core, &x).map_or(false, |m| m == 1.0)
            && fuzzy::membership(x.c - 1.0, &x).map_or(false, |m| m == 0.0)
            && fuzzy::membership(x.d + 1.0, &x).map_or(false, |m| m == 0.0);
        member += usize::from(!ok);
    }
    let detail = format!("{FUZZY_TRIALS} randomized trials");
    vec![
        Check::at_most("graded-mean-linearity", lin, 1e-12, detail.clone()),
        Check::at_most("componentwise-arithmetic", arith, 1e-12, detail.clone()),
        Check::at_most("shape-preserved", shape as f64, 0.0, "non-canonical results of +, -, *, /"),
        Check::at_most("crisp-collapse", collapse, 1e-12, detail.clone()),
        Check::at_most("graded-mean-integral", integral, 1e-9, detail.clone()),
        Check::at_most("membership-core-support", member as f64, 0.0, detail),
    ]
}

// ---------------------------------------------------------------- eoq

pub const EOQ_DRAWS: usize = 1000;
const EOQ_GRID_STEP: f64 = 0.01;
const EOQ_BOX: f64 = 5.0;

/// Bundled crisp example with `Ct*` backed out from the reported quantity.
pub fn eoq_example() -> Result<(EoqParams, crate::eoq::FuzzyEoqParams)> {
    let fx = crate::repro::fixtures::eoq()?;
    let mut crisp = fx.scenario.crisp_params();
    let cs = crisp.Ct_star.unwrap_or_else(|| eoq::implied_ct_star(&crisp, fx.reported_no_release_q));
    crisp.Ct_star = Some(cs);
    let mut fz = fx.scenario.fuzzy_params();
    fz.Ct_star = Some(cs);
    Ok((crisp, fz))
}

/// Grid minimum of `f(Q, K)` over a box around `(q, k)` clipped to
/// `Q >= w`, `0 < K <= w`.
fn local_grid(f: impl Fn(f64, f64) -> f64 + Sync, q: f64, k: f64, w: f64) -> Result<f64> {
    let snap = |v: f64| (v / EOQ_GRID_STEP).round() * EOQ_GRID_STEP;
    let qs = grid_points(snap((q - EOQ_BOX).max(w)), snap(q + EOQ_BOX), EOQ_GRID_STEP);
    let ks: Vec<f64> = grid_points(snap((k - EOQ_BOX).max(EOQ_GRID_STEP)), snap((k + EOQ_BOX).min(w)), EOQ_GRID_STEP)
        .into_iter()
        .filter(|&v| v > 0.0 && v <= w)
        .collect();
    let qs: Vec<f64> = qs.into_iter().filter(|&v| v >= w).collect();
    Ok(grid_min(|p| f(p[0], p[1]), &[qs, ks])?.min)
}

fn grid_minimal(name: &str, solved: f64, grid: f64) -> Check {
    Check::at_most(
        name,
        (solved - grid) / grid.abs().max(1.0),
        1e-6,
        format!("solver {solved:.9} vs 0.01-grid {grid:.9}"),
    )
}

fn eoq_grid_checks() -> Result<Vec<Check>> {
    let (crisp, fz) = eoq_example()?;
    let mut out = Vec::new();

    let s = eoq::solve_crisp(&crisp)?;
    let g = local_grid(|q, k| eoq::crisp_cost(q, k, &crisp).unwrap_or(f64::INFINITY), s.Q, s.K.unwrap_or(crisp.W), crisp.W)?;
    out.push(grid_minimal("crisp-grid-minimal", s.cost, g));

    for conv in [Convention::StrictPrint, Convention::SignConsistent] {
        let s = eoq::solve_fuzzy(&fz, conv)?;
        let w = fz.capacity();
        let g = local_grid(
            |q, k| eoq::fuzzy_cost(q, k, &fz, conv).map_or(f64::INFINITY, |c| c.1),
            s.Q,
            s.K.unwrap_or(w),
            w,
        )?;
        out.push(grid_minimal(&format!("fuzzy-grid-minimal-{}", conv.as_str()), s.cost, g));
    }

    let s = eoq::solve_no_release(&crisp.to_fuzzy(), Convention::StrictPrint)?;
    let qs: Vec<f64> = grid_points(crisp.W, s.Q + EOQ_BOX, EOQ_GRID_STEP);
    let g = qs
        .iter()
        .map(|&q| eoq::crisp_cost_no_release(q, &crisp).unwrap_or(f64::INFINITY))
        .fold(f64::INFINITY, f64::min);
    out.push(grid_minimal("no-release-grid-minimal", s.cost, g));
    Ok(out)
}

fn random_eoq(rng: &mut ChaCha8Rng) -> (EoqParams, f64, f64) {
    let h = rng.gen_range(0.5..10.0);
    let w = rng.gen_range(10.0..500.0);
    let p = EoqParams {
        D: rng.gen_range(100.0..10_000.0),
        A: rng.gen_range(10.0..500.0),
        F: h + rng.gen_range(0.01..5.0),
        H: h,
        W: w,
        Ct: rng.gen_range(0.01..2.0),
        Ct_star: Some(rng.gen_range(0.01..3.0)),
    };
    let q = w + rng.gen_range(0.1..1000.0);
    let k = rng.gen_range(0.1..w);
    (p, q, k)
}

fn eoq_identity(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..EOQ_DRAWS {
        let (p, q, k) = random_eoq(&mut rng);
        let (Ok(with), Ok(without)) = (eoq::crisp_cost(q, k, &p), eoq::crisp_cost_no_release(q, &p)) else {
            worst = f64::INFINITY;
            continue;
        };
        let cs = p.Ct_star.unwrap_or(0.0);
        let rhs = (1.0 - p.W / q) * (p.D * (cs - p.Ct / k) - k / 2.0 * (p.F - p.H));
        let scale = with.abs().max(without.abs()).max(1.0);
        worst = worst.max(((without - with) - rhs).abs() / scale);
    }
    Check::at_most("release-saving-identity", worst, 1e-9, format!("{EOQ_DRAWS} random parameter draws"))
}

fn eoq_crossing(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut wrong = 0usize;
    for _ in 0..EOQ_DRAWS {
        let (mut p, q, k) = random_eoq(&mut rng);
        let be = eoq::break_even_ct_star(&p, k);
        p.Ct_star = Some(be);
        let zero = eoq::crisp_cost_no_release(q, &p).unwrap_or(f64::NAN) - eoq::crisp_cost(q, k, &p).unwrap_or(f64::NAN);
        let scale = eoq::crisp_cost(q, k, &p).unwrap_or(f64::NAN).abs().max(1.0);
        let eps = 1e-6 * be.max(1.0);
        p.Ct_star = Some(be + eps);
        let above = eoq::k_release_economical(&p, k).unwrap_or(false);
        p.Ct_star = Some(be - eps);
        let below = eoq::k_release_economical(&p, k).unwrap_or(true);
        if !(above && !below && zero.abs() <= 1e-9 * scale) {
            wrong += 1;
        }
    }
    Check::at_most("ct-star-crossing", wrong as f64, 0.0, "release rule switches at the break-even Ct*")
}

fn eoq_checks(seed: u64) -> Vec<Check> {
    let mut out = eoq_grid_checks().unwrap_or_else(|e| vec![Check::failed("grid-minimal", &e)]);
    out.push(eoq_identity(seed));
    out.push(eoq_crossing(seed));
    out
}

// ---------------------------------------------------------------- horizon

pub const GA_SEEDS: u64 = 10;
const HORIZON_GRID_STEP: f64 = 0.001;

fn ode_residuals(p: &HorizonParams, c: &horizon::trajectory::Cycle) -> Result<f64> {
    let (tr, t1, tt) = (c.t_r, c.t1, c.T);
    let h = 1e-5;
    let mut worst = 0.0f64;
    let mut probe = |lo: f64, hi: f64, q: &dyn Fn(f64) -> Result<f64>, rhs: &dyn Fn(f64, f64) -> f64| -> Result<()> {
        for i in 1..50 {
            let t = lo + (hi - lo) * i as f64 / 50.0;
            if t - h <= lo || t + h >= hi {
                continue;
            }
            let d = (q(t + h)? - q(t - h)?) / (2.0 * h);
            let r = rhs(t, q(t)?);
            worst = worst.max((d - r).abs() / (1.0 + r.abs()));
        }
        Ok(())
    };
    let rw = |t: f64| horizon::inventory_rw(t, p, tr);
    let ow = |t: f64| horizon::inventory_ow(t, p, tr, t1);
    let sh = |t: f64| Ok(horizon::shortage_level(t, p, t1, tt));
    probe(0.0, p.mu2.min(tr), &rw, &|_, q| -p.a - p.b * q)?;
    probe(p.mu2, tr, &rw, &|_, q| -p.a - p.theta() * q)?;
    probe(0.0, p.mu1, &ow, &|_, _| 0.0)?;
    probe(p.mu1, tr, &ow, &|_, q| -p.alpha * q)?;
    probe(tr, t1, &ow, &|_, q| -p.a - p.phi() * q)?;
    probe(t1, tt, &sh, &|t, _| -p.a * (1.0 - p.delta * (tt - t)))?;
    Ok(worst)
}

fn boundary_gaps(p: &HorizonParams, c: &horizon::trajectory::Cycle) -> Result<f64> {
    let (tr, t1, tt) = (c.t_r, c.t1, c.T);
    let theta = p.theta();
    let phi = p.phi();
    let rw_left_mu2 = c.W2 * (-p.b * p.mu2).exp() - p.a * (1.0 - (-p.b * p.mu2).exp()) / p.b;
    let rw_right_mu2 = p.a / theta * (theta * (tr - p.mu2)).exp_m1();
    let ow_left_tr = p.W1 * (p.alpha * (p.mu1 - tr)).exp();
    let ow_right_tr = p.a / phi * (phi * (t1 - tr)).exp_m1();
    let gaps = [
        horizon::inventory_rw(0.0, p, tr)? - c.W2,
        horizon::inventory_rw(tr, p, tr)?,
        rw_left_mu2 - rw_right_mu2,
        horizon::inventory_ow(p.mu1, p, tr, t1)? - p.W1,
        ow_left_tr - ow_right_tr,
        horizon::inventory_ow(t1, p, tr, t1)?,
        horizon::shortage_level(t1, p, t1, tt),
        c.S - (p.W1 + c.W2),
    ];
    Ok(gaps.iter().map(|g| g.abs() / (1.0 + p.W1.max(c.W2))).fold(0.0, f64::max))
}

fn horizon_checks(seed: u64) -> Vec<Check> {
    let p = HorizonParams::example1();
    let mut out = Vec::new();

    let opt = match horizon::optimize(&p) {
        Ok(o) => o.policy,
        Err(e) => return vec![Check::failed("optimize", &e)],
    };
    let policies = [(opt.m, opt.k), (1, 0.8), (2, 0.6), (opt.m + 1, 0.7)];

    let mut ode = 0.0f64;
    let mut bnd = 0.0f64;
    let mut quad = 0.0f64;
    for (m, k) in policies {
        let r = horizon::trajectory::cycle(&p, m, k).and_then(|c| {
            let o = ode_residuals(&p, &c)?;
            let b = boundary_gaps(&p, &c)?;
            let closed = horizon::total_cost(m, k, &p)?.components;
            let num = horizon::components_by_quadrature(&p, &c, 1e-11)?;
            let q = closed
                .as_array()
                .iter()
                .zip(num.as_array())
                .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
                .fold(0.0, f64::max);
            Ok((o, b, q))
        });
        match r {
            Ok((o, b, q)) => {
                ode = ode.max(o);
                bnd = bnd.max(b);
                quad = quad.max(q);
            }
            Err(_) => {
                ode = f64::INFINITY;
                bnd = f64::INFINITY;
                quad = f64::INFINITY;
            }
        }
    }
    let at = format!("policies {policies:?}");
    out.push(Check::at_most("ode-residuals", ode, 1e-5, at.clone()));
    out.push(Check::at_most("boundary-continuity", bnd, 1e-9, at.clone()));
    out.push(Check::at_most("components-vs-quadrature", quad, 1e-6, at));

    let mut worst_d2 = f64::INFINITY;
    let mut roots = 0;
    for m in 1..=opt.m + 2 {
        if let Ok(s) = horizon::solve_k(m, &p) {
            if s.converged {
                roots += 1;
                worst_d2 = worst_d2.min(s.d2tc);
            }
        }
    }
    out.push(Check::above("second-derivative-at-roots", worst_d2, 0.0, format!("{roots} stationary roots, m <= {}", opt.m + 2)));

    match horizon::exhaustive_grid(&p, opt.m + 10, HORIZON_GRID_STEP) {
        Some((gm, gk, gtc)) => out.push(Check::at_most(
            "optimize-vs-grid",
            rel(opt.TC, gtc),
            1e-3,
            format!("optimize m={} k={:.6} TC={:.6}; grid m={gm} k={gk:.3} TC={gtc:.6}", opt.m, opt.k, opt.TC),
        )),
        None => out.push(Check::failed("optimize-vs-grid", &Error::Infeasible("empty grid".into()))),
    }

    let mut worst_ga = 0.0f64;
    for s in 0..GA_SEEDS {
        let cfg = horizon::GaConfig { seed: seed.wrapping_add(s), ..Default::default() };
        worst_ga = worst_ga.max(match horizon::ga_optimize(&p, &cfg) {
            Ok(r) => rel(r.best.TC, opt.TC),
            Err(_) => f64::INFINITY,
        });
    }
    out.push(Check::at_most("ga-vs-optimize", worst_ga, 0.01, format!("{GA_SEEDS} seeds from {seed}")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for n in Suite::NAMES {
            assert_eq!(n.parse::<Suite>().unwrap().as_str(), n);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn fuzzy_suite_passes() {
        let v = run(Suite::Fuzzy, 11);
        assert!(v.passed, "{}", v.to_json());
    }
}
