//! Table builders shared by reproduction and the scenario solver. Each
//! returns the module's CSV layout plus keyed values for comparison.

use std::fmt::Write as _;

use super::{fixtures, Computed, Value};
use crate::attribute::{
    appendix_members, bias_mse_t1, bias_mse_t2, bias_tp, mse_tp, solve_weights, solve_weights_two_phase,
    two_phase_bias_mse, two_phase_mse_tp, AttrClassConfig, MemberFamily, TwoPhaseConfig,
};
use crate::convention::Convention;
use crate::eoq::{implied_ct_star, solve_crisp, solve_fuzzy, solve_no_release, EoqSolution};
use crate::error::{Error, Result};
use crate::eoq::{EoqParams, FuzzyEoqParams};
use crate::horizon::{optimize, total_cost, HorizonParams, TableRow};
use crate::srs::{mse_classical, mse_dual, mse_yadav_kadilar, solve_tm, ClassicalId, TmConfig};
use crate::stats::{AttributeSummary, SrsSummary};
use crate::stats::StratifiedPopulation;
use crate::stratified::pre_table;

pub(super) fn compute(table_id: &str, conv: Convention) -> Result<Computed> {
    match table_id {
        "ch1-5.2" => stratified_pre(&fixtures::stratified()?),
        "ch2-4.1" => srs_table(&[Part::Classical, Part::Dual], conv),
        "ch2-4.2" => srs_table(&[Part::Scaled], conv),
        "ch2-4.3" => srs_table(&[Part::Dual, Part::Scaled, Part::Tm], conv),
        "ch3-3.1" => weights(&pair(fixtures::attribute_single_phase()?)),
        "ch3-3.2" => single_phase_pre(&pair(fixtures::attribute_single_phase()?)),
        "ch3-5.2" => two_phase_pre(&pair(fixtures::attribute_two_phase()?), conv),
        "ch3-appendix-a" => members(MemberFamily::ARatio, true),
        "ch3-appendix-b" => members(MemberFamily::BProduct, false),
        "ch3-appendix-c" => members(MemberFamily::CExponential, true),
        "ch4-example" => eoq_fixture(conv),
        "ch5-table1" => {
            let fx = fixtures::horizon()?;
            horizon_rows(&fx.params, &fx.table)
        }
        other => Err(Error::InvalidInput(format!("unknown table id '{other}'"))),
    }
}

fn pair<T>(p: fixtures::Pair<T>) -> [(&'static str, T); 2] {
    [("pop1", p.pop1), ("pop2", p.pop2)]
}

pub fn stratified_pre(pop: &StratifiedPopulation) -> Result<Computed> {
    let mut csv = String::from("estimator,mse,pre\n");
    let mut values = Vec::new();
    for r in pre_table(pop)? {
        let label = r.estimator.label();
        let _ = writeln!(csv, "{label},{},{}", r.mse, r.pre);
        values.push(Value::new(label, "pre", r.pre));
    }
    Ok(Computed { csv, values })
}

#[derive(Clone, Copy, PartialEq)]
enum Part {
    Classical,
    Dual,
    Scaled,
    Tm,
}

/// Odd members target the positively correlated population, even members
/// the negatively correlated one.
fn pop_for(i: usize, pops: &fixtures::Pair<SrsSummary>) -> (&'static str, SrsSummary) {
    if i % 2 == 1 {
        ("pop1", pops.pop1)
    } else {
        ("pop2", pops.pop2)
    }
}

fn srs_table(parts: &[Part], conv: Convention) -> Result<Computed> {
    let pops = fixtures::srs()?;
    let mut csv = String::from("estimator,population,k_or_m1,m2,mse\n");
    let mut values = Vec::new();
    let mut push = |est: String, pop: &str, k: String, m2: String, mse: f64| {
        let _ = writeln!(csv, "{est},{pop},{k},{m2},{mse}");
        values.push(Value::new(est, pop, mse));
    };
    for part in parts {
        match part {
            Part::Classical => {
                for (pop, s) in [("pop1", pops.pop1), ("pop2", pops.pop2)] {
                    push("t0".into(), pop, String::new(), String::new(), mse_classical(ClassicalId::T0, &s));
                }
                for i in 1..=6 {
                    let (pop, s) = pop_for(i, &pops);
                    let id = ClassicalId::from_index(i).expect("1..=6");
                    push(format!("t{i}"), pop, String::new(), String::new(), mse_classical(id, &s));
                }
            }
            Part::Dual => {
                for i in 1..=6 {
                    let (pop, s) = pop_for(i, &pops);
                    push(format!("t*{i}"), pop, String::new(), String::new(), mse_dual(i, &s)?);
                }
            }
            Part::Scaled => {
                for i in 1..=6 {
                    let (pop, s) = pop_for(i, &pops);
                    let (k, mse) = mse_yadav_kadilar(i, &s, conv)?;
                    push(format!("eta*{i}"), pop, k.to_string(), String::new(), mse);
                }
            }
            Part::Tm => {
                for (label, pop, s, sign) in [("tM(1/1)", "pop1", pops.pop1, 1.0), ("tM(-1/-1)", "pop2", pops.pop2, -1.0)] {
                    let cfg = TmConfig { psi: 1.0, delta: 1.0, omega: 1.0, mu: 1.0, alpha: sign, beta: sign };
                    let sol = solve_tm(&cfg, &s)?;
                    push(label.into(), pop, sol.m1.to_string(), sol.m2.to_string(), sol.mse);
                }
            }
        }
    }
    Ok(Computed { csv, values })
}

/// Every family evaluated on one population. Product-type members are used
/// when `rho < 0`, ratio-type otherwise.
pub fn srs_single(label: &str, s: &SrsSummary, conv: Convention) -> Result<Computed> {
    s.validate()?;
    let mut csv = String::from("estimator,population,k_or_m1,m2,mse\n");
    let mut values = Vec::new();
    let mut push = |est: String, k: String, m2: String, mse: f64| {
        let _ = writeln!(csv, "{est},{label},{k},{m2},{mse}");
        values.push(Value::new(est, label, mse));
    };
    for id in ClassicalId::ALL {
        push(format!("t{}", id.index()), String::new(), String::new(), mse_classical(id, s));
    }
    let first = if s.rho < 0.0 { 2 } else { 1 };
    for i in (first..=6).step_by(2) {
        push(format!("t*{i}"), String::new(), String::new(), mse_dual(i, s)?);
    }
    for i in (first..=6).step_by(2) {
        let (k, mse) = mse_yadav_kadilar(i, s, conv)?;
        push(format!("eta*{i}"), k.to_string(), String::new(), mse);
    }
    let sign = if s.rho < 0.0 { -1.0 } else { 1.0 };
    let cfg = TmConfig { psi: 1.0, delta: 1.0, omega: 1.0, mu: 1.0, alpha: sign, beta: sign };
    let sol = solve_tm(&cfg, s)?;
    push("tM".into(), sol.m1.to_string(), sol.m2.to_string(), sol.mse);
    Ok(Computed { csv, values })
}

/// Every constant set to one, as in the optimum rows.
fn unit_config() -> AttrClassConfig {
    AttrClassConfig::default()
}

pub fn weights(pops: &[(&str, AttributeSummary)]) -> Result<Computed> {
    let mut csv = String::from("population,w0,w1,w2,mse,min_mse\n");
    let mut values = Vec::new();
    for &(pop, a) in pops {
        let cfg = unit_config();
        let w = solve_weights(&cfg, &a)?;
        let mse = mse_tp(&w, &cfg, &a)?;
        let _ = writeln!(csv, "{pop},{},{},{},{mse},{}", w.w0, w.w1, w.w2, crate::attribute::min_mse_tp(&a));
        values.push(Value::new("w0", pop, w.w0));
        values.push(Value::new("w1", pop, w.w1));
        values.push(Value::new("w2", pop, w.w2));
    }
    Ok(Computed { csv, values })
}

const MEMBER_HEADER: &str = "member_id,K1,K2,K3,K4,K5,alpha,beta,lambda,bias,mse,pre\n";

fn member_line(csv: &mut String, id: &str, cfg: &AttrClassConfig, bias: f64, mse: f64, pre: f64) {
    let _ = writeln!(
        csv,
        "{id},{},{},{},{},{},{},{},{},{bias},{mse},{pre}",
        cfg.K1, cfg.K2, cfg.K3, cfg.K4, cfg.K5, cfg.alpha, cfg.beta, cfg.lambda
    );
}

fn t1_cfg(k3: f64, alpha: f64) -> AttrClassConfig {
    AttrClassConfig { K1: 1.0, K2: 1.0, K3: k3, K4: 1.0, K5: 0.0, alpha, beta: 0.0, lambda: 0.0 }
}

fn t2_cfg(beta: f64, lambda: f64) -> AttrClassConfig {
    AttrClassConfig { K1: 1.0, K2: 1.0, K3: 0.0, K4: 1.0, K5: 0.0, alpha: 0.0, beta, lambda }
}

pub fn single_phase_pre(pops: &[(&str, AttributeSummary)]) -> Result<Computed> {
    let mut csv = String::from(MEMBER_HEADER);
    let mut values = Vec::new();
    for &(pop, a) in pops {
        a.validate()?;
        let var = a.var_mean();
        let mut row = |label: &str, cfg: AttrClassConfig, (bias, mse): (f64, f64)| {
            let pre = crate::pre(var, mse);
            member_line(&mut csv, &format!("{pop}.{label}"), &cfg, bias, mse, pre);
            values.push(Value::new(label, pop, pre));
        };
        row("mean", t1_cfg(0.0, 0.0), (0.0, var));
        for (label, alpha) in [("ngr", 1.0), ("ngp", -1.0)] {
            let cfg = t1_cfg(0.0, alpha);
            row(label, cfg, bias_mse_t1(&cfg, &a)?);
        }
        for (label, beta, lambda) in [
            ("t1(1/0)", 1.0, 0.0),
            ("t1(-1/0)", -1.0, 0.0),
            ("t2(1/1)", 1.0, 1.0),
            ("t2(1/-1)", 1.0, -1.0),
            ("t2(0/1)", 0.0, 1.0),
            ("t2(0/-1)", 0.0, -1.0),
        ] {
            let cfg = t2_cfg(beta, lambda);
            row(label, cfg, bias_mse_t2(&cfg, &a)?);
        }
        let cfg = unit_config();
        let w = solve_weights(&cfg, &a)?;
        row("optimum", cfg, (bias_tp(&w, &cfg, &a)?, mse_tp(&w, &cfg, &a)?));
    }
    Ok(Computed { csv, values })
}

fn two_phase_cfg(m: f64, n: f64, gamma: f64, k3: f64, k5: f64) -> TwoPhaseConfig {
    TwoPhaseConfig { m_exp: m, n_exp: n, gamma, K1: 1.0, K2: 1.0, K3: k3, K4: 1.0, K5: k5 }
}

/// Member columns reuse `alpha`, `beta`, `lambda` for the exponents `m`, `n`
/// and `gamma`.
fn as_member(c: &TwoPhaseConfig) -> AttrClassConfig {
    AttrClassConfig { K1: c.K1, K2: c.K2, K3: c.K3, K4: c.K4, K5: c.K5, alpha: c.m_exp, beta: c.n_exp, lambda: c.gamma }
}

pub fn two_phase_pre(pops: &[(&str, AttributeSummary)], conv: Convention) -> Result<Computed> {
    let mut csv = String::from(MEMBER_HEADER);
    let mut values = Vec::new();
    for &(pop, a) in pops {
        a.validate()?;
        let var = a.var_mean();
        let mut row = |label: &str, cfg: &TwoPhaseConfig, bias: f64, mse: f64| {
            let pre = crate::pre(var, mse);
            member_line(&mut csv, &format!("{pop}.{label}"), &as_member(cfg), bias, mse, pre);
            values.push(Value::new(label, pop, pre));
        };
        row("mean", &two_phase_cfg(0.0, 0.0, 0.0, 0.0, 0.0), 0.0, var);
        for (label, m) in [("ngr", 1.0), ("ngp", -1.0)] {
            let cfg = two_phase_cfg(m, 0.0, 0.0, 0.0, 0.0);
            let r = two_phase_bias_mse(&cfg, &a, conv)?;
            row(label, &cfg, r.bias_t1d, r.mse_t1d);
        }
        for (label, n, gamma) in [
            ("t1d(1/0)", 1.0, 0.0),
            ("t1d(-1/0)", -1.0, 0.0),
            ("t2d(1/1)", 1.0, 1.0),
            ("t2d(1/-1)", 1.0, -1.0),
            ("t2d(0/1)", 0.0, 1.0),
            ("t2d(0/-1)", 0.0, -1.0),
        ] {
            let cfg = two_phase_cfg(0.0, n, gamma, 0.0, 0.0);
            let r = two_phase_bias_mse(&cfg, &a, conv)?;
            row(label, &cfg, r.bias_t2d, r.mse_t2d);
        }
        let cfg = two_phase_cfg(1.0, 1.0, 1.0, 1.0, 1.0);
        let w = solve_weights_two_phase(&cfg, &a)?;
        let r = two_phase_bias_mse(&cfg, &a, Convention::StrictPrint)?;
        let bias = w.w1 * r.bias_t1d + w.w2 * r.bias_t2d;
        row("optimum", &cfg, bias, two_phase_mse_tp(&w, &cfg, &a)?);
    }
    Ok(Computed { csv, values })
}

fn members(family: MemberFamily, first: bool) -> Result<Computed> {
    let pops = fixtures::attribute_single_phase()?;
    let a: AttributeSummary = if first { pops.pop1 } else { pops.pop2 };
    let mut csv = String::from(MEMBER_HEADER);
    let mut values = Vec::new();
    for m in appendix_members(family, &a) {
        member_line(&mut csv, &m.member_id, &m.cfg, m.bias, m.mse, m.pre);
        values.push(Value::new(m.member_id.clone(), "pre", m.pre));
    }
    Ok(Computed { csv, values })
}

const BACK_SOLVED: &str = "per-unit transport cost back-solved from this value, so agreement is by construction";

fn eoq_fixture(conv: Convention) -> Result<Computed> {
    let fx = fixtures::eoq()?;
    let mut crisp = fx.scenario.crisp_params();
    let ct_star = fx.scenario.ct_star.unwrap_or_else(|| implied_ct_star(&crisp, fx.reported_no_release_q));
    crisp.Ct_star = Some(ct_star);
    let mut fuzzy = fx.scenario.fuzzy_params();
    fuzzy.Ct_star = Some(ct_star);
    let back_solved = fx.scenario.ct_star.is_none();
    let mut out = eoq_rows(&crisp, &fuzzy, conv)?;
    for v in out.values.iter_mut().filter(|v| back_solved && v.row == "crisp-no-release" && v.column == "Q") {
        v.note = Some(BACK_SOLVED);
    }
    Ok(out)
}

/// Crisp and fuzzy optima with the release rule, and without it when `Ct*`
/// is known.
pub fn eoq_rows(crisp: &EoqParams, fuzzy: &FuzzyEoqParams, conv: Convention) -> Result<Computed> {
    let mut rows: Vec<(&str, EoqSolution)> = vec![("crisp-release", solve_crisp(crisp)?)];
    if crisp.Ct_star.is_some() {
        rows.push(("crisp-no-release", solve_no_release(&crisp.to_fuzzy(), Convention::StrictPrint)?));
    }
    rows.push(("fuzzy-release", solve_fuzzy(fuzzy, conv)?));
    if fuzzy.Ct_star.is_some() {
        rows.push(("fuzzy-no-release", solve_no_release(fuzzy, conv)?));
    }
    let mut csv = String::from("model,Q,K,cost,converged\n");
    let mut values = Vec::new();
    for (model, s) in rows {
        let k = s.K.map(|k| k.to_string()).unwrap_or_default();
        let _ = writeln!(csv, "{model},{},{k},{},{}", s.Q, s.cost, s.converged);
        values.push(Value::new(model, "Q", s.Q));
        values.push(Value::new(model, "cost", s.cost));
    }
    Ok(Computed { csv, values })
}

/// Each row recomputed at its `(m, k)`, then the optimum.
pub fn horizon_rows(p: &HorizonParams, table: &[TableRow]) -> Result<Computed> {
    let p = *p;
    let mut csv = String::from("m,k,t_r,t1,T,Q,TC\n");
    let mut values = Vec::new();
    let mut line = |c: &crate::horizon::TotalCost| {
        let y = &c.cycle;
        let _ = writeln!(csv, "{},{},{},{},{},{},{}", y.m, y.k, y.t_r, y.t1, y.T, y.Q, c.tc);
    };
    let mut costs = Vec::new();
    for row in table {
        let c = total_cost(row.m, row.k, &p)?;
        line(&c);
        let label = format!("m{}", row.m);
        let y = &c.cycle;
        for (col, v) in [("t_r", y.t_r), ("t1", y.t1), ("T", y.T), ("Q", y.Q), ("TC", c.tc)] {
            values.push(Value::new(label.clone(), col, v));
        }
        costs.push(c.tc);
    }
    // Swapping the t_r/t1 fields leaves (m, k) and hence the cost unchanged.
    if costs.len() >= 2 {
        values.push(Value::new("after-crossover-1", "TC", costs[0]));
        values.push(Value::new("after-crossover-2", "TC", costs[1]));
        values.push(Value::new("after-mutation", "TC", costs[0]));
    }
    let best = optimize(&p)?.policy;
    line(&total_cost(best.m, best.k, &p)?);
    Ok(Computed { csv, values })
}
