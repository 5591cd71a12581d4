//! Stationary `k` for each `m`, the incremental search over `m`, and an
//! exhaustive `(m, k)` grid oracle.

use rayon::prelude::*;
use serde::Serialize;

use super::cost::total_cost;
use super::trajectory::t1_min;
use super::{HorizonParams, HorizonPolicy};
use crate::error::{Error, Result};
use crate::oracle::numeric::bisect;

const M_CAP: u32 = 500;
const DK: f64 = 1e-5;

/// Smallest feasible `k` for `m` cycles (may exceed one).
pub fn k_min(p: &HorizonParams, m: u32) -> f64 {
    t1_min(p) / (p.H / m as f64)
}

fn tc(p: &HorizonParams, m: u32, k: f64) -> f64 {
    total_cost(m, k, p).map_or(f64::INFINITY, |t| t.tc)
}

/// `dTC/dk`, central where both neighbours are feasible, one-sided otherwise.
pub fn dtc_dk(p: &HorizonParams, m: u32, k: f64) -> f64 {
    let lo = k_min(p, m);
    if k - DK >= lo && k + DK < 1.0 {
        (tc(p, m, k + DK) - tc(p, m, k - DK)) / (2.0 * DK)
    } else if k - DK < lo {
        (-3.0 * tc(p, m, k) + 4.0 * tc(p, m, k + DK) - tc(p, m, k + 2.0 * DK)) / (2.0 * DK)
    } else {
        (3.0 * tc(p, m, k) - 4.0 * tc(p, m, k - DK) + tc(p, m, k - 2.0 * DK)) / (2.0 * DK)
    }
}

pub fn d2tc_dk2(p: &HorizonParams, m: u32, k: f64) -> f64 {
    let h = 1e-4;
    let lo = k_min(p, m);
    let k = k.max(lo + h).min(1.0 - 2.0 * h);
    (tc(p, m, k + h) - 2.0 * tc(p, m, k) + tc(p, m, k - h)) / (h * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KSolution {
    pub k: f64,
    pub tc: f64,
    pub dtc: f64,
    pub d2tc: f64,
    /// An interior stationary point was found and is the best candidate.
    pub converged: bool,
    pub convex: bool,
}

/// Best `k` for `m`: sign-change scan of `dTC/dk` over `k = i/100` (and the
/// feasibility edge), bisection of each `-` to `+` change, and fallback to the
/// best scanned point when no interior minimum beats it.
pub fn solve_k(m: u32, p: &HorizonParams) -> Result<KSolution> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let lo = k_min(p, m);
    if lo >= 0.99 {
        return Err(Error::Infeasible(format!("no feasible k for m = {m} (k_min = {lo:.6})")));
    }
    let mut ks: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).filter(|&k| k > lo).collect();
    if lo > 0.0 {
        ks.insert(0, lo);
    }
    let ds: Vec<f64> = ks.iter().map(|&k| dtc_dk(p, m, k)).collect();
    let vals: Vec<f64> = ks.iter().map(|&k| tc(p, m, k)).collect();

    let mut best_root: Option<(f64, f64)> = None;
    for i in 0..ks.len() - 1 {
        if ds[i] < 0.0 && ds[i + 1] > 0.0 {
            let k = bisect(|k| dtc_dk(p, m, k), ks[i], ks[i + 1], 1e-11)?;
            let v = tc(p, m, k);
            if best_root.map_or(true, |(_, b)| v < b) {
                best_root = Some((k, v));
            }
        }
    }
    let (ib, vb) = vals
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    if !vb.is_finite() {
        return Err(Error::Infeasible(format!("no finite cost for m = {m}")));
    }
    let (k, v, converged) = match best_root {
        Some((k, v)) if v <= vb => (k, v, true),
        _ => (ks[ib], vb, false),
    };
    let d2 = d2tc_dk2(p, m, k);
    Ok(KSolution { k, tc: v, dtc: dtc_dk(p, m, k), d2tc: d2, converged, convex: d2 > 0.0 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeResult {
    pub policy: HorizonPolicy,
    /// `(m, TC)` for every evaluated `m`; infeasible values are `+inf`.
    pub trace: Vec<(u32, f64)>,
    pub capped: bool,
}

/// Increase `m` from 1 until the optimised cost first rises.
pub fn optimize(p: &HorizonParams) -> Result<OptimizeResult> {
    p.validate()?;
    let mut best = solve_k(1, p)?;
    let mut best_m = 1;
    let mut trace = vec![(1, best.tc)];
    let mut capped = true;
    for m in 2..=M_CAP {
        let next = solve_k(m, p).ok();
        let v = next.map_or(f64::INFINITY, |s| s.tc);
        trace.push((m, v));
        match next {
            Some(s) if v <= best.tc => {
                best = s;
                best_m = m;
            }
            _ => {
                capped = false;
                break;
            }
        }
    }
    let cost = total_cost(best_m, best.k, p)?;
    Ok(OptimizeResult { policy: HorizonPolicy::from_cost(&cost, best.converged, best.convex), trace, capped })
}

/// Default stock-sensitivity values for [`sensitivity_b`].
pub const B_SWEEP: [f64; 3] = [0.05, 0.1, 0.2];

/// Optimum for each stock-sensitivity value, other parameters fixed.
pub fn sensitivity_b(p: &HorizonParams, bs: &[f64]) -> Result<Vec<(f64, HorizonPolicy)>> {
    bs.iter().map(|&b| Ok((b, optimize(&HorizonParams { b, ..*p })?.policy))).collect()
}

/// Minimum of TC over `m in 1..=m_max` and `k in {step, 2 step, ...} < 1`.
pub fn exhaustive_grid(p: &HorizonParams, m_max: u32, step: f64) -> Option<(u32, f64, f64)> {
    let count = ((1.0 - 1e-12) / step).floor() as usize;
    (1..=m_max)
        .into_par_iter()
        .map(|m| {
            (1..=count)
                .map(|i| {
                    let k = i as f64 * step;
                    (m, k, tc(p, m, k))
                })
                .filter(|c| c.2.is_finite() && c.1 < 1.0)
                .fold(None, |acc: Option<(u32, f64, f64)>, c| match acc {
                    Some(a) if a.2 <= c.2 => Some(a),
                    _ => Some(c),
                })
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(x), Some(y)) => Some(if y.2 < x.2 || (y.2 == x.2 && y.0 < x.0) { y } else { x }),
                (x, None) => x,
                (None, y) => y,
            },
        )
}

/// The derivative as printed, for comparison with the numeric one.
pub fn printed_dtc_dk(p: &HorizonParams, m: u32, k: f64) -> f64 {
    let (h, r, d, a) = (p.H, p.r_eff(), p.delta, p.a);
    let mf = m as f64;
    let phi = p.phi();
    let e = (-r * h * k / mf).exp();
    let eh = (-r * h / mf).exp();
    p.C2 * p.alpha * (a * h * (k * h / mf * phi).exp() / (mf * (phi + r)) - a * h * e / (mf * (phi + r)))
        + p.C3 * (a * h / (r * mf) * eh)
        + h * h * d / (mf * mf) * e * (k - 1.0)
        + h * d / (mf * r) * e
        + h / mf * e
        - p.C4 * d * a / (r * r) * (r * r * h * h / (mf * mf) * e * (1.0 - k) - r * h / mf * e)
        + p.p * ((1.0 - k) * a * h / mf * eh * (1.0 - h * d / mf * (1.0 + k)))
}

/// The second derivative as printed.
pub fn printed_d2tc_dk2(p: &HorizonParams, m: u32, k: f64) -> f64 {
    let (h, r, d, a) = (p.H, p.r_eff(), p.delta, p.a);
    let mf = m as f64;
    let phi = p.phi();
    let e = (-r * h * k / mf).exp();
    let eh = (-r * h / mf).exp();
    p.C2 * p.alpha * (a * h * h / (mf * mf) * (r * e / (phi + r) + phi * (k * h / mf * phi).exp()))
        + h.powi(3) * d * r / mf.powi(3) * e * (1.0 - k)
        - p.C4 * d * a / (r * r) * (r.powi(3) * h.powi(3) / mf.powi(3) * e * (k - 1.0))
        + p.p * (a * d * h * h / (2.0 * mf * mf) * (eh - 1.0) + a * h / mf * eh * (d * k * h / mf - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_is_stationary_and_convex() {
        let p = HorizonParams::example1();
        let s = solve_k(2, &p).unwrap();
        assert!(s.converged);
        assert!(s.dtc.abs() < 1e-6 * (1.0 + s.tc));
        assert!(s.convex);
    }

    #[test]
    fn root_beats_scan_grid() {
        let p = HorizonParams::example1();
        let s = solve_k(3, &p).unwrap();
        for i in 1..100 {
            let v = tc(&p, 3, i as f64 / 100.0);
            assert!(s.tc <= v + 1e-9 * v.abs().max(1.0));
        }
    }
}
