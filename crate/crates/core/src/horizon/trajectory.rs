//! Inventory and shortage levels within the first cycle.

use serde::Serialize;

use super::HorizonParams;
use crate::error::{Error, Result};
use crate::oracle::numeric::bisect;

const SLACK: f64 = 1e-12;

/// `(e^x - 1) / x`, continuous at zero.
pub(crate) fn exprel(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 + x / 2.0
    } else {
        x.exp_m1() / x
    }
}

/// Earliest stock-out time `t1` for which the rented warehouse can empty no
/// earlier than `mu2`.
pub fn t1_min(p: &HorizonParams) -> f64 {
    let phi = p.phi();
    let x = phi * p.W1 * (p.alpha * (p.mu1 - p.mu2)).exp() / p.a;
    p.mu2 + x.ln_1p() / phi
}

fn matching(p: &HorizonParams, t1: f64, tr: f64) -> f64 {
    let phi = p.phi();
    p.a / phi * (phi * (t1 - tr)).exp_m1() - p.W1 * (p.alpha * (p.mu1 - tr)).exp()
}

/// Time at which the rented warehouse empties: the root on `[mu2, t1]` of the
/// continuity condition for own-warehouse stock at `t_r`.
pub fn solve_tr(p: &HorizonParams, t1: f64) -> Result<f64> {
    if !(t1 > p.mu1) || !t1.is_finite() {
        return Err(Error::TrNotBracketed);
    }
    if t1 < p.mu2 {
        return Err(Error::TrNotBracketed);
    }
    if p.W1 == 0.0 {
        return Ok(t1);
    }
    let g_lo = matching(p, t1, p.mu2);
    if g_lo < 0.0 {
        // Accept round-off at the feasibility boundary.
        if g_lo.abs() <= 1e-9 * (1.0 + p.W1) {
            return Ok(p.mu2);
        }
        return Err(Error::TrNotBracketed);
    }
    bisect(|tr| matching(p, t1, tr), p.mu2, t1, 1e-15 * (1.0 + t1))
}

/// Initial rented-warehouse stock for a given `t_r`.
pub fn w2(p: &HorizonParams, tr: f64) -> f64 {
    let theta = p.theta();
    p.a * p.beta * p.mu2 * exprel(p.b * p.mu2) / theta
        + p.a / theta * (theta * (tr - p.mu2) + p.b * p.mu2).exp_m1()
}

fn outside(t: f64, lo: f64, hi: f64) -> Error {
    Error::Domain(format!("t = {t} outside [{lo}, {hi}]"))
}

/// Rented-warehouse stock on `[0, t_r]`.
pub fn inventory_rw(t: f64, p: &HorizonParams, tr: f64) -> Result<f64> {
    if !(t >= -SLACK && t <= tr + SLACK) {
        return Err(outside(t, 0.0, tr));
    }
    Ok(if t <= p.mu2 {
        w2(p, tr) * (-p.b * t).exp() - p.a * t * exprel(-p.b * t)
    } else {
        p.a / p.theta() * (p.theta() * (tr - t)).exp_m1()
    })
}

/// Own-warehouse stock on `[0, t1]`.
pub fn inventory_ow(t: f64, p: &HorizonParams, tr: f64, t1: f64) -> Result<f64> {
    if !(t >= -SLACK && t <= t1 + SLACK) {
        return Err(outside(t, 0.0, t1));
    }
    Ok(if t <= p.mu1 {
        p.W1
    } else if t <= tr {
        p.W1 * (p.alpha * (p.mu1 - t)).exp()
    } else {
        p.a / p.phi() * (p.phi() * (t1 - t)).exp_m1()
    })
}

/// Inventory level during shortage (non-positive), first order in `delta`.
#[allow(non_snake_case)]
pub fn shortage_level(t: f64, p: &HorizonParams, t1: f64, T: f64) -> f64 {
    p.a * (t1 - t) * (1.0 - p.delta * T + p.delta / 2.0 * (t1 + t))
}

/// Backlog filled at the start of the next cycle.
pub fn backlog(p: &HorizonParams, m: u32, k: f64) -> f64 {
    let m = m as f64;
    p.a * p.H * (1.0 - k) / (2.0 * m * m) * (2.0 * m - p.delta * p.H * (1.0 - k))
}

/// Roots of the quadratic approximation to the `t_r` condition, as printed.
pub fn printed_tr_roots(p: &HorizonParams, t1: f64) -> [f64; 2] {
    let phi = p.phi();
    let e1 = (p.alpha * p.mu1).exp();
    let big = (phi * t1).exp();
    let b = p.W1 * p.alpha * e1 + p.a * big;
    let c = 4.0 * p.a * p.alpha * p.b / phi * (p.W1 * e1 - p.a / phi * big + p.a / phi);
    let disc = (b * b + c).sqrt();
    let den = 2.0 * (-p.a * p.alpha * p.b / phi);
    [(b + disc) / den, (b - disc) / den]
}

/// Quantities of the first cycle for a policy `(m, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct Cycle {
    pub m: u32,
    pub k: f64,
    pub T: f64,
    pub t1: f64,
    pub t_r: f64,
    pub W2: f64,
    pub S: f64,
    pub BI: f64,
    pub Q: f64,
}

pub fn cycle(p: &HorizonParams, m: u32, k: f64) -> Result<Cycle> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Domain(format!("k = {k} outside (0, 1)")));
    }
    let t = p.H / m as f64;
    let t1 = k * t;
    let tr = solve_tr(p, t1)?;
    let w = w2(p, tr);
    if w < 0.0 {
        return Err(Error::Infeasible(format!("negative rented stock {w}")));
    }
    let s = p.W1 + w;
    let bi = backlog(p, m, k);
    Ok(Cycle { m, k, T: t, t1, t_r: tr, W2: w, S: s, BI: bi, Q: s + bi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries() {
        let p = HorizonParams::example1();
        let t1 = 6.0;
        let tr = solve_tr(&p, t1).unwrap();
        assert!(inventory_rw(tr, &p, tr).unwrap().abs() < 1e-9);
        assert!((inventory_rw(0.0, &p, tr).unwrap() - w2(&p, tr)).abs() < 1e-9);
        assert!(inventory_ow(t1, &p, tr, t1).unwrap().abs() < 1e-9);
        assert_eq!(inventory_ow(0.2, &p, tr, t1).unwrap(), p.W1);
        assert!(inventory_rw(tr + 1.0, &p, tr).is_err());
    }

    #[test]
    fn feasibility_edge() {
        let p = HorizonParams::example1();
        let t = t1_min(&p);
        assert!((solve_tr(&p, t).unwrap() - p.mu2).abs() < 1e-6);
        assert_eq!(solve_tr(&p, t - 0.01).unwrap_err(), Error::TrNotBracketed);
    }

    #[test]
    fn backlog_substitution() {
        let mut p = HorizonParams::example1();
        p.delta = 0.0;
        assert!((backlog(&p, 2, 0.5) - 500.0).abs() < 1e-9);
        assert_eq!(backlog(&p, 3, 1.0), 0.0);
    }

    #[test]
    fn empty_own_warehouse() {
        let mut p = HorizonParams::example1();
        p.W1 = 0.0;
        assert_eq!(solve_tr(&p, 4.0).unwrap(), 4.0);
    }
}
