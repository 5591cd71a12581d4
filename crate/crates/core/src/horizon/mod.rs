//! Finite-horizon two-warehouse model for deteriorating items with
//! stock-dependent demand, partial backlogging and discounting.
//!
//! The horizon `H` is split into `m` cycles of length `T = H / m`. In each
//! cycle stock lasts until `t1 = k T`, the rented warehouse empties at `t_r`,
//! and shortages accumulate on `[t1, T]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod cost;
pub mod ga;
pub mod solve;
pub mod trajectory;

pub use cost::{components_by_quadrature, total_cost, Components, TotalCost};
pub use ga::{ga_optimize, replay_rows, DemoRow, GaConfig, GaMode, GaResult, TableRow};
pub use solve::{exhaustive_grid, k_min, optimize, sensitivity_b, solve_k, KSolution, OptimizeResult, B_SWEEP};
pub use trajectory::{
    backlog, cycle, inventory_ow, inventory_rw, printed_tr_roots, shortage_level, solve_tr, t1_min, w2, Cycle,
};

/// Substitute for a vanishing rate in removable singularities.
pub const EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct HorizonParams {
    pub a: f64,
    pub b: f64,
    pub W1: f64,
    pub A: f64,
    pub Chr: f64,
    pub Cho: f64,
    pub C2: f64,
    pub C3: f64,
    pub C4: f64,
    pub p: f64,
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub R: f64,
    pub H: f64,
}

impl HorizonParams {
    /// The worked example with stock sensitivity `b = 0.1`.
    pub fn example1() -> Self {
        HorizonParams {
            a: 100.0,
            b: 0.1,
            W1: 50.0,
            A: 150.0,
            Chr: 2.0,
            Cho: 1.2,
            C2: 1.5,
            C3: 5.0,
            C4: 10.0,
            p: 4.0,
            s: 15.0,
            alpha: 0.8,
            beta: 0.2,
            delta: 0.008,
            mu1: 5.0 / 12.0,
            mu2: 8.0 / 12.0,
            R: 0.2,
            H: 20.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.into()));
        let finite = [
            self.a, self.b, self.W1, self.A, self.Chr, self.Cho, self.C2, self.C3, self.C4, self.p, self.s,
            self.alpha, self.beta, self.delta, self.mu1, self.mu2, self.R, self.H,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return bad("parameters must be finite");
        }
        if !(self.a > 0.0 && self.b >= 0.0 && self.W1 >= 0.0 && self.H > 0.0 && self.R >= 0.0) {
            return bad("need a > 0, b >= 0, W1 >= 0, H > 0, R >= 0");
        }
        if !(self.s > self.p) {
            return bad("selling price must exceed purchase cost");
        }
        if !(0.0 <= self.beta && self.beta < self.alpha && self.alpha < 1.0) {
            return bad("need 0 <= beta < alpha < 1");
        }
        if !(0.0 <= self.mu1 && self.mu1 <= self.mu2) {
            return bad("need 0 <= mu1 <= mu2");
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return bad("delta must lie in [0, 1]");
        }
        if !(self.Chr > self.Cho) {
            return bad("rented holding cost must exceed own holding cost");
        }
        Ok(())
    }

    /// `beta + b`.
    pub fn theta(&self) -> f64 {
        self.beta + self.b
    }

    /// `alpha + b`.
    pub fn phi(&self) -> f64 {
        self.alpha + self.b
    }

    pub(crate) fn b_eff(&self) -> f64 {
        if self.b.abs() < EPS {
            EPS
        } else {
            self.b
        }
    }

    pub(crate) fn r_eff(&self) -> f64 {
        if self.R.abs() < EPS {
            EPS
        } else {
            self.R
        }
    }

    /// Present-value factor `sum_{j<m} e^{-R j T}`.
    pub fn g_factor(&self, m: u32) -> f64 {
        let r = self.r_eff();
        (-r * self.H).exp_m1() / (-r * self.H / m as f64).exp_m1()
    }
}

/// A solved `(m, k)` with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct HorizonPolicy {
    pub m: u32,
    pub k: f64,
    pub T: f64,
    pub t1: f64,
    pub t_r: f64,
    pub W2: f64,
    pub S: f64,
    pub BI: f64,
    pub Q: f64,
    pub TC: f64,
    pub converged: bool,
    pub convex: bool,
}

impl HorizonPolicy {
    pub(crate) fn from_cost(tc: &TotalCost, converged: bool, convex: bool) -> Self {
        let c = &tc.cycle;
        HorizonPolicy {
            m: c.m,
            k: c.k,
            T: c.T,
            t1: c.t1,
            t_r: c.t_r,
            W2: c.W2,
            S: c.S,
            BI: c.BI,
            Q: c.Q,
            TC: tc.tc,
            converged,
            convex,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_is_valid() {
        HorizonParams::example1().validate().unwrap();
    }

    #[test]
    fn g_limits() {
        let mut p = HorizonParams::example1();
        p.R = 1e-8;
        assert!((p.g_factor(7) - 7.0).abs() < 1e-4);
        p.R = 0.0;
        assert!((p.g_factor(7) - 7.0).abs() < 1e-4);
    }

    #[test]
    fn g_is_geometric_sum() {
        let p = HorizonParams::example1();
        for m in [1u32, 3, 12] {
            let t = p.H / m as f64;
            let s: f64 = (0..m).map(|j| (-p.R * j as f64 * t).exp()).sum();
            assert!((s - p.g_factor(m)).abs() < 1e-12 * s);
        }
    }
}
