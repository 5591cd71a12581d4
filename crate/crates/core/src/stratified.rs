//! Exponential ratio/product estimators in stratified sampling with two
//! auxiliary variables, the regression estimator, and the combined class t_p.

use serde::{Deserialize, Serialize};

use crate::convention::Convention;
use crate::error::{Error, Result};
use crate::stats::{regression_coefficients, v_moments, StratifiedPopulation, VMoments};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StratEstimatorId {
    Mean,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    Tp,
}

impl StratEstimatorId {
    pub const ALL: [StratEstimatorId; 9] = [
        Self::Mean,
        Self::T1,
        Self::T2,
        Self::T3,
        Self::T4,
        Self::T5,
        Self::T6,
        Self::T7,
        Self::Tp,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::Mean => "mean",
            Self::T1 => "t1",
            Self::T2 => "t2",
            Self::T3 => "t3",
            Self::T4 => "t4",
            Self::T5 => "t5",
            Self::T6 => "t6",
            Self::T7 => "t7",
            Self::Tp => "tp",
        }
    }
}

/// Relative MSE (MSE divided by Y^2) for the closed-form members.
fn rel_mse(est: StratEstimatorId, v: &VMoments) -> Result<f64> {
    use StratEstimatorId::*;
    let q = v.V200 + v.V020 / 4.0 + v.V002 / 4.0;
    Ok(match est {
        Mean => v.V200,
        T1 => v.V200 + v.V020 - 2.0 * v.V110,
        T2 => v.V200 + v.V020 / 4.0 - v.V110,
        T3 => q - v.V110 - v.V101 + v.V011 / 2.0,
        T4 => q + v.V110 + v.V101 + v.V011 / 2.0,
        T5 => q - v.V110 + v.V101 - v.V011 / 2.0,
        T6 => q + v.V110 - v.V101 - v.V011 / 2.0,
        T7 | Tp => {
            return Err(Error::InvalidInput(format!(
                "{} has no moment-only MSE formula",
                est.label()
            )))
        }
    })
}

/// MSE of the mean and of t1..t6 from the relative moments.
pub fn mse_strat(est: StratEstimatorId, v: &VMoments, ybar: f64) -> Result<f64> {
    Ok(ybar * ybar * rel_mse(est, v)?)
}

/// MSE of the two-auxiliary regression estimator.
pub fn mse_t7(pop: &StratifiedPopulation) -> f64 {
    pop.pooled(|s| {
        s.s_y * s.s_y
            * (1.0 - s.rho_yx * s.rho_yx - s.rho_yz * s.rho_yz + 2.0 * s.rho_yx * s.rho_yz * s.rho_xz)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct TpSolution {
    pub m1: f64,
    pub m2: f64,
    pub P1: f64,
    pub P2: f64,
    pub P3: f64,
    pub mse: f64,
    /// Exponents from the closed form as printed, kept as a diagnostic.
    pub m1_printed: f64,
    pub m2_printed: f64,
    /// MSE evaluated at the printed exponents.
    pub mse_at_printed: f64,
}

/// Components `(P1, P2, P3)` and the MSE of t_p at exponents `(m1, m2)`.
pub fn tp_mse_at(v: &VMoments, b1: f64, b2: f64, ybar: f64, m1: f64, m2: f64) -> (f64, f64, f64, f64) {
    let p1 = m1 * m1 * v.V020 / 4.0 + m2 * m2 * v.V002 / 4.0 + m1 * m2 * v.V011 / 2.0
        - m1 * v.V110
        - m2 * v.V101;
    let p2 = b1 * b1 * v.V020 + b2 * b2 * v.V002 + 2.0 * b1 * b2 * v.V011;
    let p3 = -2.0 * b1 * v.V110 - 2.0 * b2 * v.V101
        + m1 * b1 * v.V020
        + m1 * b2 * v.V011
        + m2 * b1 * v.V011
        + m2 * b2 * v.V002;
    let mse = ybar * ybar * (v.V200 + p1) + p2 - ybar * p3;
    (p1, p2, p3, mse)
}

/// Stationary exponents of the t_p MSE and its value there.
pub fn solve_tp_with(v: &VMoments, b1: f64, b2: f64, ybar: f64) -> Result<TpSolution> {
    let det = v.V020 * v.V002 - v.V011 * v.V011;
    let scale = (v.V020 * v.V002).abs().max(f64::MIN_POSITIVE);
    if det.abs() <= 1e-14 * scale || det == 0.0 {
        return Err(Error::CollinearAuxiliaries);
    }
    // Setting the gradient of the quadratic form to zero gives
    // [V020 V011; V011 V002] m = 2 [V110 + (B1 V020 + B2 V011)/Y; V101 + (B1 V011 + B2 V002)/Y].
    let r1 = 2.0 * (v.V110 + (b1 * v.V020 + b2 * v.V011) / ybar);
    let r2 = 2.0 * (v.V101 + (b1 * v.V011 + b2 * v.V002) / ybar);
    let m1 = (v.V002 * r1 - v.V011 * r2) / det;
    let m2 = (v.V020 * r2 - v.V011 * r1) / det;
    let (p1, p2, p3, mse) = tp_mse_at(v, b1, b2, ybar, m1, m2);

    let m1_printed = 4.0
        * (b1 * v.V011 * v.V002 + b2 * v.V011 * v.V011 - b1 * v.V020 * v.V002 - b2 * v.V011 * v.V002)
        / (ybar * det);
    let m2_printed = 4.0
        * (b1 * v.V011 * v.V020 + b2 * v.V011 * v.V011 - b1 * v.V011 * v.V020 - b2 * v.V002 * v.V020)
        / (ybar * det);
    let mse_at_printed = tp_mse_at(v, b1, b2, ybar, m1_printed, m2_printed).3;

    Ok(TpSolution {
        m1,
        m2,
        P1: p1,
        P2: p2,
        P3: p3,
        mse,
        m1_printed,
        m2_printed,
        mse_at_printed,
    })
}

pub fn solve_tp(v: &VMoments, pop: &StratifiedPopulation) -> Result<TpSolution> {
    let (b1, b2) = regression_coefficients(pop)?;
    solve_tp_with(v, b1, b2, pop.mean_y)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreRow {
    pub estimator: StratEstimatorId,
    pub mse: f64,
    pub pre: f64,
}

/// MSE and PRE for every estimator. The mean row is exactly 100.
pub fn pre_table(pop: &StratifiedPopulation) -> Result<Vec<PreRow>> {
    let v = v_moments(pop)?;
    let ybar = pop.mean_y;
    let var = mse_strat(StratEstimatorId::Mean, &v, ybar)?;
    let tp = solve_tp(&v, pop)?;
    StratEstimatorId::ALL
        .iter()
        .map(|&e| {
            let mse = match e {
                StratEstimatorId::T7 => mse_t7(pop),
                StratEstimatorId::Tp => tp.mse,
                _ => mse_strat(e, &v, ybar)?,
            };
            let pre = if e == StratEstimatorId::Mean { 100.0 } else { crate::pre(var, mse) };
            Ok(PreRow { estimator: e, mse, pre })
        })
        .collect()
}

/// Differences `MSE(t) - MSE(t_p)` for the mean and t1..t6.
///
/// Under `StrictPrint` the t5/t6 rows use the left-hand sides exactly as
/// printed, which carry `+V011/2`; under `SignConsistent` they are the
/// difference of the two MSE expressions.
pub fn efficiency_gaps(
    v: &VMoments,
    sol: &TpSolution,
    ybar: f64,
    conv: Convention,
) -> Vec<(StratEstimatorId, f64)> {
    use StratEstimatorId::*;
    let y2 = ybar * ybar;
    let tail = -y2 * sol.P1 - sol.P2 + ybar * sol.P3;
    let q = v.V020 / 4.0 + v.V002 / 4.0;
    let c5 = match conv {
        Convention::StrictPrint => v.V011 / 2.0,
        Convention::SignConsistent => -v.V011 / 2.0,
    };
    vec![
        (Mean, y2 * sol.P1 + sol.P2 - ybar * sol.P3),
        (T1, y2 * (v.V020 - 2.0 * v.V110) + tail),
        (T2, y2 * (v.V020 / 4.0 - v.V110) + tail),
        (T3, y2 * (q - v.V110 - v.V101 + v.V011 / 2.0) + tail),
        (T4, y2 * (q + v.V110 + v.V101 + v.V011 / 2.0) + tail),
        (T5, y2 * (q - v.V110 + v.V101 + c5) + tail),
        (T6, y2 * (q + v.V110 - v.V101 + c5) + tail),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_moments_zero_mse() {
        let v = VMoments::default();
        for e in [StratEstimatorId::Mean, StratEstimatorId::T1, StratEstimatorId::T6] {
            assert_eq!(mse_strat(e, &v, 12.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn no_cross_terms_t3() {
        let v = VMoments { V200: 0.3, V020: 0.2, V002: 0.1, ..Default::default() };
        let m = mse_strat(StratEstimatorId::T3, &v, 2.0).unwrap();
        assert!((m - 4.0 * (0.3 + 0.05 + 0.025)).abs() < 1e-15);
    }

    #[test]
    fn no_aux_information_gives_zero_exponents() {
        let v = VMoments { V200: 0.3, V020: 0.2, V002: 0.1, V011: 0.05, ..Default::default() };
        let s = solve_tp_with(&v, 0.0, 0.0, 10.0).unwrap();
        assert!(s.m1.abs() < 1e-15 && s.m2.abs() < 1e-15);
        assert!((s.mse - 100.0 * 0.3).abs() < 1e-12);
    }

    #[test]
    fn collinear_rejected() {
        let v = VMoments { V200: 0.3, V020: 0.2, V002: 0.2, V011: 0.2, ..Default::default() };
        assert_eq!(solve_tp_with(&v, 1.0, 1.0, 1.0).unwrap_err(), Error::CollinearAuxiliaries);
    }
}
