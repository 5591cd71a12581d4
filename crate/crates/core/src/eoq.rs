//! Two-warehouse EOQ with bulk release of K units per shipment, in crisp and
//! trapezoidal-fuzzy form.

use serde::{Deserialize, Serialize};

use crate::convention::Convention;
use crate::error::{Error, Result};
use crate::fuzzy::{graded_mean, TrapezoidalFuzzy};

const MAX_ITER: usize = 200;
/// Graded-mean weights of the four components.
const GM_W: [f64; 4] = [1.0 / 6.0, 2.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct EoqParams {
    pub D: f64,
    pub A: f64,
    pub F: f64,
    pub H: f64,
    pub W: f64,
    pub Ct: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub Ct_star: Option<f64>,
}

impl EoqParams {
    pub fn to_fuzzy(&self) -> FuzzyEoqParams {
        let c = TrapezoidalFuzzy::crisp;
        FuzzyEoqParams {
            D: c(self.D),
            F: c(self.F),
            H: c(self.H),
            A: c(self.A),
            W: c(self.W),
            Ct: self.Ct,
            Ct_star: self.Ct_star,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct FuzzyEoqParams {
    pub D: TrapezoidalFuzzy,
    pub F: TrapezoidalFuzzy,
    pub H: TrapezoidalFuzzy,
    pub A: TrapezoidalFuzzy,
    pub W: TrapezoidalFuzzy,
    pub Ct: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub Ct_star: Option<f64>,
}

impl FuzzyEoqParams {
    /// Graded mean of the capacity, used as the K ceiling and Q floor.
    pub fn capacity(&self) -> f64 {
        graded_mean(&self.W)
    }
}

/// Crisp part of a scenario document; transport costs live at the top level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct CrispInputs {
    pub D: f64,
    pub A: f64,
    pub F: f64,
    pub H: f64,
    pub W: f64,
}

/// Fuzzy part of a scenario document.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct FuzzyInputs {
    pub D: TrapezoidalFuzzy,
    pub F: TrapezoidalFuzzy,
    pub H: TrapezoidalFuzzy,
    pub A: TrapezoidalFuzzy,
    pub W: TrapezoidalFuzzy,
}

/// `{crisp, fuzzy, ct, ct_star}` as read from JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EoqScenario {
    pub crisp: CrispInputs,
    pub fuzzy: FuzzyInputs,
    pub ct: f64,
    #[serde(default)]
    pub ct_star: Option<f64>,
}

impl EoqScenario {
    pub fn crisp_params(&self) -> EoqParams {
        let c = &self.crisp;
        EoqParams { D: c.D, A: c.A, F: c.F, H: c.H, W: c.W, Ct: self.ct, Ct_star: self.ct_star }
    }

    pub fn fuzzy_params(&self) -> FuzzyEoqParams {
        let f = &self.fuzzy;
        FuzzyEoqParams { D: f.D, F: f.F, H: f.H, A: f.A, W: f.W, Ct: self.ct, Ct_star: self.ct_star }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct EoqSolution {
    pub Q: f64,
    pub K: Option<f64>,
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Crisp average cost with the K-release rule.
#[allow(non_snake_case)]
pub fn crisp_cost(Q: f64, K: f64, p: &EoqParams) -> Result<f64> {
    if !(Q > 0.0) || !(K > 0.0) {
        return Err(Error::Domain(format!("Q and K must be positive (Q={Q}, K={K})")));
    }
    let fh = p.F - p.H;
    Ok(p.A * p.D / Q + p.F * Q / 2.0 - p.W * fh + K / 2.0 * fh - K * p.W / (2.0 * Q) * fh
        + p.Ct * (Q - p.W) * p.D / (Q * K)
        + p.W * p.W / (2.0 * Q) * fh)
}

/// Crisp average cost without the release rule.
#[allow(non_snake_case)]
pub fn crisp_cost_no_release(Q: f64, p: &EoqParams) -> Result<f64> {
    let cs = p.Ct_star.ok_or_else(|| Error::Config("Ct_star is required without the release rule".into()))?;
    if !(Q > 0.0) {
        return Err(Error::Domain(format!("Q must be positive (Q={Q})")));
    }
    let fh = p.F - p.H;
    Ok(p.A * p.D / Q + p.F * Q / 2.0 + p.W * p.W * fh / (2.0 * Q) - p.W * fh + (Q - p.W) * cs * p.D / Q)
}

fn w_sq(p: &FuzzyEoqParams, j: usize, conv: Convention) -> f64 {
    let w = match conv {
        Convention::StrictPrint => p.W.get(0),
        Convention::SignConsistent => p.W.get(j),
    };
    w * w
}

/// Component `j` of the fuzzy cost with release rule.
#[allow(non_snake_case)]
fn component(Q: f64, K: f64, p: &FuzzyEoqParams, j: usize, conv: Convention) -> f64 {
    let r = 3 - j;
    let (a, d, f, w) = (p.A.get(j), p.D.get(j), p.F.get(j), p.W.get(r));
    let fh_lo = p.F.get(r) - p.H.get(j);
    let fh_hi = f - p.H.get(r);
    a * d / Q + f * Q / 2.0 - fh_lo * w + K * fh_hi / 2.0 - K * fh_lo * w / (2.0 * Q)
        + p.Ct * (Q - w) * d / (Q * K)
        + fh_hi * w_sq(p, j, conv) / (2.0 * Q)
}

/// Fuzzy cost quadruple and its graded mean.
#[allow(non_snake_case)]
pub fn fuzzy_cost(Q: f64, K: f64, p: &FuzzyEoqParams, conv: Convention) -> Result<(TrapezoidalFuzzy, f64)> {
    if !(Q > 0.0) || !(K > 0.0) {
        return Err(Error::Domain(format!("Q and K must be positive (Q={Q}, K={K})")));
    }
    let c: [f64; 4] = std::array::from_fn(|j| component(Q, K, p, j, conv));
    let t = TrapezoidalFuzzy::from(c);
    Ok((t, graded_mean(&t)))
}

/// Fuzzy cost quadruple without the release rule and its graded mean.
#[allow(non_snake_case)]
pub fn fuzzy_cost_no_release(Q: f64, p: &FuzzyEoqParams, conv: Convention) -> Result<(TrapezoidalFuzzy, f64)> {
    let cs = p.Ct_star.ok_or_else(|| Error::Config("Ct_star is required without the release rule".into()))?;
    if !(Q > 0.0) {
        return Err(Error::Domain(format!("Q must be positive (Q={Q})")));
    }
    let c: [f64; 4] = std::array::from_fn(|j| {
        let r = 3 - j;
        let (a, d, f, w) = (p.A.get(j), p.D.get(j), p.F.get(j), p.W.get(r));
        a * d / Q + f * Q / 2.0 - (p.F.get(r) - p.H.get(j)) * w
            + cs * (Q - w) * d / Q
            + (f - p.H.get(r)) * w_sq(p, j, conv) / (2.0 * Q)
    });
    let t = TrapezoidalFuzzy::from(c);
    Ok((t, graded_mean(&t)))
}

/// The graded-mean objective written as
/// `c0 + c1/Q + c2 Q + c3 K + c4 K/Q + c5/K + c6/(Q K)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostCoeffs {
    pub c: [f64; 7],
}

impl CostCoeffs {
    pub fn from_fuzzy(p: &FuzzyEoqParams, conv: Convention) -> Self {
        let mut c = [0.0; 7];
        for (j, wt) in GM_W.iter().enumerate() {
            let r = 3 - j;
            let (a, d, f, w) = (p.A.get(j), p.D.get(j), p.F.get(j), p.W.get(r));
            let fh_lo = p.F.get(r) - p.H.get(j);
            let fh_hi = f - p.H.get(r);
            c[0] += wt * (-fh_lo * w);
            c[1] += wt * (a * d + fh_hi * w_sq(p, j, conv) / 2.0);
            c[2] += wt * f / 2.0;
            c[3] += wt * fh_hi / 2.0;
            c[4] += wt * (-fh_lo * w / 2.0);
            c[5] += wt * p.Ct * d;
            c[6] += wt * (-p.Ct * w * d);
        }
        CostCoeffs { c }
    }

    #[allow(non_snake_case)]
    pub fn eval(&self, Q: f64, K: f64) -> f64 {
        let c = &self.c;
        c[0] + c[1] / Q + c[2] * Q + c[3] * K + c[4] * K / Q + c[5] / K + c[6] / (Q * K)
    }

    /// Stationary K for fixed Q.
    #[allow(non_snake_case)]
    pub fn k_given_q(&self, Q: f64) -> f64 {
        let c = &self.c;
        let num = c[5] * Q + c[6];
        let den = c[3] * Q + c[4];
        if num <= 0.0 || den <= 0.0 {
            return f64::INFINITY;
        }
        (num / den).sqrt()
    }

    /// Stationary Q for fixed K.
    #[allow(non_snake_case)]
    pub fn q_given_k(&self, K: f64) -> f64 {
        let c = &self.c;
        let num = c[1] + c[4] * K + c[6] / K;
        if num <= 0.0 {
            return 0.0;
        }
        (num / c[2]).sqrt()
    }
}

/// Alternating first-order solve with `W <= Q` and `0 < K <= W`.
fn alternate(coeffs: &CostCoeffs, w: f64) -> EoqSolution {
    let k_floor = 1e-9 * w.max(1.0);
    let clamp_k = |k: f64| k.clamp(k_floor, w);
    let clamp_q = |q: f64| q.max(w);
    let mut q = clamp_q(coeffs.q_given_k(w));
    let mut k = clamp_k(coeffs.k_given_q(q));
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=MAX_ITER {
        iterations = it;
        let k_new = clamp_k(coeffs.k_given_q(q));
        let q_new = clamp_q(coeffs.q_given_k(k_new));
        let step = (q_new - q).abs() + (k_new - k).abs();
        q = q_new;
        k = k_new;
        if step < 1e-9 * (1.0 + q + k) {
            converged = true;
            break;
        }
    }
    EoqSolution { Q: q, K: Some(k), cost: coeffs.eval(q, k), iterations, converged }
}

pub fn solve_crisp(p: &EoqParams) -> Result<EoqSolution> {
    if !(p.F > p.H) {
        return Err(Error::KReleaseUndefined);
    }
    let coeffs = CostCoeffs::from_fuzzy(&p.to_fuzzy(), Convention::StrictPrint);
    let mut s = alternate(&coeffs, p.W);
    s.cost = crisp_cost(s.Q, s.K.unwrap_or(p.W), p)?;
    Ok(s)
}

pub fn solve_fuzzy(p: &FuzzyEoqParams, conv: Convention) -> Result<EoqSolution> {
    if !(graded_mean(&p.F) > graded_mean(&p.H)) {
        return Err(Error::KReleaseUndefined);
    }
    let coeffs = CostCoeffs::from_fuzzy(p, conv);
    let mut s = alternate(&coeffs, p.capacity());
    s.cost = fuzzy_cost(s.Q, s.K.unwrap_or(1.0), p, conv)?.1;
    Ok(s)
}

/// Minimiser of the no-release objective `e0 + e1/Q + e2 Q` over `Q >= W`.
pub fn solve_no_release(p: &FuzzyEoqParams, conv: Convention) -> Result<EoqSolution> {
    let cs = p.Ct_star.ok_or_else(|| Error::Config("Ct_star is required without the release rule".into()))?;
    let (mut e1, mut e2) = (0.0, 0.0);
    for (j, wt) in GM_W.iter().enumerate() {
        let r = 3 - j;
        let (a, d, f, w) = (p.A.get(j), p.D.get(j), p.F.get(j), p.W.get(r));
        e1 += wt * (a * d + (f - p.H.get(r)) * w_sq(p, j, conv) / 2.0 - cs * w * d);
        e2 += wt * f / 2.0;
    }
    let w = p.capacity();
    let q = if e1 > 0.0 { (e1 / e2).sqrt() } else { 0.0 };
    let q = q.max(w).max(f64::MIN_POSITIVE);
    let cost = fuzzy_cost_no_release(q, p, conv)?.1;
    Ok(EoqSolution { Q: q, K: None, cost, iterations: 1, converged: true })
}

/// The release rule pays off iff `Ct* - Ct/K > K (F - H) / (2 D)`.
#[allow(non_snake_case)]
pub fn k_release_economical(p: &EoqParams, K: f64) -> Result<bool> {
    let cs = p.Ct_star.ok_or_else(|| Error::Config("Ct_star is required".into()))?;
    if !(K > 0.0 && p.D > 0.0) {
        return Err(Error::Domain("K and D must be positive".into()));
    }
    Ok(cs - p.Ct / K > K * (p.F - p.H) / (2.0 * p.D))
}

/// `Ct*` at which the release rule breaks even for shipment size `K`.
#[allow(non_snake_case)]
pub fn break_even_ct_star(p: &EoqParams, K: f64) -> f64 {
    p.Ct / K + K * (p.F - p.H) / (2.0 * p.D)
}

/// `Ct*` implied by a reported no-release order quantity `Q` (crisp data).
#[allow(non_snake_case)]
pub fn implied_ct_star(p: &EoqParams, Q: f64) -> f64 {
    (2.0 * p.A * p.D + p.W * p.W * (p.F - p.H) - p.F * Q * Q) / (2.0 * p.W * p.D)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> EoqParams {
        EoqParams { D: 2000.0, A: 150.0, F: 8.5, H: 7.5, W: 100.0, Ct: 0.5, Ct_star: Some(0.6) }
    }

    #[test]
    fn k_terms_cancel_at_capacity() {
        let p = example();
        let a = crisp_cost(p.W, 10.0, &p).unwrap();
        let b = crisp_cost(p.W, 70.0, &p).unwrap();
        let expect = p.A * p.D / p.W + p.F * p.W / 2.0 - p.W * (p.F - p.H) / 2.0;
        assert!((a - expect).abs() < 1e-9 && (b - expect).abs() < 1e-9);
    }

    #[test]
    fn coefficient_form_matches_crisp() {
        let p = example();
        let c = CostCoeffs::from_fuzzy(&p.to_fuzzy(), Convention::StrictPrint);
        for (q, k) in [(120.0, 5.0), (250.0, 44.0), (290.0, 99.0)] {
            let a = crisp_cost(q, k, &p).unwrap();
            assert!((c.eval(q, k) - a).abs() < 1e-9 * a);
        }
    }

    #[test]
    fn crisp_k_has_closed_form() {
        let p = example();
        let s = solve_crisp(&p).unwrap();
        let k = (2.0 * p.Ct * p.D / (p.F - p.H)).sqrt();
        assert!(s.converged);
        assert!((s.K.unwrap() - k).abs() < 1e-6);
    }

    #[test]
    fn requires_f_above_h() {
        let mut p = example();
        p.H = 9.0;
        assert_eq!(solve_crisp(&p).unwrap_err(), Error::KReleaseUndefined);
    }

    #[test]
    fn economical_predicate_edges() {
        let mut p = example();
        p.Ct_star = Some(p.Ct / 20.0);
        assert!(!k_release_economical(&p, 20.0).unwrap());
        p.H = p.F;
        p.Ct_star = Some(p.Ct / 20.0 + 0.01);
        assert!(k_release_economical(&p, 20.0).unwrap());
    }

    #[test]
    fn zero_capacity_no_release_is_classic() {
        let mut p = example();
        p.W = 0.0;
        let s = solve_no_release(&p.to_fuzzy(), Convention::StrictPrint).unwrap();
        assert!((s.Q - (2.0 * p.A * p.D / p.F).sqrt()).abs() < 1e-9);
    }
}
