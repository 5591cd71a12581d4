//! Estimators using a binary auxiliary attribute: the ratio-type class t1,
//! the exponential class t2, their bias-cancelling linear combination and the
//! two-phase analogue.

use serde::{Deserialize, Serialize};

use crate::convention::Convention;
use crate::error::{Error, Result};
use crate::stats::AttributeSummary;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct AttrClassConfig {
    pub K1: f64,
    pub K2: f64,
    pub K3: f64,
    pub K4: f64,
    pub K5: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl Default for AttrClassConfig {
    fn default() -> Self {
        AttrClassConfig { K1: 1.0, K2: 1.0, K3: 1.0, K4: 1.0, K5: 1.0, alpha: 1.0, beta: 1.0, lambda: 1.0 }
    }
}

impl AttrClassConfig {
    pub fn v1(&self, p: f64) -> Result<f64> {
        let d = self.K1 * p + self.K2 * self.K3;
        if d == 0.0 {
            return Err(Error::InvalidInput("K1 P + K2 K3 = 0".into()));
        }
        Ok(self.K1 * p / d)
    }

    pub fn v2(&self, p: f64) -> Result<f64> {
        let d = self.K4 * p + self.K5;
        if d == 0.0 {
            return Err(Error::InvalidInput("K4 P + K5 = 0".into()));
        }
        Ok(self.K4 * p / d)
    }

    /// Coefficient of the attribute error in the linearised t2: `beta - lambda V2 / 2`.
    pub fn t2_slope(&self, p: f64) -> Result<f64> {
        Ok(self.beta - self.lambda * self.v2(p)? / 2.0)
    }

    /// t1 evaluated on a sample mean `ybar` and sample proportion `p`.
    pub fn estimate_t1(&self, ybar: f64, p: f64, big_p: f64) -> f64 {
        let c = self.K2 * self.K3;
        ybar * ((self.K1 * big_p + c) / (self.K1 * p + c)).powf(self.alpha)
    }

    /// t2 evaluated on a sample mean `ybar` and sample proportion `p`.
    pub fn estimate_t2(&self, ybar: f64, p: f64, big_p: f64) -> f64 {
        let big = self.K4 * big_p + self.K5;
        let small = self.K4 * p + self.K5;
        ybar * (2.0 - (p / big_p).powf(self.beta) * (self.lambda * (big - small) / (big + small)).exp())
    }
}

/// Bias and MSE of t1.
pub fn bias_mse_t1(cfg: &AttrClassConfig, a: &AttributeSummary) -> Result<(f64, f64)> {
    let v1 = cfg.v1(a.p)?;
    let (f1, cp2, kp, al) = (a.f1(), a.c_p * a.c_p, a.k_p(), cfg.alpha);
    let bias = a.mean_y * f1 * cp2 * (al * (al + 1.0) * v1 * v1 / 2.0 - al * v1 * kp);
    let mse = a.mean_y * a.mean_y * f1 * (a.c_y * a.c_y + cp2 * (al * al * v1 * v1 - 2.0 * al * v1 * kp));
    Ok((bias, mse))
}

/// Bias and MSE of t2.
pub fn bias_mse_t2(cfg: &AttrClassConfig, a: &AttributeSummary) -> Result<(f64, f64)> {
    let v2 = cfg.v2(a.p)?;
    let (f1, cp2, kp) = (a.f1(), a.c_p * a.c_p, a.k_p());
    let (be, la) = (cfg.beta, cfg.lambda);
    let bias = a.mean_y
        * f1
        * cp2
        * (la * v2 * be / 2.0 - be * (be - 1.0) / 2.0 - la * (la + 2.0) * v2 * v2 / 8.0 - be * kp
            + la * v2 * kp / 2.0);
    let mse = a.mean_y
        * a.mean_y
        * f1
        * (a.c_y * a.c_y + cp2 * (be * be + la * la * v2 * v2 / 4.0 - be * la * v2)
            - 2.0 * kp * cp2 * (be - la * v2 / 2.0));
    Ok((bias, mse))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightTriple {
    pub w0: f64,
    pub w1: f64,
    pub w2: f64,
}

impl WeightTriple {
    pub fn sum(&self) -> f64 {
        self.w0 + self.w1 + self.w2
    }
}

/// Solves `[1 1 1; 0 c1 c2; 0 b1 b2] w = [1, K_p, 0]` by Cramer's rule on
/// the lower 2x2 block.
fn solve_block(c1: f64, c2: f64, b1: f64, b2: f64, kp: f64) -> Result<WeightTriple> {
    let det = c1 * b2 - c2 * b1;
    let scale = (c1 * b2).abs().max((c2 * b1).abs());
    if det == 0.0 || det.abs() <= 1e-13 * scale {
        return Err(Error::SingularWeights);
    }
    let w1 = kp * b2 / det;
    let w2 = -kp * b1 / det;
    Ok(WeightTriple { w0: 1.0 - w1 - w2, w1, w2 })
}

/// Bias-cancelling weights with `Q = K_p`.
pub fn solve_weights(cfg: &AttrClassConfig, a: &AttributeSummary) -> Result<WeightTriple> {
    let c1 = cfg.alpha * cfg.v1(a.p)?;
    let c2 = cfg.t2_slope(a.p)?;
    let (b1, _) = bias_mse_t1(cfg, a)?;
    let (b2, _) = bias_mse_t2(cfg, a)?;
    solve_block(c1, c2, b1, b2, a.k_p())
}

/// `Q = w1 alpha V1 + w2 (beta - lambda V2 / 2)`.
pub fn q_of(w: &WeightTriple, cfg: &AttrClassConfig, a: &AttributeSummary) -> Result<f64> {
    Ok(w.w1 * cfg.alpha * cfg.v1(a.p)? + w.w2 * cfg.t2_slope(a.p)?)
}

/// MSE of the combination at arbitrary weights.
pub fn mse_tp(w: &WeightTriple, cfg: &AttrClassConfig, a: &AttributeSummary) -> Result<f64> {
    let q = q_of(w, cfg, a)?;
    Ok(a.mean_y * a.mean_y * a.f1() * (a.c_y * a.c_y + a.c_p * a.c_p * (q * q - 2.0 * q * a.k_p())))
}

/// Bias of the combination at arbitrary weights.
pub fn bias_tp(w: &WeightTriple, cfg: &AttrClassConfig, a: &AttributeSummary) -> Result<f64> {
    Ok(w.w1 * bias_mse_t1(cfg, a)?.0 + w.w2 * bias_mse_t2(cfg, a)?.0)
}

/// `Y^2 f1 C_y^2 (1 - rho_pb^2)`.
pub fn min_mse_tp(a: &AttributeSummary) -> f64 {
    a.var_mean() * (1.0 - a.rho_pb * a.rho_pb)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct TwoPhaseConfig {
    pub m_exp: f64,
    pub n_exp: f64,
    pub gamma: f64,
    pub K1: f64,
    pub K2: f64,
    pub K3: f64,
    pub K4: f64,
    pub K5: f64,
}

impl TwoPhaseConfig {
    pub fn r1(&self, p: f64) -> Result<f64> {
        let d = self.K1 * p + self.K2 * self.K3;
        if d == 0.0 {
            return Err(Error::InvalidInput("K1 P + K2 K3 = 0".into()));
        }
        Ok(self.K1 * p / d)
    }

    /// Carries the factor one half.
    pub fn r2(&self, p: f64) -> Result<f64> {
        let d = self.K4 * p + self.K5;
        if d == 0.0 {
            return Err(Error::InvalidInput("K4 P + K5 = 0".into()));
        }
        Ok(self.K4 * p / (2.0 * d))
    }

    /// `n - gamma R2`.
    pub fn l1(&self, p: f64) -> Result<f64> {
        Ok(self.n_exp - self.gamma * self.r2(p)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPhaseResult {
    pub bias_t1d: f64,
    pub mse_t1d: f64,
    pub bias_t2d: f64,
    pub mse_t2d: f64,
}

pub fn two_phase_bias_mse(cfg: &TwoPhaseConfig, a: &AttributeSummary, conv: Convention) -> Result<TwoPhaseResult> {
    let (f1, f2, f3) = (a.f1(), a.f2()?, a.f3()?);
    let (y, cp2, kp) = (a.mean_y, a.c_p * a.c_p, a.k_p());
    let (m, n, g) = (cfg.m_exp, cfg.n_exp, cfg.gamma);
    let r1 = cfg.r1(a.p)?;
    let r2 = cfg.r2(a.p)?;
    let l1 = cfg.l1(a.p)?;
    let base = y * y * f1 * a.c_y * a.c_y;

    let bias_t1d = y
        * (m * (m - 1.0) * r1 * r1 * f2 * cp2 / 2.0 + m * (m + 1.0) * r1 * r1 * f1 * cp2 / 2.0
            - m * m * r1 * r1 * f2 * cp2
            + m * r1 * f3 * kp * cp2);
    let mse_t1d = base + y * y * (m * m * r1 * r1 * f3 * cp2 - 2.0 * m * r1 * kp * f3 * cp2);
    let bias_t2d = y
        * (-n * (n - 1.0) * f1 * cp2 / 2.0 + n * (n + 1.0) * f2 * cp2 / 2.0 + n * f2 * kp * cp2 + n * n * f2 * cp2
            + f3 * g * r2 * kp * cp2
            + f3 * g * r2 * n * cp2);
    let cross = match conv {
        Convention::StrictPrint => 0.0,
        Convention::SignConsistent => -2.0 * l1 * kp * f3 * cp2,
    };
    let mse_t2d = base + y * y * (l1 * l1 * f3 * cp2 + cross);
    Ok(TwoPhaseResult { bias_t1d, mse_t1d, bias_t2d, mse_t2d })
}

/// Two-phase weights with `h1 m R1 + h2 (n - gamma R2) = K_p` and zero bias.
pub fn solve_weights_two_phase(cfg: &TwoPhaseConfig, a: &AttributeSummary) -> Result<WeightTriple> {
    let r = two_phase_bias_mse(cfg, a, Convention::StrictPrint)?;
    let c1 = cfg.m_exp * cfg.r1(a.p)?;
    let c2 = cfg.l1(a.p)?;
    solve_block(c1, c2, r.bias_t1d, r.bias_t2d, a.k_p())
}

/// `L2 = h1 m R1 + h2 (n - gamma R2)`.
pub fn two_phase_l2(w: &WeightTriple, cfg: &TwoPhaseConfig, a: &AttributeSummary) -> Result<f64> {
    Ok(w.w1 * cfg.m_exp * cfg.r1(a.p)? + w.w2 * cfg.l1(a.p)?)
}

/// `Y^2 (f1 C_y^2 + L2^2 f3 C_p^2 - 2 L2 f3 K_p C_p^2)`.
pub fn two_phase_mse_tp(w: &WeightTriple, cfg: &TwoPhaseConfig, a: &AttributeSummary) -> Result<f64> {
    let l2 = two_phase_l2(w, cfg, a)?;
    let (f1, f3, cp2) = (a.f1(), a.f3()?, a.c_p * a.c_p);
    Ok(a.mean_y * a.mean_y * (f1 * a.c_y * a.c_y + l2 * l2 * f3 * cp2 - 2.0 * l2 * f3 * a.k_p() * cp2))
}

/// `Y^2 C_y^2 (f1 - f3 rho_pb^2)`.
pub fn two_phase_min_mse(a: &AttributeSummary) -> Result<f64> {
    Ok(a.mean_y * a.mean_y * a.c_y * a.c_y * (a.f1() - a.f3()? * a.rho_pb * a.rho_pb))
}

/// Symbols substituted into the appendix member rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sym {
    One,
    Beta2,
    Cp,
    Rho,
    BigN,
    SmallN,
    NP,
    SPhi,
    F,
    G,
    Kp,
    P,
}

impl Sym {
    pub fn value(self, a: &AttributeSummary) -> f64 {
        let f = a.n as f64 / a.big_n as f64;
        match self {
            Sym::One => 1.0,
            Sym::Beta2 => a.beta2_phi,
            Sym::Cp => a.c_p,
            Sym::Rho => a.rho_pb,
            Sym::BigN => a.big_n as f64,
            Sym::SmallN => a.n as f64,
            Sym::NP => a.big_n as f64 * a.p,
            Sym::SPhi => a.s_phi(),
            Sym::F => f,
            Sym::G => 1.0 - f,
            Sym::Kp => a.k_p(),
            Sym::P => a.p,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sym::One => "1",
            Sym::Beta2 => "beta2",
            Sym::Cp => "Cp",
            Sym::Rho => "rho",
            Sym::BigN => "N",
            Sym::SmallN => "n",
            Sym::NP => "NP",
            Sym::SPhi => "Sphi",
            Sym::F => "f",
            Sym::G => "g",
            Sym::Kp => "Kp",
            Sym::P => "P",
        }
    }
}

/// The 25 printed (first, second) constant pairs shared by all three
/// member families.
pub const MEMBER_ROWS: [(Sym, Sym); 25] = {
    use Sym::*;
    [
        (One, Cp),
        (One, Beta2),
        (Beta2, Cp),
        (Cp, Beta2),
        (One, Rho),
        (NP, SPhi),
        (NP, F),
        (Beta2, Kp),
        (NP, Kp),
        (BigN, One),
        (BigN, Cp),
        (BigN, Rho),
        (BigN, SPhi),
        (BigN, F),
        (BigN, G),
        (BigN, Kp),
        (SmallN, Rho),
        (SmallN, SPhi),
        (SmallN, F),
        (SmallN, G),
        (SmallN, Kp),
        (Beta2, P),
        (NP, P),
        (BigN, P),
        (SmallN, P),
    ]
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MemberFamily {
    /// Ratio-type t1 members, alpha = 1.
    ARatio,
    /// Product-type t1 members, alpha = -1.
    BProduct,
    /// Exponential t2 members, beta = 1 and lambda = -1.
    CExponential,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberRow {
    pub member_id: String,
    pub cfg: AttrClassConfig,
    pub bias: f64,
    pub mse: f64,
    pub pre: f64,
    /// Set when a denominator vanished; the row carries NaN values.
    pub skipped: bool,
}

/// Enumerates the printed members of a family and their PREs.
pub fn appendix_members(family: MemberFamily, a: &AttributeSummary) -> Vec<MemberRow> {
    let var = a.var_mean();
    let mut out = Vec::new();
    let mut push = |id: String, cfg: AttrClassConfig, r: Result<(f64, f64)>| {
        let (bias, mse, skipped) = match r {
            Ok((b, m)) => (b, m, false),
            Err(_) => (f64::NAN, f64::NAN, true),
        };
        let pre = if skipped { f64::NAN } else { crate::pre(var, mse) };
        out.push(MemberRow { member_id: id, cfg, bias, mse, pre, skipped });
    };
    match family {
        MemberFamily::ARatio | MemberFamily::BProduct => {
            let (alpha, tags) = if family == MemberFamily::ARatio { (1.0, ["1a", "1b"]) } else { (-1.0, ["1c", "1d"]) };
            for (k2, tag) in [(1.0, tags[0]), (-1.0, tags[1])] {
                for (i, (s1, s3)) in MEMBER_ROWS.iter().enumerate() {
                    let cfg = AttrClassConfig {
                        K1: s1.value(a),
                        K2: k2,
                        K3: s3.value(a),
                        K4: 0.0,
                        K5: 0.0,
                        alpha,
                        beta: 0.0,
                        lambda: 0.0,
                    };
                    push(format!("t{tag}{}", i + 1), cfg, bias_mse_t1(&cfg, a));
                }
            }
        }
        MemberFamily::CExponential => {
            for (i, (s4, s5)) in MEMBER_ROWS.iter().enumerate() {
                let cfg = AttrClassConfig {
                    K1: 0.0,
                    K2: 0.0,
                    K3: 0.0,
                    K4: s4.value(a),
                    K5: s5.value(a),
                    alpha: 0.0,
                    beta: 1.0,
                    lambda: -1.0,
                };
                push(format!("t2{}", i + 1), cfg, bias_mse_t2(&cfg, a));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pop1() -> AttributeSummary {
        AttributeSummary {
            big_n: 89,
            n: 20,
            mean_y: 3.36,
            p: 0.1236,
            c_y: 0.604,
            c_p: 2.19012,
            rho_pb: 0.766,
            beta2_phi: 6.2381,
            s_phi: None,
            n_prime: None,
            p_prime: None,
        }
    }

    #[test]
    fn alpha_zero_is_mean() {
        let a = pop1();
        let cfg = AttrClassConfig { alpha: 0.0, ..Default::default() };
        let (b, m) = bias_mse_t1(&cfg, &a).unwrap();
        assert_eq!(b, 0.0);
        assert!((m - a.var_mean()).abs() < 1e-15);
    }

    #[test]
    fn beta_lambda_zero_is_mean() {
        let a = pop1();
        let cfg = AttrClassConfig { beta: 0.0, lambda: 0.0, ..Default::default() };
        let (b, m) = bias_mse_t2(&cfg, &a).unwrap();
        assert_eq!(b, 0.0);
        assert!((m - a.var_mean()).abs() < 1e-15);
    }

    #[test]
    fn min_mse_limits() {
        let mut a = pop1();
        a.rho_pb = 0.0;
        assert_eq!(min_mse_tp(&a), a.var_mean());
        a.rho_pb = 1.0;
        assert_eq!(min_mse_tp(&a), 0.0);
    }

    #[test]
    fn zero_alpha_member_has_pre_100() {
        let a = pop1();
        let cfg = AttrClassConfig { alpha: 0.0, ..Default::default() };
        let (_, m) = bias_mse_t1(&cfg, &a).unwrap();
        assert!((crate::pre(a.var_mean(), m) - 100.0).abs() < 1e-12);
    }
}
