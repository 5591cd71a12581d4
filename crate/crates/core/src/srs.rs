//! Ratio/product families under simple random sampling with a known
//! auxiliary mean: the general (a, b, alpha, g) family, its dual-transform
//! counterpart, the k-scaled variant and the two-constant class t_M.

use serde::{Deserialize, Serialize};

use crate::convention::Convention;
use crate::error::{Error, Result};
use crate::stats::SrsSummary;

/// `t = y [ (aX + b) / (alpha (a x + b) + (1 - alpha)(aX + b)) ]^g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub a_coef: f64,
    pub b_coef: f64,
    pub alpha: f64,
    pub g: f64,
}

impl FamilyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.g != 0.0 && self.a_coef == 0.0 {
            return Err(Error::InvalidInput("a must be nonzero when g != 0".into()));
        }
        Ok(())
    }

    /// `aX / (aX + b)`.
    pub fn v(&self, mean_x: f64) -> f64 {
        let ax = self.a_coef * mean_x;
        ax / (ax + self.b_coef)
    }

    /// First-order MSE `lambda Y^2 (C_y^2 + (g alpha v)^2 C_x^2 - 2 g alpha v rho C_y C_x)`.
    pub fn mse(&self, s: &SrsSummary) -> f64 {
        let t = self.g * self.alpha * self.v(s.mean_x);
        s.lambda() * s.mean_y * s.mean_y * (s.c_y * s.c_y + t * t * s.c_x * s.c_x - 2.0 * t * s.c_yx())
    }

    /// The estimator evaluated on sample means.
    pub fn estimate(&self, ybar: f64, xbar: f64, mean_x: f64) -> f64 {
        if self.g == 0.0 {
            return ybar;
        }
        let big = self.a_coef * mean_x + self.b_coef;
        let small = self.a_coef * xbar + self.b_coef;
        ybar * (big / (self.alpha * small + (1.0 - self.alpha) * big)).powf(self.g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassicalId {
    T0,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
}

impl ClassicalId {
    pub const ALL: [ClassicalId; 7] = [Self::T0, Self::T1, Self::T2, Self::T3, Self::T4, Self::T5, Self::T6];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// Family constants: t1/t2 plain, t3/t4 shifted by C_x, t5/t6 by rho;
    /// odd members are ratio-type, even members product-type.
    pub fn config(self, s: &SrsSummary) -> FamilyConfig {
        let (b, g) = match self {
            Self::T0 => (0.0, 0.0),
            Self::T1 => (0.0, 1.0),
            Self::T2 => (0.0, -1.0),
            Self::T3 => (s.c_x, 1.0),
            Self::T4 => (s.c_x, -1.0),
            Self::T5 => (s.rho, 1.0),
            Self::T6 => (s.rho, -1.0),
        };
        FamilyConfig { a_coef: 1.0, b_coef: b, alpha: 1.0, g }
    }
}

/// Shift factor `v` of members 1..6: 1, X/(X+C_x), X/(X+rho).
fn shift(i: usize, s: &SrsSummary) -> f64 {
    match (i + 1) / 2 {
        1 => 1.0,
        2 => s.mean_x / (s.mean_x + s.c_x),
        _ => s.mean_x / (s.mean_x + s.rho),
    }
}

pub fn mse_classical(est: ClassicalId, s: &SrsSummary) -> f64 {
    let lam = s.lambda();
    let y2 = s.mean_y * s.mean_y;
    if est == ClassicalId::T0 {
        return lam * y2 * s.c_y * s.c_y;
    }
    let i = est.index();
    let v = shift(i, s);
    let sign = if i % 2 == 1 { -1.0 } else { 1.0 };
    lam * y2 * (s.c_y * s.c_y + v * v * s.c_x * s.c_x + sign * 2.0 * v * s.rho * s.c_x * s.c_y)
}

/// Dual-transform member `i` in 1..=6: `h^2` times its classical counterpart.
pub fn mse_dual(i: usize, s: &SrsSummary) -> Result<f64> {
    let id = ClassicalId::from_index(i)
        .filter(|_| i >= 1)
        .ok_or_else(|| Error::InvalidInput(format!("dual member {i} out of 1..=6")))?;
    let h = s.h();
    Ok(h * h * mse_classical(id, s))
}

/// Scaling constant and MSE of the k-scaled member `i` in 1..=6.
pub fn mse_yadav_kadilar(i: usize, s: &SrsSummary, conv: Convention) -> Result<(f64, f64)> {
    if !(1..=6).contains(&i) {
        return Err(Error::InvalidInput(format!("scaled member {i} out of 1..=6")));
    }
    let lam = s.lambda();
    let h2 = s.h() * s.h();
    let (cy2, cx2, cyx) = (s.c_y * s.c_y, s.c_x * s.c_x, s.c_yx());
    let v = shift(i, s);
    let ratio = i % 2 == 1;
    let (num, den) = if ratio {
        (
            h2 * (lam * v * v * cx2 - v * lam * cyx) + 1.0,
            h2 * (3.0 * v * v * cx2 * lam - 4.0 * v * cyx * lam + lam * cy2) + 1.0,
        )
    } else {
        match (conv, i) {
            (Convention::StrictPrint, 4 | 6) => (
                h2 * (lam * v * lam * cyx) + 1.0,
                h2 * (3.0 * v * v * cx2 * lam + 4.0 * v * cyx * lam + lam * cy2) + 1.0,
            ),
            _ => (
                h2 * (v * lam * cyx) + 1.0,
                h2 * (v * v * cx2 * lam + 4.0 * v * cyx * lam + lam * cy2) + 1.0,
            ),
        }
    };
    if den == 0.0 {
        return Err(Error::DegenerateScaling(["k1", "k2", "k3", "k4", "k5", "k6"][i - 1]));
    }
    let k = num / den;
    Ok((k, yk_mse(k, v, ratio, s)))
}

/// MSE of a k-scaled member at an arbitrary scaling constant `k`.
pub fn yk_mse(k: f64, v: f64, ratio: bool, s: &SrsSummary) -> f64 {
    let lam = s.lambda();
    let h2 = s.h() * s.h();
    let (cy2, cx2, cyx) = (s.c_y * s.c_y, s.c_x * s.c_x, s.c_yx());
    let inner = if ratio {
        k * k * lam * cy2 + (3.0 * k * k - 2.0 * k) * v * v * lam * cx2 - 2.0 * v * (2.0 * k * k - k) * lam * cyx
    } else {
        k * k * lam * cy2 + k * k * v * v * lam * cx2 + 2.0 * v * (2.0 * k * k - k) * lam * cyx
    };
    s.mean_y * s.mean_y * (h2 * inner + (k - 1.0) * (k - 1.0))
}

/// Shift factor of scaled member `i`, exposed for reporting.
pub fn member_shift(i: usize, s: &SrsSummary) -> f64 {
    shift(i, s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TmConfig {
    pub psi: f64,
    pub delta: f64,
    pub omega: f64,
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl TmConfig {
    pub fn r1(&self, mean_x: f64) -> Result<f64> {
        let d = self.psi * mean_x + self.delta;
        if d == 0.0 {
            return Err(Error::InvalidInput("psi X + delta = 0".into()));
        }
        Ok(self.psi * mean_x / d)
    }

    pub fn r2(&self, mean_x: f64) -> Result<f64> {
        let d = self.omega * mean_x + self.mu;
        if d == 0.0 {
            return Err(Error::InvalidInput("omega X + mu = 0".into()));
        }
        Ok(self.omega * mean_x / d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct TmSolution {
    pub m1: f64,
    pub m2: f64,
    pub L1: f64,
    pub L2: f64,
    pub L3: f64,
    pub L4: f64,
    pub T: [f64; 5],
    pub mse: f64,
}

/// `Y^2 + m1^2 T1 + m2^2 T2 + 2 m1 m2 T3 - 2 m1 T4 - 2 m2 T5`.
pub fn tm_mse_at(t: &[f64; 5], y: f64, m1: f64, m2: f64) -> f64 {
    y * y + m1 * m1 * t[0] + m2 * m2 * t[1] + 2.0 * m1 * m2 * t[2] - 2.0 * m1 * t[3] - 2.0 * m2 * t[4]
}

pub fn solve_tm(cfg: &TmConfig, s: &SrsSummary) -> Result<TmSolution> {
    let (y, x) = (s.mean_y, s.mean_x);
    let lam = s.lambda();
    let h = s.h();
    let h2 = h * h;
    let r1 = cfg.r1(x)?;
    let r2 = cfg.r2(x)?;
    let (a, b) = (cfg.alpha, cfg.beta);
    let (cy, cx, rho) = (s.c_y, s.c_x, s.rho);
    let cx2 = cx * cx;

    let l1 = a * r1 * h + b * h * r2 / 2.0;
    let l2 = a * (a + 1.0) * h2 * r1 * r1 / 2.0
        + a * b * h2 * r1 * r2 / 2.0
        + b * b * h2 * r2 * r2 / 8.0
        + b * h2 * r2 * r2 / 4.0;
    let l3 = a * h2 * r1 + b * h2 * r2 / 2.0;
    let l4 = l3;

    let t1 = y * y
        * (1.0 + lam * h2 * cy * cy + l1 * l1 * lam * cx2 - 2.0 * h * l1 * lam * rho * cy * cx
            + 2.0 * l2 * lam * cx2
            - 2.0 * l3 * lam * rho * cy * cx);
    let t2 = h2 * lam * x * x * cx2;
    let t3 = y * x * (l4 * lam * cx2 + l1 * lam * h * cx2 - h2 * lam * rho * cy * cx);
    let t4 = y * y * (1.0 + l2 * lam * cx2 - l3 * lam * rho * cy * cx);
    let t5 = y * x * l4 * lam * cx2;

    let det = t1 * t2 - t3 * t3;
    if det == 0.0 || !det.is_finite() || det.abs() <= 1e-14 * (t1 * t2).abs() {
        return Err(Error::DegenerateTMatrix);
    }
    let m1 = (t2 * t4 - t3 * t5) / det;
    let m2 = (t1 * t5 - t3 * t4) / det;
    let t = [t1, t2, t3, t4, t5];
    Ok(TmSolution { m1, m2, L1: l1, L2: l2, L3: l3, L4: l4, T: t, mse: tm_mse_at(&t, y, m1, m2) })
}
