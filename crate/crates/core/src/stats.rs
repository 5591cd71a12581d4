//! Population summaries and the shared moment machinery.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const COV_REL_TOL: f64 = 1e-6;

/// Raw per-stratum record as it appears in a JSON document. Each covariance
/// may be given directly or through its correlation; at least one is needed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratumInput {
    #[serde(rename = "N_h")]
    pub big_n: u64,
    #[serde(rename = "n_h")]
    pub n: u64,
    pub mean_y: f64,
    pub mean_x: f64,
    pub mean_z: f64,
    #[serde(rename = "S_y")]
    pub s_y: f64,
    #[serde(rename = "S_x")]
    pub s_x: f64,
    #[serde(rename = "S_z")]
    pub s_z: f64,
    #[serde(rename = "S_yx", default, skip_serializing_if = "Option::is_none")]
    pub s_yx: Option<f64>,
    #[serde(rename = "S_yz", default, skip_serializing_if = "Option::is_none")]
    pub s_yz: Option<f64>,
    #[serde(rename = "S_xz", default, skip_serializing_if = "Option::is_none")]
    pub s_xz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_yx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_yz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_xz: Option<f64>,
}

/// Validated stratum moments with covariances and correlations both filled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumStats {
    pub big_n: u64,
    pub n: u64,
    pub mean_y: f64,
    pub mean_x: f64,
    pub mean_z: f64,
    pub s_y: f64,
    pub s_x: f64,
    pub s_z: f64,
    pub s_yx: f64,
    pub s_yz: f64,
    pub s_xz: f64,
    pub rho_yx: f64,
    pub rho_yz: f64,
    pub rho_xz: f64,
}

fn resolve_pair(
    name: &str,
    cov: Option<f64>,
    rho: Option<f64>,
    sa: f64,
    sb: f64,
) -> Result<(f64, f64)> {
    let denom = sa * sb;
    let (cov, rho) = match (cov, rho) {
        (Some(c), Some(r)) => {
            let implied = r * denom;
            let scale = c.abs().max(implied.abs()).max(f64::MIN_POSITIVE);
            if (c - implied).abs() / scale > COV_REL_TOL {
                return Err(Error::InvalidInput(format!(
                    "covariance S_{name}={c} inconsistent with rho_{name}*S*S={implied}"
                )));
            }
            (c, r)
        }
        (Some(c), None) => (c, if denom > 0.0 { c / denom } else { 0.0 }),
        (None, Some(r)) => (r * denom, r),
        (None, None) => {
            return Err(Error::InvalidInput(format!(
                "stratum needs S_{name} or rho_{name}"
            )))
        }
    };
    if rho.abs() > 1.0 + 1e-12 {
        return Err(Error::InvalidInput(format!("|rho_{name}| = {} > 1", rho.abs())));
    }
    Ok((cov, rho))
}

impl StratumStats {
    pub fn from_input(inp: &StratumInput) -> Result<Self> {
        if inp.n < 2 || inp.n > inp.big_n {
            return Err(Error::InvalidInput(format!(
                "stratum sizes must satisfy N_h >= n_h >= 2 (N_h={}, n_h={})",
                inp.big_n, inp.n
            )));
        }
        for (nm, s) in [("S_y", inp.s_y), ("S_x", inp.s_x), ("S_z", inp.s_z)] {
            if !(s >= 0.0) {
                return Err(Error::InvalidInput(format!("{nm} must be >= 0")));
            }
        }
        let (s_yx, rho_yx) = resolve_pair("yx", inp.s_yx, inp.rho_yx, inp.s_y, inp.s_x)?;
        let (s_yz, rho_yz) = resolve_pair("yz", inp.s_yz, inp.rho_yz, inp.s_y, inp.s_z)?;
        let (s_xz, rho_xz) = resolve_pair("xz", inp.s_xz, inp.rho_xz, inp.s_x, inp.s_z)?;
        Ok(StratumStats {
            big_n: inp.big_n,
            n: inp.n,
            mean_y: inp.mean_y,
            mean_x: inp.mean_x,
            mean_z: inp.mean_z,
            s_y: inp.s_y,
            s_x: inp.s_x,
            s_z: inp.s_z,
            s_yx,
            s_yz,
            s_xz,
            rho_yx,
            rho_yz,
            rho_xz,
        })
    }

    /// Finite-population factor `1/n_h - 1/N_h`.
    pub fn f(&self) -> f64 {
        1.0 / self.n as f64 - 1.0 / self.big_n as f64
    }
}

/// A stratified population with its weighted overall means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratifiedPopulation {
    pub strata: Vec<StratumStats>,
    pub big_n: u64,
    pub n: u64,
    pub mean_y: f64,
    pub mean_x: f64,
    pub mean_z: f64,
}

impl StratifiedPopulation {
    pub fn new(strata: Vec<StratumStats>) -> Result<Self> {
        if strata.is_empty() {
            return Err(Error::InvalidInput("no strata".into()));
        }
        let big_n: u64 = strata.iter().map(|s| s.big_n).sum();
        let n: u64 = strata.iter().map(|s| s.n).sum();
        let nf = big_n as f64;
        let wmean = |g: fn(&StratumStats) -> f64| {
            strata.iter().map(|s| s.big_n as f64 / nf * g(s)).sum::<f64>()
        };
        let mean_y = wmean(|s| s.mean_y);
        let mean_x = wmean(|s| s.mean_x);
        let mean_z = wmean(|s| s.mean_z);
        Ok(StratifiedPopulation { strata, big_n, n, mean_y, mean_x, mean_z })
    }

    pub fn from_inputs(inputs: &[StratumInput]) -> Result<Self> {
        let strata = inputs.iter().map(StratumStats::from_input).collect::<Result<Vec<_>>>()?;
        Self::new(strata)
    }

    /// Stratum weight `N_h / N`.
    pub fn weight(&self, s: &StratumStats) -> f64 {
        s.big_n as f64 / self.big_n as f64
    }

    /// Sum over strata of `W_h^2 f_h g(stratum)`.
    pub fn pooled(&self, g: impl Fn(&StratumStats) -> f64) -> f64 {
        self.strata
            .iter()
            .map(|s| {
                let w = self.weight(s);
                w * w * s.f() * g(s)
            })
            .sum()
    }
}

/// Relative second moments of the sampling errors of (y, x, z).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct VMoments {
    pub V200: f64,
    pub V020: f64,
    pub V002: f64,
    pub V110: f64,
    pub V101: f64,
    pub V011: f64,
}

impl VMoments {
    /// Cauchy-Schwarz on every off-diagonal entry, with relative slack `tol`.
    pub fn satisfies_cauchy_schwarz(&self, tol: f64) -> bool {
        let ok = |c: f64, a: f64, b: f64| c.abs() <= (a * b).sqrt() * (1.0 + tol) + tol * f64::EPSILON;
        self.V200 >= 0.0
            && self.V020 >= 0.0
            && self.V002 >= 0.0
            && ok(self.V110, self.V200, self.V020)
            && ok(self.V101, self.V200, self.V002)
            && ok(self.V011, self.V020, self.V002)
    }
}

pub fn v_moments(pop: &StratifiedPopulation) -> Result<VMoments> {
    let (y, x, z) = (pop.mean_y, pop.mean_x, pop.mean_z);
    if y == 0.0 {
        return Err(Error::DegenerateMean("Y"));
    }
    if x == 0.0 {
        return Err(Error::DegenerateMean("X"));
    }
    if z == 0.0 {
        return Err(Error::DegenerateMean("Z"));
    }
    Ok(VMoments {
        V200: pop.pooled(|s| s.s_y * s.s_y) / (y * y),
        V020: pop.pooled(|s| s.s_x * s.s_x) / (x * x),
        V002: pop.pooled(|s| s.s_z * s.s_z) / (z * z),
        V110: pop.pooled(|s| s.s_yx) / (y * x),
        V101: pop.pooled(|s| s.s_yz) / (y * z),
        V011: pop.pooled(|s| s.s_xz) / (x * z),
    })
}

/// Pooled regression coefficients `(B1h, B2h)` of y on x and on z.
pub fn regression_coefficients(pop: &StratifiedPopulation) -> Result<(f64, f64)> {
    let dx = pop.pooled(|s| s.s_x * s.s_x);
    let dz = pop.pooled(|s| s.s_z * s.s_z);
    if dx == 0.0 || dz == 0.0 {
        return Err(Error::DegenerateAuxVariance);
    }
    let b1 = pop.pooled(|s| s.rho_yx * s.s_y * s.s_x) / dx;
    let b2 = pop.pooled(|s| s.rho_yz * s.s_y * s.s_z) / dz;
    Ok((b1, b2))
}

/// Summary of a y-x pair under simple random sampling without replacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SrsSummary {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub n: u64,
    pub mean_y: f64,
    pub mean_x: f64,
    #[serde(rename = "C_y")]
    pub c_y: f64,
    #[serde(rename = "C_x")]
    pub c_x: f64,
    pub rho: f64,
}

impl SrsSummary {
    pub fn validate(&self) -> Result<()> {
        if !(self.big_n > self.n && self.n >= 2) {
            return Err(Error::InvalidInput("SRS summary requires N > n >= 2".into()));
        }
        if !(self.c_y >= 0.0 && self.c_x >= 0.0) {
            return Err(Error::InvalidInput("coefficients of variation must be >= 0".into()));
        }
        if self.rho.abs() > 1.0 {
            return Err(Error::InvalidInput("|rho| > 1".into()));
        }
        Ok(())
    }

    /// `(N - n) / (N n)`.
    pub fn lambda(&self) -> f64 {
        (self.big_n - self.n) as f64 / (self.big_n as f64 * self.n as f64)
    }

    /// `n / (N - n)`.
    pub fn h(&self) -> f64 {
        self.n as f64 / (self.big_n - self.n) as f64
    }

    pub fn f(&self) -> f64 {
        self.n as f64 / self.big_n as f64
    }

    pub fn c_yx(&self) -> f64 {
        self.rho * self.c_y * self.c_x
    }
}

/// Summary of a study variable with a binary auxiliary attribute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttributeSummary {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub n: u64,
    pub mean_y: f64,
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "C_y")]
    pub c_y: f64,
    #[serde(rename = "C_p")]
    pub c_p: f64,
    pub rho_pb: f64,
    #[serde(default)]
    pub beta2_phi: f64,
    #[serde(rename = "S_phi", default, skip_serializing_if = "Option::is_none")]
    pub s_phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_prime: Option<f64>,
}

impl AttributeSummary {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidInput("P must lie in (0, 1)".into()));
        }
        if !(self.f1() > 0.0) {
            return Err(Error::InvalidInput("f1 must be positive (N > n)".into()));
        }
        if let Some(np) = self.n_prime {
            if !(self.big_n > np && np > self.n) {
                return Err(Error::InvalidInput("two-phase sizes require N > n' > n".into()));
            }
        }
        Ok(())
    }

    /// `1/n - 1/N`.
    pub fn f1(&self) -> f64 {
        1.0 / self.n as f64 - 1.0 / self.big_n as f64
    }

    /// `1/n' - 1/N`.
    pub fn f2(&self) -> Result<f64> {
        let np = self.n_prime.ok_or(Error::TwoPhaseRequired)?;
        Ok(1.0 / np as f64 - 1.0 / self.big_n as f64)
    }

    /// `1/n - 1/n'`.
    pub fn f3(&self) -> Result<f64> {
        let np = self.n_prime.ok_or(Error::TwoPhaseRequired)?;
        Ok(1.0 / self.n as f64 - 1.0 / np as f64)
    }

    /// `rho_pb C_y / C_p`.
    pub fn k_p(&self) -> f64 {
        self.rho_pb * self.c_y / self.c_p
    }

    /// Attribute standard deviation, `C_p P` unless supplied.
    pub fn s_phi(&self) -> f64 {
        self.s_phi.unwrap_or(self.c_p * self.p)
    }

    /// Variance of the sample mean, `Y^2 f1 C_y^2`.
    pub fn var_mean(&self) -> f64 {
        self.mean_y * self.mean_y * self.f1() * self.c_y * self.c_y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(f_n: u64, f_nn: u64, s_y: f64, y: f64) -> StratumInput {
        StratumInput {
            big_n: f_n,
            n: f_nn,
            mean_y: y,
            mean_x: 5.0,
            mean_z: 3.0,
            s_y,
            s_x: 1.0,
            s_z: 1.0,
            s_yx: None,
            s_yz: None,
            s_xz: None,
            rho_yx: Some(0.5),
            rho_yz: Some(0.2),
            rho_xz: Some(0.1),
        }
    }

    #[test]
    fn single_stratum_v200() {
        // 1/50 - 1/100 = 0.01
        let pop = StratifiedPopulation::from_inputs(&[one(100, 50, 2.0, 10.0)]).unwrap();
        let v = v_moments(&pop).unwrap();
        assert!((v.V200 - 4e-4).abs() < 1e-15);
    }

    #[test]
    fn census_gives_zero_moments() {
        let pop = StratifiedPopulation::from_inputs(&[one(40, 40, 2.0, 10.0), one(30, 30, 1.0, 4.0)]).unwrap();
        let v = v_moments(&pop).unwrap();
        assert_eq!(v, VMoments::default());
    }

    #[test]
    fn inconsistent_covariance_rejected() {
        let mut s = one(100, 50, 2.0, 10.0);
        s.s_yx = Some(5.0);
        assert!(StratumStats::from_input(&s).is_err());
        s.s_yx = Some(1.0);
        assert!(StratumStats::from_input(&s).is_ok());
    }

    #[test]
    fn zero_mean_rejected() {
        let pop = StratifiedPopulation::from_inputs(&[one(100, 50, 2.0, 0.0)]).unwrap();
        assert_eq!(v_moments(&pop), Err(Error::DegenerateMean("Y")));
    }

    #[test]
    fn regression_trivial_cases() {
        let mut s = one(100, 50, 1.0, 10.0);
        s.rho_yx = Some(1.0);
        let pop = StratifiedPopulation::from_inputs(&[s.clone()]).unwrap();
        assert!((regression_coefficients(&pop).unwrap().0 - 1.0).abs() < 1e-15);
        s.rho_yx = Some(0.0);
        let pop = StratifiedPopulation::from_inputs(&[s]).unwrap();
        assert_eq!(regression_coefficients(&pop).unwrap().0, 0.0);
    }

    #[test]
    fn srs_lambda_identity() {
        let s = SrsSummary { big_n: 106, n: 20, mean_y: 1.0, mean_x: 1.0, c_y: 1.0, c_x: 1.0, rho: 0.5 };
        assert_eq!(s.lambda(), 86.0 / 2120.0);
        assert!((s.lambda() - (1.0 / 20.0 - 1.0 / 106.0)).abs() < 1e-16);
        assert!((s.h() * s.lambda() * 106.0 * 20.0 - 20.0).abs() < 1e-12);
    }
}
