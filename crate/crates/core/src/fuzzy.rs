//! Trapezoidal fuzzy numbers with componentwise arithmetic and graded-mean
//! defuzzification.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quadruple `(c, a, b, d)`. Ordering is only required by [`membership`].
/// Serialized as `[c, a, b, d]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct TrapezoidalFuzzy {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl From<[f64; 4]> for TrapezoidalFuzzy {
    fn from(v: [f64; 4]) -> Self {
        TrapezoidalFuzzy { c: v[0], a: v[1], b: v[2], d: v[3] }
    }
}

impl From<TrapezoidalFuzzy> for [f64; 4] {
    fn from(t: TrapezoidalFuzzy) -> Self {
        t.to_array()
    }
}

impl TrapezoidalFuzzy {
    pub const fn new(c: f64, a: f64, b: f64, d: f64) -> Self {
        TrapezoidalFuzzy { c, a, b, d }
    }

    pub const fn crisp(x: f64) -> Self {
        TrapezoidalFuzzy { c: x, a: x, b: x, d: x }
    }

    pub const fn triangular(c: f64, a: f64, d: f64) -> Self {
        TrapezoidalFuzzy { c, a, b: a, d }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.c, self.a, self.b, self.d]
    }

    pub fn is_canonical(&self) -> bool {
        self.c <= self.a && self.a <= self.b && self.b <= self.d
    }

    /// Component `i` in 0..4.
    pub fn get(&self, i: usize) -> f64 {
        self.to_array()[i]
    }

    /// `(-d, -b, -a, -c)`, so that `A - B = A + neg(B)`.
    pub fn neg(self) -> Self {
        TrapezoidalFuzzy { c: -self.d, a: -self.b, b: -self.a, d: -self.c }
    }

    pub fn scale(self, k: f64) -> Self {
        TrapezoidalFuzzy { c: k * self.c, a: k * self.a, b: k * self.b, d: k * self.d }
    }

    pub fn div(self, rhs: Self) -> Result<Self> {
        fuzzy_div(self, rhs)
    }
}

impl Add for TrapezoidalFuzzy {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        fuzzy_add(self, r)
    }
}

impl Sub for TrapezoidalFuzzy {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        fuzzy_sub(self, r)
    }
}

impl Mul for TrapezoidalFuzzy {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        fuzzy_mul(self, r)
    }
}

pub fn fuzzy_add(x: TrapezoidalFuzzy, y: TrapezoidalFuzzy) -> TrapezoidalFuzzy {
    TrapezoidalFuzzy { c: x.c + y.c, a: x.a + y.a, b: x.b + y.b, d: x.d + y.d }
}

pub fn fuzzy_sub(x: TrapezoidalFuzzy, y: TrapezoidalFuzzy) -> TrapezoidalFuzzy {
    TrapezoidalFuzzy { c: x.c - y.d, a: x.a - y.b, b: x.b - y.a, d: x.d - y.c }
}

pub fn fuzzy_mul(x: TrapezoidalFuzzy, y: TrapezoidalFuzzy) -> TrapezoidalFuzzy {
    TrapezoidalFuzzy { c: x.c * y.c, a: x.a * y.a, b: x.b * y.b, d: x.d * y.d }
}

pub fn fuzzy_div(x: TrapezoidalFuzzy, y: TrapezoidalFuzzy) -> Result<TrapezoidalFuzzy> {
    if y.to_array().iter().any(|&v| v <= 0.0) {
        return Err(Error::FuzzyDivisionByZero);
    }
    Ok(TrapezoidalFuzzy { c: x.c / y.d, a: x.a / y.b, b: x.b / y.a, d: x.d / y.c })
}

/// `(c + 2a + 2b + d) / 6`.
pub fn graded_mean(t: &TrapezoidalFuzzy) -> f64 {
    (t.c + 2.0 * t.a + 2.0 * t.b + t.d) / 6.0
}

/// Piecewise-linear trapezoid membership.
pub fn membership(x: f64, t: &TrapezoidalFuzzy) -> Result<f64> {
    if !t.is_canonical() {
        return Err(Error::NonCanonicalFuzzy);
    }
    Ok(if x < t.c || x > t.d {
        0.0
    } else if x < t.a {
        (x - t.c) / (t.a - t.c)
    } else if x <= t.b {
        1.0
    } else {
        (t.d - x) / (t.d - t.b)
    })
}

/// Graded mean via its defining integral
/// `int_0^1 h (L^-1(h) + R^-1(h)) / 2 dh / int_0^1 h dh`,
/// with `L^-1(h) = c + (a - c) h` and `R^-1(h) = d - (d - b) h`.
pub fn graded_mean_integral(t: &TrapezoidalFuzzy, tol: f64) -> Result<f64> {
    if !t.is_canonical() {
        return Err(Error::NonCanonicalFuzzy);
    }
    let t = *t;
    let num = crate::oracle::numeric::quadrature(
        |h| h * ((t.c + (t.a - t.c) * h) + (t.d - (t.d - t.b) * h)) / 2.0,
        0.0,
        1.0,
        tol,
    )?;
    Ok(num / 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_examples() {
        let a = TrapezoidalFuzzy::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(a + TrapezoidalFuzzy::crisp(0.0), a);
        assert_eq!((a - a).to_array(), [-3.0, -1.0, 1.0, 3.0]);
        assert_eq!(fuzzy_div(a, a).unwrap().to_array(), [0.25, 2.0 / 3.0, 1.5, 4.0]);
        assert_eq!(graded_mean(&a), 2.5);
        assert_eq!(membership(0.5, &TrapezoidalFuzzy::new(0.0, 1.0, 2.0, 3.0)).unwrap(), 0.5);
    }

    #[test]
    fn division_guard() {
        let a = TrapezoidalFuzzy::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(fuzzy_div(a, TrapezoidalFuzzy::new(0.0, 1.0, 2.0, 3.0)), Err(Error::FuzzyDivisionByZero));
    }

    #[test]
    fn non_canonical_membership_rejected() {
        let t = TrapezoidalFuzzy::new(1900.0, 2000.0, 2000.0, 1900.0);
        assert_eq!(membership(1950.0, &t), Err(Error::NonCanonicalFuzzy));
        assert!((graded_mean(&t) - (1900.0 + 8000.0 + 1900.0) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn json_roundtrip() {
        let t: TrapezoidalFuzzy = serde_json::from_str("[1,2,3,4]").unwrap();
        assert_eq!(t, TrapezoidalFuzzy::new(1.0, 2.0, 3.0, 4.0));
        assert_eq!(serde_json::to_string(&t).unwrap(), "[1.0,2.0,3.0,4.0]");
    }
}
