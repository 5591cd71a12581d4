//! Generic numeric oracles: adaptive Simpson quadrature, exhaustive grid
//! minimisation, finite differences and bracketed bisection.

use rayon::prelude::*;

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 50;

fn checked(f: &impl Fn(f64) -> f64, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("x = {x}")))
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = checked(f, lm)?;
    let frm = checked(f, rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1)?
        + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1)?)
}

/// Adaptive Simpson integral of `f` over `[lo, hi]` to absolute tolerance `tol`.
///
/// The interval is pre-split into 16 panels so that integrands with narrow
/// features are not mistaken for polynomials at the first level.
pub fn quadrature(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain("quadrature bounds must be finite".into()));
    }
    if lo == hi {
        return Ok(0.0);
    }
    const PANELS: usize = 16;
    let w = (hi - lo) / PANELS as f64;
    let mut total = 0.0;
    for i in 0..PANELS {
        let a = lo + w * i as f64;
        let b = if i + 1 == PANELS { hi } else { a + w };
        let fa = checked(&f, a)?;
        let fb = checked(&f, b)?;
        let fm = checked(&f, 0.5 * (a + b))?;
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_rec(&f, a, b, fa, fm, fb, whole, tol / PANELS as f64, 0)?;
    }
    Ok(total)
}

/// Result of an exhaustive grid scan.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMin {
    pub argmin: Vec<f64>,
    pub min: f64,
    pub evaluations: usize,
}

/// Inclusive grid `lo, lo + step, ...` up to `hi` (with a half-step guard).
pub fn grid_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| lo + step * i as f64).collect()
}

/// Exhaustive minimisation of `f` over the tensor grid of `axes`. Points where
/// `f` is not finite are treated as outside the feasible set. The scan is
/// parallel over the first axis; ties resolve to the lowest index.
pub fn grid_min(f: impl Fn(&[f64]) -> f64 + Sync, axes: &[Vec<f64>]) -> Result<GridMin> {
    if axes.is_empty() || axes.iter().any(|a| a.is_empty()) {
        return Err(Error::Domain("empty grid".into()));
    }
    let rest: Vec<&Vec<f64>> = axes[1..].iter().collect();
    let inner_count: usize = rest.iter().map(|a| a.len()).product();
    let best = axes[0]
        .par_iter()
        .enumerate()
        .map(|(i0, &x0)| {
            let mut point = vec![x0; axes.len()];
            let mut best: Option<(f64, usize)> = None;
            for j in 0..inner_count {
                let mut rem = j;
                for (d, axis) in rest.iter().enumerate().rev() {
                    point[d + 1] = axis[rem % axis.len()];
                    rem /= axis.len();
                }
                let v = f(&point);
                if v.is_finite() && best.map_or(true, |(b, _)| v < b) {
                    best = Some((v, i0 * inner_count + j));
                }
            }
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(x), Some(y)) => Some(if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x }),
                (x, None) => x,
                (None, y) => y,
            },
        );
    let (min, flat) = best.ok_or_else(|| Error::NonFinite("grid has no finite value".into()))?;
    let mut argmin = vec![0.0; axes.len()];
    argmin[0] = axes[0][flat / inner_count];
    let mut rem = flat % inner_count;
    for (d, axis) in rest.iter().enumerate().rev() {
        argmin[d + 1] = axis[rem % axis.len()];
        rem /= axis.len();
    }
    Ok(GridMin { argmin, min, evaluations: axes.iter().map(|a| a.len()).product() })
}

/// Central first derivative.
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Central second derivative.
pub fn second_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Bisection for a sign change of `g` on `[lo, hi]`, to absolute width `tol`.
pub fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut glo = g(lo);
    let ghi = g(hi);
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    if glo.signum() == ghi.signum() || !glo.is_finite() || !ghi.is_finite() {
        return Err(Error::Domain(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
