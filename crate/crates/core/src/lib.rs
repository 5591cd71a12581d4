//! Numerical workbench for survey-sampling estimator MSE formulas and
//! two-warehouse inventory models, each paired with an independent oracle.

pub mod attribute;
pub mod convention;
pub mod eoq;
pub mod error;
pub mod fuzzy;
pub mod horizon;
pub mod oracle;
pub mod repro;
pub mod srs;
pub mod stats;
pub mod stratified;
pub mod validate;

pub use convention::Convention;
pub use error::{Error, Result};

/// Percent relative efficiency `100 * baseline / candidate`, `+inf` when the
/// candidate MSE is zero.
pub fn pre(baseline: f64, candidate: f64) -> f64 {
    if candidate == 0.0 {
        f64::INFINITY
    } else {
        100.0 * baseline / candidate
    }
}
