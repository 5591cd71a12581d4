//! Independent validation engines used by tests, `validate` and `repro`.

pub mod mc;
pub mod numeric;
pub mod population;
