use serde::{Deserialize, Serialize};

/// Selects between formulas exactly as printed and their algebraically
/// consistent counterparts wherever the two disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    StrictPrint,
    SignConsistent,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::StrictPrint => "strict-print",
            Convention::SignConsistent => "sign-consistent",
        }
    }
}
