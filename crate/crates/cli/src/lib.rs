//! Command-line harness for the `hypasym` library.

pub mod app;
pub mod coeffs;
pub mod format;
pub mod sweep;
pub mod tables;

use hypasym::numerics::Precision;

/// Precision attached to oracle values and to expansion values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precisions {
    pub oracle: Precision,
    pub asymptotic: Precision,
}

impl Default for Precisions {
    fn default() -> Self {
        Precisions {
            oracle: Precision::Extended,
            asymptotic: Precision::Standard,
        }
    }
}

impl Precisions {
    /// Both sides forced to one precision, as `HYPASYM_PRECISION` requests.
    pub fn uniform(p: Precision) -> Self {
        Precisions {
            oracle: p,
            asymptotic: p,
        }
    }
}

pub const PRECISION_ENV: &str = "HYPASYM_PRECISION";

pub fn version_tag() -> String {
    format!("hypasym {}", env!("CARGO_PKG_VERSION"))
}
