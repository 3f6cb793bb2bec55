//! Precision-controlled arithmetic and the special-function kernel.

pub mod cdd;
pub mod cheb;
pub mod dd;
pub mod gamma;
pub mod jet;
pub mod quad;
pub mod sum;
pub mod value;

pub use cdd::CDD;
pub use dd::DD;
pub use gamma::{complex_gamma, log_gamma_asymptotic, GammaProductSeries, StirlingExpansion};
pub use jet::SeriesJet;
pub use sum::{compensated_sum, CompensatedSum};
pub use value::{ComplexValue, Precision};
