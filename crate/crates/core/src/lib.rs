#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evaluator;
pub mod lg;
pub mod numerics;
pub mod oracle;
pub mod phase;
pub mod point;
pub mod saddle;
pub mod temme;

pub use error::{Error, Result};
pub use evaluator::{compare, decay_fit, evaluate, Branch, BranchReport, Config, ExpansionResult};
pub use point::EvalPoint;
