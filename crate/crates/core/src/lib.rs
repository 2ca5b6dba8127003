//! Sensitivity of a levitated optomechanical probe to Yukawa and chameleon
//! modifications of Newtonian gravity.

// `!(x > 0.0)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chameleon;
pub mod error;
pub mod exclusion;
pub mod forces;
pub mod numeric;
pub mod optomech;
pub mod presets;
pub mod units;

pub use error::{Error, QuadError, Result, RootError};
