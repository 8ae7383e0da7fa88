//! Exact truncated series: univariate in s, weight-truncated trivariate in
//! x, y, p.

pub mod tri;
pub mod uni;

pub use tri::{Mono3, TruncSeries3, Var};
pub use uni::UniSeries;
