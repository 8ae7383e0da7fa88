//! Exact symbolic kernel for semi-quasi-homogeneous plane branches
//! y^k = x^n + ..., their Legendrian conormal curves, and normal forms under
//! relative contact transformations.
//!
//! Everything is computed over arbitrary-precision rationals at a fixed
//! truncation, so all checks in the test suites are exact: no tolerances.
//!
//! Module map:
//! - [`series`] — the truncated-series ring (univariate and trivariate);
//! - [`branch`] — normalized branch parametrizations, Puiseux invariants,
//!   implicitization;
//! - [`conormal`] — conormal lifts, the valuation oracle, tangent cones,
//!   smooth-surface containment;
//! - [`contact`] — contact transformations, the Cauchy solver, pullback
//!   certificates;
//! - [`versal`] — deformation bases B and C, monomial cleaning, the
//!   equisingular and microlocal reduction algorithms;
//! - [`classify`] — scaling orbits, the (4,11) moduli, the rigidity table;
//! - [`verify`] — the self-check suites behind `legn verify`.

pub mod branch;
pub mod classify;
pub mod conormal;
pub mod contact;
pub mod error;
pub mod io;
pub mod parallel;
pub mod rat;
pub mod series;
pub mod verify;
pub mod versal;
pub mod weights;

pub use error::{Error, Result};
pub use rat::Rat;
pub use series::{Mono3, TruncSeries3, UniSeries, Var};
pub use weights::WeightSystem;
