//! Wright-function machinery and explicit self-similar solutions of two
//! fractional one-phase Stefan problems.
//!
//! * [`specfun`] evaluates Wright, Mainardi, error and Gamma functions.
//! * [`frcalc`] is an independent quadrature oracle for Riemann–Liouville
//!   integrals, Caputo derivatives (L1 scheme) and Riemann–Liouville
//!   derivatives on uniform grids.
//! * [`equations`] defines the transcendental equations for the front
//!   coefficients and solves them with a bracketing method.
//! * [`stefan`] evaluates the closed-form temperature, flux and front of the
//!   Caputo problem, the Riemann–Liouville-flux problem and the classical
//!   problem, plus residual checks of each governing condition.
//! * [`verify`] runs batch sweeps and produces serializable reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN
pub mod equations;
pub mod error;
pub mod frcalc;
pub mod par;
pub mod specfun;
pub mod stefan;
pub mod verify;

pub use error::{Error, Result};
pub use par::Execution;
pub use specfun::Alpha;
