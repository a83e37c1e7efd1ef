//! Extremals of the subcritical Riesz-potential equation
//! f^{q-1}(x) = ∫_Ω f(y) |x - y|^{α-n} dy on bounded domains, and the
//! diagnostics that track their concentration as q approaches
//! 2n/(n+α).
//!
//! Layers, bottom up:
//!
//! * [`analytic`]: exponents, Γ, sharp constants and the whole-space bubble.
//! * [`discretization`]: grids, the discrete kernel, energy and quotient.
//! * [`solver`]: the fixed-point extremal solver and q-continuation.
//! * [`blowup`]: per-q records and the asymptotic checks.
//! * [`cli`]: experiment configs, CSV output and the `rbl` commands.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod blowup;
pub mod cli;
pub mod discretization;
pub mod error;
pub mod exec;
pub mod solver;

pub use error::{Error, Result};
pub use exec::Execution;
