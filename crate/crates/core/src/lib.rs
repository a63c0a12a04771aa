//! Quantum information geometry of parametrized density matrices.
//!
//! Every geometric quantity (quantum Fisher information, quantum metric, Berry
//! curvature, Christoffel symbols, classical Fisher information) is available
//! through two independent routes: direct formulas in [`geometry`], and
//! finite-difference derivatives of two-point generating functions
//! ([`genfun`], [`numdiff`]). The [`app`] layer sweeps grids and audits that
//! the routes agree.

// `!(a > b)` is used deliberately so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod error;
pub mod genfun;
pub mod geometry;
pub mod matcore;
pub mod numdiff;
pub mod states;

pub use error::{Error, Result};
