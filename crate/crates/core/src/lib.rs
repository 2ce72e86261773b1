//! Emergent algebras: idempotent quasigroups indexed by a scale group whose
//! approximate operations converge as the scale tends to the absolute.
//!
//! The crate is organised bottom-up:
//!
//! - [`scale`]: the commutative scale groups and nets toward the absolute;
//! - [`algebra`]: the generic dilation interface, the derived approximate
//!   operations and the axiom checkers;
//! - [`models`]: concrete dilation models;
//! - [`groupoid`]: the trivial pair groupoid and its deformation;
//! - [`limits`]: numerical limits, uniformity probes and the conical group check.

pub mod algebra;
pub mod error;
pub mod groupoid;
pub mod limits;
pub mod models;
pub mod point;
pub mod sampling;
pub mod scale;

pub use algebra::{
    approx_diff, approx_inv, approx_sum, blue_construction, bullet, op, CheckReport, DilationModel,
};
pub use error::{Error, Result};
pub use groupoid::Arrow;
pub use limits::{CompactSample, ConvergenceReport, Expr};
pub use models::{ModelId, ModelSpec};
pub use point::Point;
pub use scale::{AbsoluteNet, ScaleElement, ScaleKind};
