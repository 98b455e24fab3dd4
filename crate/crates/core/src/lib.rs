//! Higher-order twist and bend derivatives of geodesic trace and length
//! functions on hyperbolic surfaces.
//!
//! The input is the intersection pattern of a closed geodesic `γ` with a
//! simple multicurve `β`: the length `L` of `γ` and, for each crossing, its
//! offset along `γ` and the crossing angle. From that data the crate
//! computes `T^(k)(0)` and `L^(k)(0)` for the left twist flow along `β`
//! in two independent ways:
//!
//! - [`closed_form`]: the combinatorial expansion in terms of the constants
//!   `B_{n,k,r}` and the functions `F_r`, `G_r`;
//! - [`oracle`]: the trace of the deformed holonomy `R_1(z)⋯R_n(z)γ`
//!   expanded in truncated power series ([`jets`]).
//!
//! Bend derivatives are the twist derivatives rotated by `i^k`.

pub mod cli;
pub mod closed_form;
pub mod combinatorics;
pub mod error;
pub mod formula;
pub mod jets;
pub mod mat2;
pub mod model;
pub mod oracle;
pub mod report;

pub use error::{Error, Result};
pub use jets::Jet;
pub use mat2::Mat2;
pub use model::{IntersectionConfig, IntersectionPoint};
pub use report::{DerivativeReport, Source};

/// `|value - reference| / max(1, |reference|)`.
///
/// Every tolerance in this crate is expressed in this measure, which is
/// relative for large values and absolute near zero.
pub fn relative_difference(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}
