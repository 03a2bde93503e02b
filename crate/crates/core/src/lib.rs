//! Curvature invariants and sharp inequalities for CR-warped product
//! submanifolds of complex space forms.
//!
//! The crate evaluates concrete immersions into flat C^m (or synthetic
//! second-fundamental-form data for any holomorphic curvature c), extracts
//! adapted frames and extrinsic data, and verifies at sample points:
//!
//! * the fundamental CR identity tying scalar curvature, ‖h‖² and ‖H‖²,
//! * the warped-product identity Σ K(e_a ∧ e_A) = n₂Δf/f,
//! * the first Chen inequality for each warped factor, with its full slack
//!   decomposition replayed term by term,
//! * the canonical shape-operator structure of the equality case, and
//! * the necessary conditions for minimality (including negative
//!   semi-definiteness of the Ricci form in a flat ambient).
//!
//! Modules follow the pipeline: [`numeric`] (jets, frames, plane search) →
//! [`ambient`] (the complex space form) → [`dsl`] / [`immersion`] (charts)
//! → [`warped`] (warping data) → [`chen`] (invariants and inequalities) →
//! [`pipeline`] (scenarios and reports, surfaced by the CLI).

pub mod ambient;
pub mod chen;
pub mod dsl;
pub mod error;
pub mod gallery;
pub mod immersion;
pub mod numeric;
pub mod pipeline;
pub mod tol;
pub mod warped;

pub use error::{Error, Result};
pub use tol::Tolerances;
