//! Named tolerances, centralized so every module and every report agrees on
//! what "zero" means at each precision tier.

use serde::{Deserialize, Serialize};

/// Frame orthonormality and CR-structure residuals.
pub const TOL_FRAME: f64 = 1e-10;
/// Identities that chain several computed quantities (Gauss traces, warp
/// identity, inequality slacks).
pub const TOL_IDENTITY: f64 = 1e-8;
/// Purely algebraic rearrangements evaluated in floating point.
pub const TOL_EXACT: f64 = 1e-12;
/// Sampled Grassmannian minimization versus the true infimum.
pub const TOL_OPT: f64 = 1e-6;

/// The working tolerance set; scenarios may override individual entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "default_frame")]
    pub frame: f64,
    #[serde(default = "default_identity")]
    pub identity: f64,
    #[serde(default = "default_exact")]
    pub exact: f64,
    #[serde(default = "default_opt")]
    pub opt: f64,
}

fn default_frame() -> f64 {
    TOL_FRAME
}
fn default_identity() -> f64 {
    TOL_IDENTITY
}
fn default_exact() -> f64 {
    TOL_EXACT
}
fn default_opt() -> f64 {
    TOL_OPT
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            frame: TOL_FRAME,
            identity: TOL_IDENTITY,
            exact: TOL_EXACT,
            opt: TOL_OPT,
        }
    }
}

impl Tolerances {
    /// Threshold for equality-case classification. Classification happens in
    /// a frame produced by a sampled minimizer, so it is granted one decade
    /// of slop over the identity tier.
    pub fn equality(&self) -> f64 {
        10.0 * self.identity
    }
}
