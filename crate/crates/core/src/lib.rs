//! Numerical and exact machinery for harmonic Riemannian manifolds.
//!
//! The crate follows the computational skeleton behind the classification of
//! compact harmonic manifolds:
//!
//! * [`model_spaces`] catalogs the rank-one symmetric spaces with their curvature
//!   spectra, closed-form volume densities and density exponents `(alpha, beta)`.
//! * [`jacobi`] integrates the Jacobi tensor equation `J'' + R J = 0` along a
//!   geodesic and derives density and mean-curvature profiles from it.
//! * [`radial_ode`] solves the singular radial eigenfunction equation
//!   `y'' + H y' + lambda y = 0`, numerically and through the exact
//!   cosine-polynomial recursion.
//! * [`trig_poly`] holds the polynomial algebra: multiple-angle expansion, roots,
//!   Gauss-Lucas and interlacing checks, and density-form fitting.
//! * [`embedding`] realizes the nice embedding at desk scale: weighted norms,
//!   embedding constants, screw lines, congruence recovery and checks on `S^2`.
//!
//! The `harmonic` binary wraps these into verification pipelines.

// `!(x > y)` is used on purpose so that NaN falls into the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod embedding;
pub mod cli;
pub mod error;
pub mod jacobi;
pub mod model_spaces;
mod ode;
pub mod poly;
pub mod profile;
pub mod quadrature;
pub mod radial_ode;
pub mod report;
pub mod trig_poly;
pub mod verify;

pub use error::{Error, Result};
pub use model_spaces::{CurvatureSpectrum, ExponentPair, Family, ModelSpace};
pub use poly::{CosPolynomial, ExactCosPolynomial};
pub use profile::RadialProfile;
