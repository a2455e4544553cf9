//! Norm-dependent random matrix ensembles in an external field.
//!
//! The crate implements, for the orthogonal, unitary and symplectic
//! symmetry classes:
//!
//! * the density families P(Tr H^2) (Gaussian, bound-trace, fixed-trace,
//!   Gauss-monomial, Gauss-quartic, non-extensive, grid),
//!   their normalization, moments and Fourier transform;
//! * the exact one-integral map between ordinary-space densities and their
//!   superspace partners, with closed forms for all analytic families and
//!   the inverse (derivative) map for even degrees of freedom;
//! * spread-function (Gaussian scale-mixture) representations;
//! * the unitary-class correlation kernel with an external field, in
//!   closed form plus two independent numerical oracles, and the k-point
//!   correlation functions built from it;
//! * Monte Carlo sampling of all families with deterministic parallel
//!   streams, histogram comparisons and moment estimates;
//! * a small Grassmann algebra used to verify the boundary-value
//!   normalization of superspace integrals numerically.

pub mod correlations;
pub mod densities;
pub mod error;
pub mod kernel;
pub mod matrix;
pub mod montecarlo;
pub mod quad;
pub mod selftest;
pub mod specfun;
pub mod spread;
pub mod superalgebra;
pub mod supertransform;

pub use densities::{DensityFamily, MomentReport};
pub use error::{Error, Result};
pub use matrix::{Beta, EnsembleSpec, ExternalField, RandomMatrix, SymmetryClass};
pub use quad::{QuadRule, Quadrature, QuadratureSpec};
