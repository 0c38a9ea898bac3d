//! Steklov eigenvalues of the Helmholtz equation on 2D domains.
//!
//! The pipeline: triangulate one of the benchmark domains ([`mesh`]),
//! assemble the P1 stiffness/mass/boundary-mass matrices ([`assembly`]),
//! factor the shifted Helmholtz matrix and reduce the generalized eigenvalue
//! problem to a small dense Neumann-to-Dirichlet matrix on the boundary
//! ([`reduction`]), then locate (complex) eigenvalues in a region of the
//! complex plane with a recursive contour-integral indicator search ([`rim`]).
//! Exact unit-disk eigenvalues from complex-argument Bessel functions
//! ([`reference`]) serve as convergence baselines, and [`harness`] drives the
//! end-to-end experiments and rate fits.

pub mod assembly;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod mesh;
pub mod reduction;
pub mod reference;
pub mod rim;

pub use error::{Result, SteklovError};
