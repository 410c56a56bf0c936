//! Numerical toolkit for the fourth-order simply supported beam operator
//!
//! ```text
//! T[p,c] u = u'''' - p u'' + c(t) u,   t in [a, b],
//! u(a) = u(b) = 0,   u''(a) = d1 <= 0,   u''(b) = d2 <= 0.
//! ```
//!
//! The crate computes the spectral thresholds that govern the maximum and
//! anti-maximum principles of `T[p,c]`, evaluates the sufficient conditions
//! for strong inverse positivity/negativity, solves the boundary-value
//! problems with a banded finite-difference scheme, and certifies the sign
//! of computed solutions.
//!
//! Module map:
//!
//! - [`fields`]: grids, sampled functions, quadrature, differences, norms.
//! - [`spectrum`]: eigenvalues of `T[p,0]`, the transcendental thresholds
//!   and the contraction constants.
//! - [`greens`]: modal and discrete Green's functions, boundary-influence
//!   functions and sign scans.
//! - [`solver`]: operator assembly, direct/superposition/fixed-point solves
//!   and sign certificates.
//! - [`principles`]: the verdict engine.
//!
//! With the default `parallel` feature, column-wise Green's constructions
//! and batch verification run on the rayon pool; see [`Execution`].

pub mod banded;
mod error;
mod exec;
pub mod fields;
pub mod greens;
pub mod principles;
pub mod solver;
pub mod spectrum;

pub use error::{Error, Result};
pub use exec::Execution;
pub use fields::{Grid, Interval, ProblemSpec, ScalarField};
pub use greens::{GreensMatrix, GreensSignReport};
pub use principles::{Rule, Verdict};
pub use solver::{Method, OperatorMatrix, SignCertificate, SolutionField};
pub use spectrum::SpectralData;
