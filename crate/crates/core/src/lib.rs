//! Discrete Gaussian curvature on piecewise flat surfaces.
//!
//! The curvature at a marked point is its angle defect divided by the area of
//! its Voronoi cell. The crate computes it on any closed oriented triangulated
//! surface, evaluates the energies whose critical points are metrics of
//! constant discrete Gaussian curvature within a discrete conformal class, and
//! finds such metrics with a gauge-fixed Newton method.
//!
//! Module map:
//!
//! - [`surface`]: half-edge combinatorics with loops and multi-edges, edge flips.
//! - [`geometry`]: Euclidean triangle quantities, the Lobachevsky function and
//!   the per-triangle energy `f`.
//! - [`conformal`]: discrete metrics, conformal scaling, Delaunay flips, angle
//!   defects, Voronoi areas and curvature reports.
//! - [`energy`]: the energies `E`, `A_tot` and `F = E - pi chi log A_tot` with
//!   gradients and Hessians.
//! - [`solver`]: constant-curvature solver and one-parameter scans / root finding.
//! - [`families`]: the tetrahedron and genus-2 families with non-unique
//!   constant-curvature metrics.
//! - [`shapes`]: small reference surfaces used by tests and fixtures.

// Negated comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conformal;
pub mod energy;
mod error;
pub mod families;
pub mod geometry;
pub mod shapes;
pub mod solver;
pub mod surface;

pub use conformal::{ConformalFactor, CurvatureReport, DiscreteMetric};
pub use energy::{EnergyEval, Hessian};
pub use error::{Error, Result};
pub use families::{Family, FamilyConfig, FamilyMember};
pub use solver::{Gauge, SolveResult, SolverOptions};
pub use surface::MarkedSurface;
