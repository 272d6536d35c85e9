//! Bruhat cell decompositions of real Grassmannians `G_k(ℝⁿ)`, their oriented
//! double covers, and the complement quotients of `G_k(ℝ^{2k})`.
//!
//! Cells are indexed by signed involutions. [`covering`] lists the codimension
//! one faces, [`incidence`] assigns the incidence numbers and orientation
//! signs, [`complex`] assembles the integer chain complexes and their homology,
//! and [`numerics`] re-derives the signs by transporting orientations along
//! explicit paths in floating point.

pub mod complex;
pub mod covering;
pub mod incidence;
pub mod involutions;
pub mod numerics;

pub use complex::{build_complex, homology, verify_d_squared, ChainComplex, Coefficients, HomologyResult, Variant};
pub use covering::{covering_pairs, signed_covers, RiseType, SignedCover};
pub use incidence::{incidence, orid, IncidenceRecord};
pub use involutions::{enumerate_cells, CellId, Sign, SignedInvolution};

/// Double-precision orthogonal involution.
pub type OrthogonalInvolution = numerics::OrthogonalInvolution<f64>;
/// Double-precision path point.
pub type PathPoint = numerics::PathPoint<f64>;
