//! Exact computation of sparse resultants and perturbed u-resultants for
//! square polynomial systems whose zero sets may have positive-dimensional
//! components, together with the combinatorial machinery (mixed volumes,
//! coherent mixed subdivisions, fills) they are built on.
//!
//! The pieces, bottom up:
//!
//! - [`field`], [`poly`], [`matrix`], [`univar`] — arbitrary-precision
//!   rational and prime-field arithmetic, sparse multivariate polynomials in
//!   canonical graded-lex form, fraction-free determinants, univariate root
//!   extraction.
//! - [`geom`] — lattice point configurations, exact hulls and volumes in
//!   low dimension, lifting-induced fine mixed subdivisions, mixed volumes.
//! - [`fill`] — essential subsets and the face criterion certifying that a
//!   sub-tuple of supports preserves the mixed volume.
//! - [`resultant`] — sparse resultants via subdivision-based matrices with
//!   exact quotient extraction and randomized-retry contracts.
//! - [`gcp`] — the perturbed u-resultant H(u;s) of F - sF* against a
//!   symbolic tag polynomial, its trailing coefficient, fan compatibility,
//!   and tag-support selection.
//! - [`rootfind`] — splitting the trailing coefficient into linear factors
//!   and converting them to residual-checked roots.
//! - [`problem`] — the JSON problem-file schema shared with the CLI.
//!
//! Everything is exact; randomized choices (liftings, shifts, splitting
//! lines) are drawn from seeded deterministic streams, so equal seeds give
//! byte-identical results.

pub mod error;
pub mod field;
pub mod fill;
pub mod gcp;
pub mod geom;
pub mod matrix;
pub mod par;
pub mod poly;
pub mod problem;
pub mod resultant;
pub mod rng;
pub mod rootfind;
pub mod univar;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElem};
pub use poly::MultiPoly;
