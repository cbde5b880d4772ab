//! Exact flag-algebra engine for 3-edge-colored complete graphs.

pub mod basis;
pub mod blowup;
pub mod candidates;
pub mod canon;
pub mod certificate;
pub mod density;
pub mod domination;
pub mod epsilon;
pub mod error;
pub mod flag;
pub mod graph;
pub mod json;
pub mod lp;
pub mod vector;

pub use basis::{enumerate_unlabeled, Basis};
pub use canon::{canonical_form, CanonicalForm};
pub use density::density;
pub use flag::{enumerate_flags, flag_density, Flag, FlagKey, FlagVector, TypeSigma};
pub use graph::{Color, ColorPerm, TricoloredGraph};
pub use vector::RationalVector;

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
