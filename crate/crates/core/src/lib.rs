//! Deterministic low-rank matrix completion driven by lattice walks in the
//! support pattern.

pub mod certificate;
pub mod completion;
pub mod conditions;
pub mod error;
pub mod generators;
pub mod lattice;
pub mod minor;
pub mod removability;
pub mod scalar;

pub use error::*;
pub use lattice::{LatticePoint, Mask, Walk};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Rational = num::BigRational;
