//! Bi-Cayley graphs over generalized quaternion groups: group arithmetic,
//! spectra, isomorphism testing and BCI verification.

pub mod bci;
pub mod bicayley;
pub mod error;
pub mod group;
pub mod iso;
pub mod poly;
pub mod scalar;
pub mod spectra;

pub use bicayley::{BiCayleyGraph, ConnectionSet};
pub use error::{Error, Result};
pub use group::{Automorphism, GqParams, GroupElement};
pub use poly::Polynomial;
pub use spectra::SpectrumSummary;

/// Double-double real, the default precision of the representation route.
pub type DoubleDouble = twofloat::TwoFloat;

/// Scalar used when callers do not choose one.
pub type DefaultReal = DoubleDouble;

/// Exact integer polynomial.
pub type IntPoly = Polynomial<num_bigint::BigInt>;
