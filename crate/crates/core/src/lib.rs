//! Exact computations with finite Lie-Rinehart algebras over the rationals:
//! Chevalley-Eilenberg-Rinehart cohomology, extensions classified by
//! 2-cocycles, and Chern-Weil classes built from the symmetric coalgebra on
//! the kernel of an extension.
//!
//! Every structure is generic over a [`Scalar`] field. The concrete
//! instantiation used throughout is [`Rational`] (arbitrary precision).

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod chernweil;
pub mod coalgebra;
pub mod cochain;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod lierinehart;
pub mod linalg;
pub mod scalar;
pub mod validation;

pub use algebra::{CommutativeAlgebra, Derivation};
pub use error::{Error, Result};
pub use lierinehart::{LieRinehartAlgebra, LrModule};
pub use linalg::{Matrix, Quotient};
pub use scalar::{format_rational, parse_rational, Scalar};
pub use validation::{ValidationReport, Violation};

/// Arbitrary-precision rational numbers, the ground field.
pub type Rational = num_rational::BigRational;
pub type QMatrix = Matrix<Rational>;
pub type QAlgebra = CommutativeAlgebra<Rational>;
pub type QLieRinehart = LieRinehartAlgebra<Rational>;
pub type QModule = LrModule<Rational>;
pub type QAltForm = cochain::AltForm<Rational>;
pub type QExtension = extension::Extension<Rational>;
