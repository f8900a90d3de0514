//! Exact computations with free Lie algebras, their derivations and
//! automorphisms, trace cocycles, noncommutative log-determinants,
//! symplectic expansions and tree-diagram invariants.
//!
//! Every type is generic over an exact [`Scalar`] field. The aliases at the
//! crate root fix the field to arbitrary-precision rationals.

pub mod alphabet;
pub mod automorphism;
pub mod cyclic;
pub mod derivation;
pub mod error;
pub mod fox;
pub mod free_lie;
pub mod linalg;
pub mod magnus;
pub mod random;
pub mod scalar;
pub mod suites;
pub mod symplectic;
pub mod tensor;
pub mod trees;
pub mod word;

pub use alphabet::Alphabet;
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use word::Word;

/// The default coefficient field.
pub type Rational = num_rational::BigRational;

pub type Matrix = linalg::Matrix<Rational>;
pub type Tensor = tensor::Tensor<Rational>;
pub type LieBasisElement = free_lie::LieBasisElement<Rational>;
pub type CyclicElement = cyclic::CyclicElement<Rational>;
pub type SymElement = cyclic::SymElement<Rational>;
pub type Derivation = derivation::Derivation<Rational>;
pub type FilteredAutomorphism = automorphism::FilteredAutomorphism<Rational>;
pub type Expansion = fox::Expansion<Rational>;
pub type QuotientAlgebra = magnus::QuotientAlgebra<Rational>;
pub type RMatrix = magnus::RMatrix<Rational>;
pub type Tree = trees::Tree;
