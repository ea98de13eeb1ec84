//! Exact computational machinery for integral representations of finite
//! groups and the R-infinity property of the flat manifolds they come from.
//!
//! The pipeline: close a finite subgroup of GL(n,Z) from generators, locate
//! its maximal normal elementary abelian 2-subgroup, split the space into
//! character blocks, compute the integral normalizer through the
//! automorphism-intertwiner loop, and search eigenvalue-1 witnesses for
//! every normalizer element, constructively and by brute force. The result
//! is a machine-checkable JSON certificate that an independent replay
//! routine re-validates from the document alone.
//!
//! All arithmetic is exact: arbitrary-precision rationals and integers,
//! no floating point anywhere. The matrix core is generic over its scalar
//! (see [`scalar::Scalar`] and [`scalar::Field`]); the concrete aliases
//! below fix the two instantiations everything else works with.

pub mod certificate;
pub mod clifford;
pub mod fixtures;
pub mod group;
pub mod matrix;
pub mod normalizer;
pub mod perm;
pub mod reidemeister;
pub mod scalar;
pub mod witness;

/// Arbitrary-precision integer scalar.
pub type Integer = num_bigint::BigInt;

/// Arbitrary-precision rational scalar, always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Dense matrix over [`Rational`].
pub type RatMatrix = matrix::Matrix<Rational>;

/// Dense matrix over [`Integer`]; the carrier for group elements.
pub type IntMatrix = matrix::Matrix<Integer>;

pub use certificate::{certify_rinf, replay, CertificateDocument, CertifyOptions};
pub use clifford::{decompose_restriction, is_absolutely_irreducible, BlockDecomposition};
pub use group::{GroupAutomorphism, MatrixGroup};
pub use matrix::{LinalgError, Matrix, SmithNormalForm};
pub use normalizer::{compute_normalizer, NormalizerElement, NormalizerGroup};
pub use perm::{block_perm_matrix, check_odd_degree_lemma, PermGroup, Permutation};
pub use reidemeister::{reidemeister_finite, reidemeister_torus, FiniteGroupTable, TorusCount};
pub use witness::{brute_force_table, constructive_table, WitnessTable};
