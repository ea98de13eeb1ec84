//! Scalar traits for exact matrix computations.
//!
//! The matrix machinery is generic over its entry type. [`Scalar`] is the
//! minimal ring interface; [`Field`] additionally requires exact division
//! and unlocks the elimination-based algorithms. Only exact scalars are
//! registered as fields here: every downstream decision (kernel dimension,
//! eigenvalue tests, unimodularity) is used as a proof obligation, so
//! floating point is never admitted.

use std::fmt::Debug;
use std::ops::{Div, Neg, Sub};

use num_traits::{One, Zero};

/// Commutative ring scalar usable as a matrix entry.
pub trait Scalar:
    Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}

/// Scalar with exact division by nonzero elements.
pub trait Field: Scalar + Div<Output = Self> {}

impl Field for num_rational::BigRational {}
