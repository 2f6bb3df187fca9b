//! Integer scalar abstraction.
//!
//! Every computation in this crate is exact; thresholds that are rational
//! numbers on paper are resolved with integer ceiling division and order
//! comparisons are cross-multiplied. The algorithms are therefore written
//! against [`Int`], a blanket trait over the signed integer types of the
//! `num` family, so the same code runs on `i64` (the default used by the
//! CLI), `i128`, or `num_bigint::BigInt` when coefficients outgrow machine
//! words. Floating point is deliberately unsupported: ties at integral
//! thresholds decide breakpoints and must be bit-exact.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// A signed exact integer scalar.
pub trait Int:
    Integer + Signed + FromPrimitive + ToPrimitive + Clone + Debug + Display + Send + Sync + 'static
{
}

impl<T> Int for T where
    T: Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Builds a scalar from a machine integer. Panics only if the target type
/// cannot represent small constants, which no sensible scalar fails.
pub fn int<I: Int>(v: i64) -> I {
    I::from_i64(v).expect("integer constant out of range for scalar type")
}

/// Inclusive integer range `[from, to]` over any scalar.
pub fn range_incl<I: Int>(from: &I, to: &I) -> impl Iterator<Item = I> {
    num_iter::range_inclusive(from.clone(), to.clone())
}
