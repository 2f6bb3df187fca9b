//! Crate error type.

use std::fmt;

use crate::scalar::Int;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error<I: Int> {
    /// Some partial sum of the presentation difference is negative, so the
    /// data does not define a valid function (a general presentation map
    /// with these multiplicities is not injective).
    NotFdh { n: I, partial_sum: I },
    /// A Hilbert-value window whose third difference has not stabilized at
    /// the given boundary; the support of the presentation cannot be
    /// recovered from it.
    WindowTooNarrow { boundary: I },
    /// Hilbert-value windows must be indexed by consecutive integers.
    NonConsecutiveWindow { expected: I, found: I },
    /// The deficiency sum diverges for a nonzero function of rank zero.
    DeficiencyUndefinedForTorsion,
    /// `split_at` was asked to cut at a point where the function is not
    /// filterable.
    NotFilterableAt { m: I },
    /// Rank-one decomposition requires a torsion-free piece whose envelope
    /// argmax takes exactly two values.
    NotTrivialWhn,
    /// The slope order is only defined for torsion-free functions of
    /// positive rank.
    OrderUndefined,
}

impl<I: Int> fmt::Display for Error<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotFdh { n, partial_sum } => {
                write!(f, "not an FDH function: partial sum at n={n} is {partial_sum} < 0")
            }
            Error::WindowTooNarrow { boundary } => {
                write!(f, "window too narrow: third difference not stabilized at n={boundary}")
            }
            Error::NonConsecutiveWindow { expected, found } => {
                write!(f, "window indices must be consecutive: expected {expected}, found {found}")
            }
            Error::DeficiencyUndefinedForTorsion => {
                write!(f, "deficiency is undefined for nonzero functions of rank 0")
            }
            Error::NotFilterableAt { m } => write!(f, "function is not filterable at m={m}"),
            Error::NotTrivialWhn => {
                write!(f, "piece is not a torsion-free function with trivial filtration")
            }
            Error::OrderUndefined => {
                write!(f, "slope order undefined for rank-0 input")
            }
        }
    }
}

impl<I: Int> std::error::Error for Error<I> {}
