//! Exact combinatorics of Hilbert functions of coherent sheaves on the
//! projective plane.
//!
//! Starting from the multiplicities `a(n)`, `b(n)` of a free presentation
//! (or from a window of Hilbert-function values), the crate computes:
//!
//! - the first-difference function `h` with its rank, degree, deficiency
//!   and filterability/classification predicates ([`fdh`]);
//! - the breakpoints `tau_i` and thresholds `nu_i` of the weak
//!   Harder-Narasimhan filtration, by two independent routes: a brute-force
//!   scan of the defining upper envelope and the effective recursion over
//!   purged candidate breakpoints ([`whn`]);
//! - the graded pieces of the filtration, their rank-one decompositions and
//!   the slope order chain ([`filtration`]);
//! - a split model sheaf (twisted ideal sheaves plus a torsion curve piece)
//!   with integer certificates for restriction type, Hom/Ext vanishing,
//!   Harder-Narasimhan compatibility and resolution reassembly
//!   ([`sheaf_model`]);
//! - seeded random corpora and the composite per-instance check suite used
//!   by the differential verifier ([`corpus`], [`checks`]).
//!
//! All arithmetic is exact over a generic signed integer scalar
//! ([`scalar::Int`]); `i64` aliases are provided at the crate root.

pub mod checks;
pub mod corpus;
pub mod error;
pub mod fdh;
pub mod filtration;
pub mod scalar;
pub mod sheaf_model;
pub mod support;
pub mod whn;

pub use error::Error;
pub use fdh::{ChangDescription, Classification, FdhFunction};
pub use filtration::{GradedPiece, OrderRelation, RankOnePiece, WhnGraded};
pub use scalar::Int;
pub use sheaf_model::{Certificate, CertificateKind, CertificateReason, ModelSheaf};
pub use support::SupportSeq;
pub use whn::{ExtInt, WhnResult};

/// Concrete aliases over the default `i64` scalar used by the CLI.
pub type Seq64 = SupportSeq<i64>;
pub type Fdh64 = FdhFunction<i64>;
pub type Whn64 = WhnResult<i64>;
pub type Ext64 = ExtInt<i64>;
