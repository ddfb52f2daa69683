//! Constructing and verifying schemes of double and reduced points in the
//! projective plane.
//!
//! Given any valid Hilbert function of a zero-dimensional scheme in P^2, the
//! [`builder`] module produces an explicit scheme of double and reduced points
//! realizing it, by seeding a k-configuration of reduced points on general
//! lines and repeatedly merging three reduced points into a double point at a
//! line intersection, an operation that preserves the Hilbert function.
//!
//! Every construction can be checked by two independent Hilbert-function
//! engines: the closed form computed from a strictly decreasing full reduction
//! vector ([`scheme::ReductionVector::hilbert_function`]) and a brute-force
//! rank computation on the multiplicity-conditions matrix ([`oracle`]).
//! All arithmetic is exact over the rationals.

pub mod builder;
pub mod geometry;
pub mod hf;
pub mod linalg;
pub mod oracle;
pub mod rng;
pub mod scheme;

pub use builder::{ConstructionTrace, LabeledScheme};
pub use geometry::{Arrangement, ProjLine, ProjPoint, Rational};
pub use hf::{ConjugatePartition, DeltaH, HilbertFunction};
pub use scheme::{FatPointScheme, ReductionVector};
