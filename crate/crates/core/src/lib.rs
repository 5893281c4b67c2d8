//! Combinatorics and parameter-plane structure of Lorenz maps.
//!
//! A Lorenz map is a map of `[P, Q]` with two increasing branches that jump at
//! 0 and fix both endpoints. This crate computes kneading sequences and branch
//! partitions, finds renormalizations (first-return maps to an interval around
//! 0 that are again Lorenz maps), and maps out the islands of renormalizable
//! parameters in the monotone quadratic two-parameter family.
//!
//! Map arithmetic is generic over [`Scalar`], so the same code runs in `f64`,
//! `f32` or exact rationals; see the aliases below.

pub mod error;
pub mod family;
pub mod map;
pub mod renorm;
pub mod roots;
pub mod scalar;
pub mod symbolic;

pub use error::{LorenzError, Result};
pub use map::{LorenzMap, MapKind, Side, SignedPoint};
pub use scalar::Scalar;
pub use symbolic::{kneading, KneadingPair, Symbol, Word};

pub use num_rational::BigRational;

/// Double-precision map, used by the family and parameter scans.
pub type Map64 = LorenzMap<f64>;
/// Single-precision map.
pub type Map32 = LorenzMap<f32>;
/// Map with exact rational arithmetic.
pub type ExactMap = LorenzMap<BigRational>;

pub type Point64 = SignedPoint<f64>;
pub type ExactPoint = SignedPoint<BigRational>;

pub type Renormalization64 = renorm::Renormalization<f64>;
pub type ExactRenormalization = renorm::Renormalization<BigRational>;
