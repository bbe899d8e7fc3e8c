//! Heights and arithmetic dynamics on the projective line.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`]: exact integer polynomials, binary forms, resultants,
//!   discriminants, cyclotomic polynomials, p-adic valuations and a certified
//!   complex root finder.
//! * [`proj`]: naive heights on `P^k(Q)`, enumeration of points of bounded
//!   height, Segre/Veronese/projection identities and morphisms.
//! * [`algebraic`]: heights of algebraic numbers through the Mahler measure,
//!   place-by-place decompositions and root-of-unity detection.
//! * [`dynamics`]: rational self-maps of `P^1` over `Q`, orbits, good
//!   reduction, canonical heights (global iteration and local decomposition)
//!   and rational preperiodic points.
//! * [`green`]: homogeneous escape rates, the Green pairing, discrepancy,
//!   transfinite diameter and equidistribution statistics.
//! * [`torus`]: heights and monomial maps on the multiplicative torus.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebraic;
pub mod dynamics;
pub mod error;
pub mod green;
pub mod numeric;
pub mod poly;
pub mod proj;
mod serde_util;
pub mod torus;

pub use error::{Error, Result};

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default tolerance used when a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-12;
