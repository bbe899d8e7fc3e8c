//! Exact polynomial arithmetic and the certified root finder.

pub mod cyclotomic;
pub mod dd;
pub mod factor;
pub mod form;
pub mod intpoly;
pub mod padic;
pub mod resultant;
pub mod roots;

pub use cyclotomic::{cyclotomic, euler_phi, phi_inverse};
pub use factor::{factor, prime_divisors};
pub use form::BinaryForm;
pub use intpoly::IntPoly;
pub use padic::{vp, vp_int, vp_u64, PadicValuation, Valuation};
pub use resultant::{
    discriminant, monic_discriminant, nullstellensatz_cofactors, resultant, resultant_univariate,
    NullstellensatzCofactors,
};
pub use roots::{aberth, complex_roots, CertifiedRoot};
