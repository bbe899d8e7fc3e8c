//! Rational self-maps of `P^1` over `Q`.

pub mod arch;
mod canonical;
mod map;
mod orbit;
mod preperiodic;

pub use arch::{ArchEstimate, ArchEvaluator};
pub use canonical::{
    canonical_height, canonical_height_global, canonical_height_global_with_budget,
    canonical_height_local, canonical_height_local_with_budget, commuting_height_agreement,
    AgreementReport, ArchimedeanPart, FinitePlace, GlobalHeight, LocalHeightLedger, DIGIT_BUDGET,
};
pub use map::{MapConstants, RationalMap};
pub use orbit::{iterate, OrbitRecord, OrbitStatus};
pub use preperiodic::{northcott_bound, preperiodic_points_rational, NorthcottBound};
