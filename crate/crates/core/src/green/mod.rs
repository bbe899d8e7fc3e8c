//! Escape rates, the pairing `G`, discrepancies and equidistribution
//! statistics at the archimedean place.

mod escape;
mod fekete;
mod pairing;

pub use escape::{EscapeRateField, Membership};
pub use fekete::{transfinite_diameter, transfinite_sweep, TransfiniteReport, DEFAULT_RESTARTS};
pub use pairing::{
    annulus_mass_bound, baker_constant, baker_fit, baker_mean_pairing, bilu_moment_test,
    discrepancy, discrete_energy, g_pairing, height_discrepancy_check, mean_pairing, unit_root,
    AnnulusReport, BakerReport, BiluMoments, CProjPoint, EmpiricalMeasure, FiniteDiscrepancy,
    GValue, HeightDiscrepancy, Moment,
};
