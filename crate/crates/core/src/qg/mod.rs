//! Quasi-geodesic checks, the constant chain for long minimizers, the shadowing
//! experiment and the cut-and-shift surgery comparison.

mod check;
mod constants;
mod shadow;
mod surgery;

pub use check::{default_lambda_grid, qg_check, qg_fit, QGCheck, QGFit, Side, WorstPair};
pub use constants::{choose_k_prime, compute_constants, PropConstants};
pub use shadow::{
    max_safe_n, measured_speed_bound, reports_to_csv, shadow_experiment, ShadowReport,
    ShadowSettings, DEFAULT_HORIZON, SPEED_SAFETY,
};
pub use surgery::{surgery_compare, SurgeryCase, SurgeryInput, SurgeryResult};
