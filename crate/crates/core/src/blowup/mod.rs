//! Concentration diagnostics for sweeps approaching the critical exponent.

mod checks;
mod kelvin;
mod monotone;
mod profile;
mod record;
mod sweep;

pub use checks::{
    concentration_scale, dirac_limit_check, dirac_value, envelope_check, envelope_ratios,
    extremal_node, mu_power, mu_power_check, product_limit_check, Bump,
};
pub use kelvin::{kelvin_transform, KelvinTransform};
pub use monotone::{boundary_monotonicity_check, MonotoneOptions, MonotoneReport};
pub use profile::{fit_bubble, rescale_profile, BubbleFit, RescaledProfile, MIN_FIT_POINTS};
pub use record::SweepRecord;
pub use sweep::{run_sweep, LabSettings, SweepOutcome, Truncation};
