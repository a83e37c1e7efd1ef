use thiserror::Error;

use crate::analytic::Regime;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 1, got {0}")]
    InvalidDimension(usize),

    #[error("kernel order alpha must be finite and > 1, got {0}")]
    InvalidAlpha(f64),

    #[error("alpha = n = {0} is the critical kernel order; p_crit = 2n/(n-alpha) is undefined")]
    CriticalOrder(usize),

    #[error(
        "q = {q} outside the subcritical range for the {regime} regime: expected {lo} < q < {hi}"
    )]
    QOutOfRange {
        q: f64,
        regime: Regime,
        lo: f64,
        hi: f64,
    },

    #[error("gamma function requires a positive argument, got {0}")]
    NonPositiveArgument(f64),

    #[error("radial integral diverges: need s > n/2, got n = {n}, s = {s}")]
    DivergentIntegral { n: usize, s: f64 },

    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),

    #[error("resolution must be at least 8, got {0}")]
    ResolutionTooSmall(usize),

    #[error("dense kernel needs {required} entries for m = {m} nodes, cap is m <= {cap}")]
    KernelTooLarge {
        m: usize,
        cap: usize,
        required: u128,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("input vector has a negative or non-finite entry {value} at index {index}")]
    InvalidEntry { index: usize, value: f64 },

    #[error("input vector is identically zero")]
    ZeroVector,

    #[error("non-finite iterate (min Kf = {min_kf:e}, max Kf = {max_kf:e})")]
    NonFinite { min_kf: f64, max_kf: f64 },

    #[error("damping fell below 1/64 while the quotient kept moving the wrong way (q = {q})")]
    Oscillation { q: f64 },

    #[error(
        "solver did not converge at q = {q}: residual {residual:e} after {iterations} iterations"
    )]
    NotConverged {
        q: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("at q = {q}: {source}")]
    AtQ {
        q: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid solver options: {0}")]
    InvalidOptions(String),

    #[error("only {found} sample points within |z| <= {radius}, need at least {needed}")]
    InsufficientPoints {
        found: usize,
        needed: usize,
        radius: f64,
    },

    #[error("probe {index} lies {distance} from x_q, inside the exclusion radius {r_min}")]
    ProbeTooClose {
        index: usize,
        distance: f64,
        r_min: f64,
    },

    #[error("point {0:?} lies outside the domain")]
    OutsideDomain(Vec<f64>),

    #[error("bump support (center {center:?}, radius {radius}) is not inside the domain")]
    BumpOutsideDomain { center: Vec<f64>, radius: f64 },

    #[error("inversion center {0:?} lies in the closed domain")]
    CenterInsideDomain(Vec<f64>),

    #[error("sample coincides with the inversion center")]
    SampleAtCenter,

    #[error("t0 = {t0} must be positive and below half the inradius ({inradius})")]
    RayTooLong { t0: f64, inradius: f64 },

    #[error("sweep needs at least {needed} records, got {got}")]
    TooFewRecords { needed: usize, got: usize },
}
