use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("boundary overflow: point at euclidean radius {radius} is outside the numerically safe disk")]
    BoundaryOverflow { radius: f64 },

    #[error("degenerate chord: the two points coincide")]
    DegenerateChord,

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("time {t} outside curve range [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("non-invertible isometry: determinant deviates from 1 by {deviation}")]
    NonInvertible { deviation: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("relator residual {residual} exceeds tolerance")]
    RelatorResidual { residual: f64 },

    #[error("orbit budget exceeded: more than {budget} group elements visited")]
    OrbitBudgetExceeded { budget: usize },

    #[error("domain reduction did not terminate within {budget} steps")]
    ReductionBudget { budget: usize },

    #[error("step underflow at t = {t}: step {step} below minimum")]
    StepUnderflow { t: f64, step: f64 },

    #[error("K = {k} is not above the threshold K0 = {k0}")]
    BelowThreshold { k: f64, k0: f64 },

    #[error("no admissible K' on the halving grid for K = {k}")]
    NoAdmissibleKPrime { k: f64 },

    #[error("endpoint exceeds numerical horizon (hyperbolic radius {radius} > {horizon}); max safe N = {max_safe_n}")]
    HorizonExceeded {
        radius: f64,
        horizon: f64,
        max_safe_n: f64,
    },

    #[error("surgery constraints violated: {0}")]
    SurgeryConstraint(String),

    #[error("no asymptotic direction at horizon: far endpoint only {distance} from midpoint")]
    NoAsymptoticDirection { distance: f64 },

    #[error("no uniform alpha at this horizon (budget {budget} grid points, best margin {best_margin})")]
    NoUniformAlpha { budget: usize, best_margin: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag used in error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BoundaryOverflow { .. } => "boundary_overflow",
            Error::DegenerateChord => "degenerate_chord",
            Error::InvalidInterval { .. } => "invalid_interval",
            Error::OutOfRange { .. } => "out_of_range",
            Error::NonInvertible { .. } => "non_invertible",
            Error::InvalidCurve(_) => "invalid_curve",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::RelatorResidual { .. } => "relator_residual",
            Error::OrbitBudgetExceeded { .. } => "orbit_budget_exceeded",
            Error::ReductionBudget { .. } => "reduction_budget",
            Error::StepUnderflow { .. } => "step_underflow",
            Error::BelowThreshold { .. } => "below_threshold",
            Error::NoAdmissibleKPrime { .. } => "no_admissible_k_prime",
            Error::HorizonExceeded { .. } => "horizon_exceeded",
            Error::SurgeryConstraint(_) => "surgery_constraint",
            Error::NoAsymptoticDirection { .. } => "no_asymptotic_direction",
            Error::NoUniformAlpha { .. } => "no_uniform_alpha",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
