//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A finite-input operation produced a non-finite component.
    #[error("arithmetic overflow in {op}: non-finite component")]
    Overflow { op: &'static str },

    /// Division requires a divisor with nonzero real part.
    #[error("division by a pure-dual number: divisor real part {re:e} is below {threshold:e}")]
    PureDualDivisor { re: f64, threshold: f64 },

    /// Argument outside the domain of a lifted function.
    #[error("{function}: argument {value} outside domain")]
    Domain { function: &'static str, value: f64 },

    /// Dual norm of a vector whose real part is zero.
    #[error("norm undefined: dual vector has zero real part")]
    NormUndefined,

    /// Norm or normalization of a lightlike dual vector.
    #[error("{op} undefined for a lightlike dual vector")]
    Lightlike { op: &'static str },

    /// A causal-character precondition was violated.
    #[error("causal character violation: {0}")]
    Causal(String),

    /// Angle recovery outside the invertible range of cosh/cos/sinh.
    #[error("angle inversion outside domain: {0}")]
    InversionDomain(String),

    /// The curve derivative became lightlike; arc length degenerates.
    #[error("degenerate speed: curve derivative is lightlike near t = {t}")]
    DegenerateSpeed { t: f64 },

    /// Curvature below threshold: normal, binormal and torsion are undefined.
    #[error(
        "degenerate frame: curvature real part {kappa_re:e} is at or below {threshold:e}; \
         normal, binormal and torsion are undefined"
    )]
    DegenerateFrame { kappa_re: f64, threshold: f64 },

    /// Frame metric drift exceeded the limit before re-projection.
    #[error(
        "frame metric drift {drift:e} exceeded {limit:e} before re-projection; \
         increase the step count"
    )]
    StepSize { drift: f64, limit: f64 },

    /// The curvature branch produced a non-positive curvature.
    #[error("curvature branch infeasible: {0}")]
    BranchInfeasible(String),

    /// The requested pair degenerates (straight-line limb, no frame).
    #[error("degenerate pair: {0}")]
    DegeneratePair(String),

    /// Expression parse failure, with a character offset into the source.
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// Expression evaluation failure, with the offending source span.
    #[error("evaluation error at {start}..{end} in `{fragment}`: {message}")]
    Eval {
        start: usize,
        end: usize,
        fragment: String,
        message: String,
    },

    /// Query parameter outside the curve's declared range.
    #[error("parameter {t} outside curve range [{t0}, {t1}]")]
    OutOfRange { t: f64, t0: f64, t1: f64 },

    /// A unit-speed-only operation on a non-unit-speed curve.
    #[error("curve is not unit speed: |speed.re - 1| = {deviation:e} at t = {t}; reparameterize by arc length first")]
    NotUnitSpeed { t: f64, deviation: f64 },

    /// Invalid caller input (specs, grids, correspondences, file contents).
    #[error("invalid input: {0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Overflow { .. } => "overflow",
            Error::PureDualDivisor { .. } => "pure_dual_divisor",
            Error::Domain { .. } => "domain",
            Error::NormUndefined => "norm_undefined",
            Error::Lightlike { .. } => "lightlike",
            Error::Causal(_) => "causal",
            Error::InversionDomain(_) => "inversion_domain",
            Error::DegenerateSpeed { .. } => "degenerate_speed",
            Error::DegenerateFrame { .. } => "degenerate_frame",
            Error::StepSize { .. } => "step_size",
            Error::BranchInfeasible(_) => "branch_infeasible",
            Error::DegeneratePair(_) => "degenerate_pair",
            Error::Parse { .. } => "parse",
            Error::Eval { .. } => "eval",
            Error::OutOfRange { .. } => "out_of_range",
            Error::NotUnitSpeed { .. } => "not_unit_speed",
            Error::Input(_) => "input",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
