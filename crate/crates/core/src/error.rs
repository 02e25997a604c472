use std::fmt;

/// Errors for every fallible operation in the toolkit.
///
/// Each variant has a stable machine-parseable name (see [`Error::name`])
/// that front ends print on their diagnostic stream.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A denominator vanished within tolerance while evaluating a potential
    /// or deformed hyperbolic function.
    Pole { at: f64 },
    /// The k-quadratic of the branch construction has no real roots.
    NoRealK,
    /// No branch satisfies the admissibility condition tau' < 0.
    NoAdmissibleBranch,
    /// sigma(z) does not have the z(1-qz) root structure required by the
    /// weight/phi machinery.
    UnsupportedSigma,
    /// The quantization residual does not change sign on the bracket.
    NoSignChange,
    /// delta = sqrt(xi - beta4) is imaginary somewhere in the bracket.
    NonRealDelta,
    /// The closed-form denominator 2n+1-eta*H vanished (|.| < 1e-12).
    DivisionByZero,
    /// A special-case evaluator was invoked with parameters the case
    /// requires to be zero.
    CaseViolation(String),
    /// Input outside a special function's domain.
    DomainError(String),
    /// A hypergeometric evaluation outside the principal convergence domain.
    ConvergenceDomainError,
    /// The sampled wavefunction does not decay at the grid ends.
    NonDecaying,
    /// Normalization was requested for an identically-zero sample.
    ZeroNorm,
    /// Two sampled wavefunctions do not share a grid.
    GridMismatch,
    /// The potential produced a non-finite value on the grid.
    NonFiniteValue { at: f64 },
    /// The requested bound level does not exist in the window.
    LevelNotFound,
    /// Complex shooting did not converge within the iteration budget;
    /// carries the best relative residual reached.
    NoConvergence { residual: f64 },
    /// A configuration invariant was violated (alpha = 0, q = 0, ...).
    InvalidConfig(String),
}

impl Error {
    /// Stable error name for diagnostics and exit-code mapping.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "PoleError",
            Error::NoRealK => "NoRealK",
            Error::NoAdmissibleBranch => "NoAdmissibleBranch",
            Error::UnsupportedSigma => "UnsupportedSigma",
            Error::NoSignChange => "NoSignChange",
            Error::NonRealDelta => "NonRealDelta",
            Error::DivisionByZero => "DivisionByZero",
            Error::CaseViolation(_) => "CaseViolation",
            Error::DomainError(_) => "DomainError",
            Error::ConvergenceDomainError => "ConvergenceDomainError",
            Error::NonDecaying => "NonDecaying",
            Error::ZeroNorm => "ZeroNorm",
            Error::GridMismatch => "GridMismatch",
            Error::NonFiniteValue { .. } => "NonFiniteValue",
            Error::LevelNotFound => "LevelNotFound",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }

    /// True for failures of the numerical machinery (CLI exit 3), false for
    /// configuration errors (CLI exit 2).
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::InvalidConfig(_) | Error::CaseViolation(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { at } => write!(f, "denominator vanished near x = {at}"),
            Error::NoRealK => write!(f, "k-quadratic has no real roots"),
            Error::NoAdmissibleBranch => write!(f, "no branch with tau' < 0"),
            Error::UnsupportedSigma => write!(f, "sigma is not of the z(1-qz) form"),
            Error::NoSignChange => write!(f, "quantization residual has no sign change on the bracket"),
            Error::NonRealDelta => write!(f, "delta imaginary inside the bracket (E > -V4)"),
            Error::DivisionByZero => write!(f, "denominator 2n+1-eta*H vanished"),
            Error::CaseViolation(msg) => write!(f, "special-case parameter violation: {msg}"),
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::ConvergenceDomainError => {
                write!(f, "outside the hypergeometric convergence domain (|z| >= 1)")
            }
            Error::NonDecaying => write!(f, "wavefunction does not decay at the grid ends"),
            Error::ZeroNorm => write!(f, "cannot normalize an identically-zero function"),
            Error::GridMismatch => write!(f, "sampled functions do not share a grid"),
            Error::NonFiniteValue { at } => write!(f, "potential not finite at x = {at}"),
            Error::LevelNotFound => write!(f, "requested bound level does not exist"),
            Error::NoConvergence { residual } => {
                write!(f, "shooting did not converge; best residual {residual:e}")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
