//! Error type shared by every layer of the engine.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |H - H^dagger| = {asymmetry:.3e})")]
    NonHermitianInput { asymmetry: f64 },
    #[error("eigensolver did not converge")]
    ConvergenceFailure,
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("2x2 square root branch is degenerate (|t| = {t_abs:.3e})")]
    DegenerateBranch { t_abs: f64 },
    #[error("trace is {trace:.15}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("density matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("density matrix has negative eigenvalue {eigenvalue:.3e}")]
    NegativeEigenvalue { eigenvalue: f64 },
    #[error("non-finite matrix or vector entry")]
    NonFinite,
    #[error("expected dimension {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("Bloch vector length {norm} exceeds 1")]
    BlochOutOfBall { norm: f64 },
    #[error("gap closure: |d| = {d:.3e}")]
    GapClosure { d: f64 },
    #[error("ket chart is singular at this point (n3 = {n3})")]
    GaugePole { n3: f64 },
    #[error("invalid model configuration, field `{field}`: {reason}")]
    ConfigInvalid { field: String, reason: String },
    #[error("invalid parameter point: {0}")]
    InvalidPoint(String),
    #[error("state family has no `{0}` evaluator")]
    MissingPath(&'static str),

    #[error("fidelity {value} exceeds 1 beyond rounding")]
    FidelityOvershoot { value: f64 },
    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("probability vector invalid: {0}")]
    InvalidProbability(String),
    #[error("generating function `{0}` is not supported by this family")]
    UnsupportedKind(&'static str),
    #[error("logarithm of a vanishing generating function")]
    DomainError,

    #[error("Bloch vector is pure but r.dr = {r_dot_dr:.3e} does not vanish")]
    PuritySingularity { r_dot_dr: f64 },
    #[error("state is not pure (eigenvalue distance from {{0,1}} is {gap:.3e})")]
    NotPure { gap: f64 },
    #[error("ket component {component} vanishes inside the stencil (|psi_i| = {magnitude:.3e})")]
    SignFlipAtStencil { component: usize, magnitude: f64 },
    #[error("family kets are gauge-fixed numerically; the Im-overlap route needs an analytic gauge")]
    GaugeNotSmooth,

    #[error("oracle failed at x = {x:?}, x' = {x_prime:?}: {source}")]
    OracleFailure {
        x: Vec<f64>,
        x_prime: Vec<f64>,
        source: Box<Error>,
    },
    #[error("overlap phase left (-pi/2, pi/2) on every step down to h = {h:.3e}")]
    PhaseWrap { h: f64 },
    #[error("third-order combination has imaginary residue {residue:.3e}")]
    ImaginaryResidue { residue: f64 },
    #[error("least-squares fit is ill-conditioned")]
    FitIllConditioned,
    #[error("invalid stencil configuration: {0}")]
    InvalidStencil(String),
    #[error("invalid scan: {0}")]
    InvalidScan(String),
}

impl Error {
    /// The innermost error, looking through oracle wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::OracleFailure { source, .. } => source.root(),
            other => other,
        }
    }

    /// Short machine-readable code used in scan error rows.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonHermitianInput { .. } => "NON_HERMITIAN_INPUT",
            Error::ConvergenceFailure => "CONVERGENCE_FAILURE",
            Error::NotPositiveSemidefinite { .. } => "NOT_PSD",
            Error::DegenerateBranch { .. } => "DEGENERATE_BRANCH",
            Error::TraceNotOne { .. } => "TRACE_NOT_ONE",
            Error::NotHermitian { .. } => "NOT_HERMITIAN",
            Error::NegativeEigenvalue { .. } => "NEGATIVE_EIGENVALUE",
            Error::NonFinite => "NON_FINITE",
            Error::WrongDimension { .. } => "WRONG_DIMENSION",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::BlochOutOfBall { .. } => "BLOCH_OUT_OF_BALL",
            Error::GapClosure { .. } => "GAP_CLOSURE",
            Error::GaugePole { .. } => "GAUGE_POLE",
            Error::ConfigInvalid { .. } => "CONFIG_INVALID",
            Error::InvalidPoint(_) => "INVALID_POINT",
            Error::MissingPath(_) => "MISSING_PATH",
            Error::FidelityOvershoot { .. } => "FIDELITY_OVERSHOOT",
            Error::NotNormalized { .. } => "NOT_NORMALIZED",
            Error::InvalidProbability(_) => "INVALID_PROBABILITY",
            Error::UnsupportedKind(_) => "UNSUPPORTED_KIND",
            Error::DomainError => "DOMAIN_ERROR",
            Error::PuritySingularity { .. } => "PURITY_SINGULARITY",
            Error::NotPure { .. } => "NOT_PURE",
            Error::SignFlipAtStencil { .. } => "SIGN_FLIP_AT_STENCIL",
            Error::GaugeNotSmooth => "GAUGE_NOT_SMOOTH",
            // report the root cause, not the wrapper
            Error::OracleFailure { source, .. } => source.code(),
            Error::PhaseWrap { .. } => "PHASE_WRAP",
            Error::ImaginaryResidue { .. } => "IMAGINARY_RESIDUE",
            Error::FitIllConditioned => "FIT_ILL_CONDITIONED",
            Error::InvalidStencil(_) => "INVALID_STENCIL",
            Error::InvalidScan(_) => "INVALID_SCAN",
        }
    }
}
