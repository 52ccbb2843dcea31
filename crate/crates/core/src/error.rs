use thiserror::Error;

/// Errors raised by the numerical kernels and the model layers built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series for 2F1 did not converge within {terms} terms at z = {z}")]
    NonConvergence { terms: usize, z: f64 },

    #[error("2F1 lower parameter c = {c} is a non-positive integer")]
    ParameterPole { c: f64 },

    #[error("{what} = {value} is outside the supported range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("function evaluated to {value} (non-finite) at x = {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("invalid root bracket [{lo}, {hi}] (tol_abs = {tol_abs}, tol_rel = {tol_rel})")]
    InvalidBracket {
        lo: f64,
        hi: f64,
        tol_abs: f64,
        tol_rel: f64,
    },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("imaginary residue {residue:e} exceeds the reality bound in {context}")]
    ImaginaryResidue { residue: f64, context: &'static str },

    #[error("denominator {value:e} of nu vanishes (a = {a}, c = {c}); spurious pole")]
    NuPole { value: f64, a: String, c: f64 },

    #[error("grid has {n_points} points; at least {required} are needed")]
    GridTooCoarse { n_points: usize, required: usize },

    #[error("root certificate failed at E~ = {e_tilde}: |g - alpha| = {residual:e}")]
    RootCertificate { e_tilde: f64, residual: f64 },

    #[error("found only {found} of {requested} Bessel zeros below x = {limit}")]
    BesselZeros {
        found: usize,
        requested: usize,
        limit: f64,
    },

    #[error("no spectrum entry for mode 2m = {twice_m}")]
    MissingSpectrum { twice_m: i32 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable tag used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonConvergence { .. } => "non_convergence",
            Error::ParameterPole { .. } => "parameter_pole",
            Error::OutOfRange { .. } => "out_of_range",
            Error::NonFinite { .. } => "non_finite",
            Error::InvalidBracket { .. } => "invalid_bracket",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::ImaginaryResidue { .. } => "imaginary_residue",
            Error::NuPole { .. } => "nu_pole",
            Error::GridTooCoarse { .. } => "grid_too_coarse",
            Error::RootCertificate { .. } => "root_certificate",
            Error::BesselZeros { .. } => "bessel_zeros",
            Error::MissingSpectrum { .. } => "missing_spectrum",
            Error::Unsupported(_) => "unsupported",
        }
    }

    /// True for errors caused by bad user input rather than a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::OutOfRange { .. }
                | Error::InvalidBracket { .. }
                | Error::Unsupported(_)
        )
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
