use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix dimension outside the supported dense range.
    #[error("unsupported matrix dimension {dim}: dense kernels handle 2 <= n <= {max}")]
    UnsupportedSize { dim: usize, max: usize },

    /// A 2x2 matrix was required to have a complex eigenvalue pair.
    #[error("matrix has a real or repeated spectrum (discriminant {discriminant:.3e}); a strictly complex pair is required")]
    NotComplexSpectrum { discriminant: f64 },

    /// The designated singular matrix is not singular at the tolerance.
    #[error("matrix is not singular: |det| = {det:.3e} exceeds the tolerance {tol:.3e}")]
    NotSingular { det: f64, tol: f64 },

    /// Both eigenvalues of the singular factor vanish; the switched system
    /// collapses after one application and the radius is zero.
    #[error("singular factor is nilpotent; the reduced system is trivial with radius zero")]
    NilpotentSystem,

    /// A continued-fraction expansion does not reach far enough.
    #[error("continued-fraction expansion too short: {0}")]
    InsufficientExpansion(String),

    /// A target value lies outside the fundamental interval of an
    /// Ostrowski expansion.
    #[error("theta = {theta} outside the fundamental interval [{lo}, {hi}); reduce theta by an integer first")]
    ThetaOutOfRange { theta: f64, lo: f64, hi: f64 },

    /// Invalid option or budget.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Enumeration would visit more products than the configured guard.
    #[error("enumeration budget exceeded: m^T = {products:.3e} products at depth {depth} (guard {guard:.3e}); lower the depth or raise the guard")]
    BudgetExceeded {
        products: f64,
        depth: usize,
        guard: f64,
    },

    /// A numeric routine failed to converge or produced a non-finite value.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Malformed input document.
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally valid input violating a documented invariant.
    #[error("validation error: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command-line front end.
    ///
    /// 2 = parse/validation, 3 = budget, 4 = numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::Validation(_)
            | Error::InvalidConfig(_)
            | Error::UnsupportedSize { .. }
            | Error::NotComplexSpectrum { .. }
            | Error::NotSingular { .. }
            | Error::NilpotentSystem
            | Error::ThetaOutOfRange { .. }
            | Error::Io(_) => 2,
            Error::BudgetExceeded { .. } | Error::InsufficientExpansion(_) => 3,
            Error::Numeric(_) => 4,
        }
    }
}
