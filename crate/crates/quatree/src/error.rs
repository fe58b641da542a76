use thiserror::Error;

/// Errors shared across the crate. Mathematical precondition failures get
/// their own variants so callers (and the CLI) can report them by name.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by a value that is zero to working precision")]
    DivisionByZeroToPrecision,

    #[error("not a square in Q_{p}: {reason}")]
    NotASquare { p: u64, reason: String },

    #[error("insufficient p-adic precision: {0}")]
    InsufficientPrecision(String),

    #[error("diagonal forms of dimension {0} are not supported (max 4)")]
    UnsupportedDimension(usize),

    #[error("({alpha}, {beta}) is not a division algebra: norm form <1,-a,-b,ab> is isotropic over Q")]
    NotDivisionAlgebra { alpha: String, beta: String },

    #[error("division by the zero quaternion")]
    ZeroQuaternion,

    #[error("prime {p} is not admissible here: {reason}")]
    InadmissiblePrime { p: u64, reason: String },

    #[error("matrix is not hyperbolic on this ball: {0}")]
    NotHyperbolic(String),

    #[error("characteristic polynomial is reducible over Q")]
    ReducibleCharPoly,

    #[error("characteristic polynomial does not split over Q_{0}")]
    NonSplitOverQp(u64),

    #[error("eigenvalue valuations are wrong: {0}")]
    WrongValuations(String),

    #[error("conjugation identity B A B^-1 = A^-1 fails")]
    ConjugationIdentityFails,

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
