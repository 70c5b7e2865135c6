use alloc::string::String;
use core::fmt;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A square matrix was required.
    NotSquare { rows: usize, cols: usize },
    /// An entry was NaN or infinite.
    NonFinite,
    /// Relative Hermitian defect exceeded the tolerance.
    NotHermitian { defect: f64 },
    /// Jacobi / QR iteration did not converge within the sweep budget.
    NoConvergence(&'static str),
    /// Matrix failed a positive semidefiniteness requirement.
    NotPsd { min_eigenvalue: f64 },
    /// Linear system was singular to working precision.
    Singular,
    /// Operand shapes are incompatible.
    ShapeMismatch(String),
    /// Input outside the domain the operation guarantees, e.g. a point with
    /// sup-norm >= 1 or `||D Delta|| >= 1 - inv_margin`.
    OutsideDomain(String),
    /// A point set contained coordinatewise-identical points.
    DuplicatePoints,
    /// Target value outside the closed unit disk.
    ValueOutsideDisk { modulus: f64 },
    /// Spectrum violates a half-plane or distinctness requirement.
    BadSpectrum(String),
    /// Matrix is defective (or numerically indistinguishable from one) and
    /// the diagonalizable-only path rejects it.
    Defective,
    /// Commutator norm of a tuple exceeded the tolerance.
    NotCommuting { defect: f64 },
    /// Tuple member with operator norm above the allowed bound.
    NotContractive { norm: f64 },
    /// Rejection sampling or a numerical search ran out of budget.
    BudgetExhausted(&'static str),
    /// A re-verification step failed; the input data is numerically invalid.
    VerificationFailed(String),
    /// Integer overflow while reconstructing an index from exponents.
    Overflow,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquare { rows, cols } => {
                write!(f, "square matrix required, got {rows}x{cols}")
            }
            Error::NonFinite => write!(f, "non-finite matrix entry"),
            Error::NotHermitian { defect } => {
                write!(f, "matrix is not Hermitian (relative defect {defect:.3e})")
            }
            Error::NoConvergence(what) => write!(f, "{what} did not converge"),
            Error::NotPsd { min_eigenvalue } => {
                write!(f, "matrix not PSD (min eigenvalue {min_eigenvalue:.3e})")
            }
            Error::Singular => write!(f, "singular linear system"),
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::OutsideDomain(msg) => write!(f, "{msg}"),
            Error::DuplicatePoints => write!(f, "point set contains duplicate points"),
            Error::ValueOutsideDisk { modulus } => {
                write!(f, "target value outside closed unit disk (|f| = {modulus})")
            }
            Error::BadSpectrum(msg) => write!(f, "spectrum check failed: {msg}"),
            Error::Defective => write!(f, "matrix rejected on the diagonalizable path"),
            Error::NotCommuting { defect } => {
                write!(f, "tuple members do not commute (defect {defect:.3e})")
            }
            Error::NotContractive { norm } => {
                write!(f, "tuple member not contractive (norm {norm})")
            }
            Error::BudgetExhausted(what) => write!(f, "budget exhausted: {what}"),
            Error::VerificationFailed(msg) => write!(f, "verification failed: {msg}"),
            Error::Overflow => write!(f, "integer overflow"),
        }
    }
}

impl core::error::Error for Error {}
