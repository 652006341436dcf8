use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {entries} entries for dimension {dim}")]
    NotSquare { dim: usize, entries: usize },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },
    #[error("eigenvalue iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },
    #[error("state is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("unknown subsystem label {0:?}; expected \"A\" or \"B\"")]
    BadSubsystemLabel(String),
    #[error("operand has zero Hilbert-Schmidt norm")]
    ZeroPurity,
    #[error("subsystem A must be a qubit, found dimension {0}")]
    SubsystemANotQubit(usize),
    #[error("Bloch vector has norm {norm}, expected 1")]
    NotUnitVector { norm: f64 },
    #[error("correlation triple ({0}, {1}, {2}) is not a valid Bell-diagonal state")]
    InvalidCorrelationTriple(f64, f64, f64),
    #[error("Bell-diagonal denominator 1 - |C|^2 = {0:.3e} is degenerate")]
    DegenerateDenominator(f64),
    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    ParameterOutOfRange { name: &'static str, value: f64, lo: f64, hi: f64 },
    #[error("unknown black-box setting {0}; expected 1, 2 or 3")]
    BadSetting(u8),
    #[error("unknown probe family {0:?}")]
    UnknownProbe(String),
    #[error("measurement basis has dimension {basis}, state has dimension {state}")]
    BasisMismatch { basis: usize, state: usize },
    #[error("no Fisher information available (F = {0:.3e})")]
    ZeroInformation(f64),
    #[error("phase is not identifiable: QFI = {0:.3e}")]
    NotIdentifiable(f64),
    #[error("invalid state file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
