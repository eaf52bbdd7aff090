use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Hermiticity violated by more than the given amount.
    NonHermitianInput { deviation: f64 },
    MaskLengthMismatch { expected: usize, got: usize },
    DimensionMismatch { expected: usize, got: usize },
    NotSquare { rows: usize, cols: usize },
    /// Trace differs from one by more than tolerance.
    TraceNotOne { trace: f64 },
    NotPositive { min_eigenvalue: f64 },
    NotNormalized { norm: f64 },
    AlphaOutOfRange(f64),
    InvalidExcitations(u8),
    NegativeProbability { index: usize, value: f64 },
    InvalidDistribution,
    TooFewShots { setting: usize, shots: u64 },
    InvalidFraction(f64),
    OddShotCount(u64),
    MissingSetting(&'static str),
    DesignMismatch,
    EmptyDataset,
    SampleTooSmall { n: u64, k: usize },
    InvalidGridStep(f64),
    ParameterOutOfRange { index: usize, value: f64 },
    ParameterCount { expected: usize, got: usize },
    AllPointsExcluded,
    AllZeroWeights,
    InvalidPartition,
    NoSignChange,
    VariablePhaseUnsupported,
    EmptyHistogram,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonHermitianInput { deviation } => {
                write!(f, "matrix is not Hermitian (max |A - A^H| = {deviation:e})")
            }
            Error::MaskLengthMismatch { expected, got } => {
                write!(f, "transpose mask has {got} entries, expected {expected}")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Error::TraceNotOne { trace } => write!(f, "trace is {trace}, expected 1"),
            Error::NotPositive { min_eigenvalue } => {
                write!(f, "matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")
            }
            Error::NotNormalized { norm } => write!(f, "state vector has norm {norm}"),
            Error::AlphaOutOfRange(a) => write!(f, "noise fraction {a} outside [0, 1]"),
            Error::InvalidExcitations(k) => write!(f, "Dicke excitation number {k} not in {{1, 2}}"),
            Error::NegativeProbability { index, value } => {
                write!(f, "outcome {index} has negative probability {value:e}")
            }
            Error::InvalidDistribution => write!(f, "probabilities are not a valid distribution"),
            Error::TooFewShots { setting, shots } => {
                write!(f, "setting {setting} has only {shots} shots")
            }
            Error::InvalidFraction(x) => write!(f, "split fraction {x} not in (0, 1)"),
            Error::OddShotCount(n) => write!(f, "shot count {n} cannot be split evenly across settings"),
            Error::MissingSetting(s) => write!(f, "dataset lacks the {s} setting"),
            Error::DesignMismatch => write!(f, "dataset does not belong to the measurement design"),
            Error::EmptyDataset => write!(f, "dataset has a setting with no shots"),
            Error::SampleTooSmall { n, k } => {
                write!(f, "AICc needs N > K + 1 (N = {n}, K = {k})")
            }
            Error::InvalidGridStep(s) => write!(f, "grid step {s} outside (0, 0.05]"),
            Error::ParameterOutOfRange { index, value } => {
                write!(f, "parameter {index} = {value} outside its range")
            }
            Error::ParameterCount { expected, got } => {
                write!(f, "expected {expected} parameters, got {got}")
            }
            Error::AllPointsExcluded => write!(f, "every grid point is unphysical or has zero likelihood"),
            Error::AllZeroWeights => write!(f, "posterior has no support"),
            Error::InvalidPartition => write!(f, "partition must be a non-empty proper subset of the qubits"),
            Error::NoSignChange => write!(f, "curve does not change sign on the interval"),
            Error::VariablePhaseUnsupported => {
                write!(f, "operation requires a family with fixed phase")
            }
            Error::EmptyHistogram => write!(f, "histogram needs at least one bin"),
        }
    }
}

impl core::error::Error for Error {}
