use thiserror::Error;

/// Errors raised by the algebra, simulation and gadget layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension {0} is not supported: qudit dimension must be an odd prime in 3..={max}", max = crate::zd::MAX_DIMENSION)]
    UnsupportedDimension(u32),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("qudit count mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("qudit index {index} out of range for {n} qudits")]
    QuditOutOfRange { index: usize, n: usize },
    #[error("qudit {0} used twice in one operation")]
    QuditClash(usize),
    #[error("gate {gate} expects {expected} qudits, got {got}")]
    Arity { gate: String, expected: usize, got: usize },
    #[error("{0} is not invertible mod {1}")]
    NotInvertible(u32, u32),
    #[error("{0} is not a Clifford gate")]
    NonClifford(String),
    #[error("outcome {outcome} outside Z_{d}")]
    OutcomeOutOfRange { outcome: u32, d: u32 },
    #[error("post-selected outcome {0} has zero probability")]
    ZeroProbability(u32),
    #[error("operator commutes with the whole tableau but is not in its group")]
    NotInGroup,
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("qudit {0} is still entangled with the rest of the register")]
    StillEntangled(usize),
    #[error("map is not symplectic: {0}")]
    NotSymplectic(String),
    #[error("operator is not proportional to any Pauli operator")]
    NotPauli,
    #[error("dense register of {d}^{n} amplitudes exceeds the cap of {cap}")]
    TooLarge { d: u32, n: usize, cap: usize },
    #[error("gate is not diagonal or has an eigenvalue that is not a d-th root of unity")]
    NotDiagonalRoot,
    #[error("no correction found for outcome {0:?} within the search bound")]
    NoCorrection(Vec<u32>),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
