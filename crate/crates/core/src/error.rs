//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by Hamiltonian construction, simulation, optimization
/// and the brute-force oracle.
#[derive(Debug, Error)]
pub enum Error {
    /// A term references a qubit index outside the register.
    #[error("qubit index {index} out of range for {n_qubits} qubits (term: {term})")]
    IndexOutOfRange {
        index: u32,
        n_qubits: u32,
        term: String,
    },

    /// A term support contains a repeated qubit index.
    #[error("duplicate qubit index {index} in term support")]
    DuplicateIndex { index: u32 },

    /// Interaction terms beyond 4-body are not representable.
    #[error("term support has {size} qubits; at most 4-body terms are supported")]
    SupportTooLarge { size: usize },

    /// Bit string length does not match the qubit register.
    #[error("bit string length {got} does not match {expected} qubits")]
    LengthMismatch { expected: usize, got: usize },

    /// A spin value other than -1 or +1.
    #[error("spin value {0} is not -1 or +1")]
    InvalidSpin(i8),

    /// Scaling a Hamiltonian by a non-positive factor would change its argmin set.
    #[error("scale factor must be positive, got {0}")]
    InvalidScale(f64),

    /// Statevector allocation refused.
    #[error(
        "cannot allocate a statevector for {n} qubits (limit {max}): \
         would need {bytes} bytes of amplitudes"
    )]
    QubitCapExceeded { n: usize, max: usize, bytes: u128 },

    /// Brute-force enumeration refused.
    #[error("brute force over 2^{n} strings exceeds the guard of n <= {max}")]
    EnumerationTooLarge { n: usize, max: usize },

    /// Invalid gate for the given register.
    #[error("gate {gate} is invalid for {n_qubits} qubits")]
    InvalidGate { gate: String, n_qubits: usize },

    /// The objective returned NaN or infinity.
    #[error("objective returned a non-finite value at x = {x:?}")]
    NonFiniteObjective { x: Vec<f64> },

    /// Invalid optimizer or run configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// xRAR is undefined when no valid solutions exist.
    #[error("P_R = {0} is not in (0, 1]; xRAR is undefined")]
    InvalidRandomProbability(f64),

    /// Probability outside [0, 1].
    #[error("P_x = {0} is not in [0, 1]")]
    InvalidProbability(f64),

    /// Normalized error is undefined for an identically-zero cost.
    #[error("E_max must be positive, got {0}")]
    ZeroMaxError(f64),

    /// A histogram with no counts.
    #[error("histogram has zero total shots")]
    EmptyHistogram,

    /// Malformed text input (Hamiltonian, matrix, template or circuit file).
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Williamson layout needs an odd submatrix dimension.
    #[error("Williamson submatrix dimension K must be odd, got {0}")]
    InvalidWilliamsonOrder(usize),

    /// Turyn sequence length must be even and at least 4.
    #[error("Turyn sequence length N must be even and >= 4, got {0}")]
    InvalidTurynLength(usize),

    /// Turyn template variable indices must cover 0..Q-1.
    #[error("turyn template: {0}")]
    InvalidTemplate(String),

    /// Unknown builtin problem name.
    #[error("unknown builtin problem '{0}'")]
    UnknownBuiltin(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
