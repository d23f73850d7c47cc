//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, AfdmError>;

/// Everything that can go wrong in the AFDM simulation chain.
#[derive(Debug, Error)]
pub enum AfdmError {
    /// A vector or matrix had the wrong size for the operation.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// Invalid or inconsistent configuration (bad JSON, unknown keys,
    /// out-of-range values, unknown scheme tags).
    #[error("config error: {0}")]
    Config(String),

    /// A path delay exceeds the prefix length, so the transient cannot be
    /// absorbed.
    #[error("path delay {delay} exceeds prefix length {prefix_len}")]
    DelayExceedsPrefix { delay: usize, prefix_len: usize },

    /// Two paths share the same (delay, Doppler) pair.
    #[error("duplicate path with delay {delay} and doppler {doppler}: merge gains explicitly")]
    DuplicatePath { delay: usize, doppler: f64 },

    /// The sparse closed form needs integer Doppler and integral `2*N*c1*l`;
    /// use the numeric conjugation path instead.
    #[error(
        "closed form not applicable ({reason}); build the effective channel by conjugation instead"
    )]
    ClosedFormNotApplicable { reason: String },

    /// Profile recovery requires the non-overlap (separability) condition.
    #[error("separability violated: 2*alpha_max*l_max + 2*alpha_max + l_max = {lhs} >= n = {n}")]
    SeparabilityViolated { lhs: usize, n: usize },

    /// Profile recovery found a nonzero entry at a position outside the
    /// admissible (delay, Doppler) placement table.
    #[error("ambiguous inversion: row position {position} maps to no admissible (delay, doppler)")]
    AmbiguousInversion { position: usize },

    /// Profile recovery found no entries above threshold.
    #[error("no entries above threshold in effective-channel row")]
    NoSupportFound,

    /// Exhaustive search space exceeds the configured budget.
    #[error("search budget exceeded: {required} hypotheses > budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    /// Linear solver failed (pathological conditioning).
    #[error("solver failure: {0}")]
    SolverFailure(String),

    /// Noise level must be strictly positive.
    #[error("noise variance must be positive, got {0}")]
    NonPositiveNoise(f64),

    /// Not enough accumulated errors for a statistically meaningful estimate.
    #[error("insufficient errors at {snr_db} dB: {errors} < {required}")]
    InsufficientErrors {
        snr_db: f64,
        errors: u64,
        required: u64,
    },

    /// File I/O while reading configs or writing results.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
