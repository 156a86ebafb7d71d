//! Error type shared by every layer of the crate.

use thiserror::Error;

/// Everything that can go wrong, from shape mismatches in raw matrix
/// arithmetic up to failed verification of a constructed homotopy.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two matrices (or a matrix and a vector) had incompatible shapes.
    #[error("dimension mismatch: {context} (left {left_rows}x{left_cols}, right {right_rows}x{right_cols})")]
    DimensionMismatch {
        context: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    /// Operands live over different ambient moduli.
    #[error("modulus mismatch: {left} vs {right} in {context}")]
    ModulusMismatch {
        context: &'static str,
        left: u64,
        right: u64,
    },

    /// A module, map, or presentation failed structural validation.
    #[error("invalid module data: {0}")]
    InvalidModule(String),

    /// A map's entries are incompatible with the invariant factors of its
    /// domain and codomain.
    #[error("invalid map: {0}")]
    InvalidMap(String),

    /// An operation would enumerate more elements than the configured guard
    /// allows.
    #[error("enumeration of {size} elements exceeds the guard of {guard} ({context})")]
    EnumerationTooLarge {
        context: String,
        size: u128,
        guard: u128,
    },

    /// An operation would build an object whose size (measured in log2 of the
    /// element count) exceeds what can be represented at all.
    #[error("object too large: about 2^{log2_size} elements ({context})")]
    ObjectTooLarge {
        context: &'static str,
        log2_size: u128,
    },

    /// A truncated simplicial object does not extend far enough for the
    /// requested operation.
    #[error("truncation too shallow: need level {needed}, have levels up to {available}")]
    TruncationTooShallow { needed: i32, available: i32 },

    /// A chain-complex window does not contain the degrees needed.
    #[error("window too small: need degree {needed}, window is [{lo}, {hi}]")]
    WindowTooSmall { needed: i32, lo: i32, hi: i32 },

    /// A map that must be surjective is not.
    #[error("map is not surjective ({context})")]
    NotEpi { context: &'static str },

    /// A family of would-be horn faces fails the simplicial compatibility
    /// relations, so no filler can exist.
    #[error("invalid horn: {0}")]
    InvalidHorn(String),

    /// A family of maps fails the compatibility conditions required by the
    /// requested construction.
    #[error("incompatible family: {0}")]
    IncompatibleFamily(String),

    /// A linear constraint system admits no solution.
    #[error("constraint system has no solution: {0}")]
    ConstraintViolation(String),

    /// A degree argument falls outside the meaningful range.
    #[error("degree {degree} out of range: {context}")]
    DegreeOutOfRange { degree: i32, context: &'static str },

    /// A construction finished but its defining identities failed the final
    /// check — this indicates a bug or an unsatisfiable instance.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    /// Input data (CLI arguments, JSON payloads) could not be interpreted.
    #[error("bad input: {0}")]
    BadInput(String),
}
