//! Error types shared by every layer of the library.

use thiserror::Error;

/// The single error enum used across the crate.
///
/// Operations that can diverge (Gröbner runs, preimage searches, presentation
/// searches) fail with [`Error::BoundExceeded`] instead of hanging; the bound
/// that was hit is recorded so callers can retry with a larger budget.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Two operands live over different coefficient fields or variable lists.
    #[error("mixed context: {0}")]
    MixedContext(String),

    /// A degree cap or search budget was hit before the computation finished.
    #[error("bound exceeded: {reason} (cap {cap})")]
    BoundExceeded { reason: String, cap: u32 },

    /// A homomorphism candidate does not kill a defining relation of its source.
    #[error("relation violated: {relation} maps to nonzero normal form {image}")]
    RelationViolated { relation: String, image: String },

    /// A surjectivity certificate was refuted: `generator` has no preimage.
    #[error("not surjective: {generator} is not in the image (normal form {witness})")]
    NotSurjective { generator: String, witness: String },

    /// A module over the intrinsic pushout ring has no usable presentation.
    #[error("no presentation: {0}")]
    NoPresentation(String),

    /// The ring is not a finite-dimensional vector space over its field.
    #[error("not zero-dimensional: {0}")]
    NotZeroDimensional(String),

    /// The poset map is not a closed embedding.
    #[error("not a closed embedding: {0}")]
    NotClosedEmbedding(String),

    /// The poset map is not continuous.
    #[error("not continuous: {0}")]
    NotContinuous(String),

    /// Two valuation rings being composed share a generator name.
    #[error("name clash: generator {0} appears on both sides")]
    NameClash(String),

    /// A value assignment is incompatible with the valuation axioms.
    #[error("not a valuation: {0}")]
    NotAValuation(String),

    /// Triple-overlap gluing data fails the cocycle condition.
    #[error("cocycle error on charts ({i}, {j}, {k}): {witness}")]
    CocycleError {
        i: usize,
        j: usize,
        k: usize,
        witness: String,
    },

    /// A degenerate square was rejected (zero target with a nonzero source).
    #[error("degenerate square: {0}")]
    DegenerateSquare(String),

    /// A cooperative cancellation token was triggered.
    #[error("cancelled")]
    Cancelled,

    /// Malformed input that is not a context mismatch (bad matrix shape, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
