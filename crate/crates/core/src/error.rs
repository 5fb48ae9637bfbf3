use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A word or presentation could not be parsed or validated.
    #[error("ill-formed input: {0}")]
    IllFormed(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(char),

    #[error("rank sequence did not stabilize within {bound} iterations")]
    StabilizationNotFound { bound: usize },

    /// The endomorphism does not descend to the base presentation.
    #[error("presentation incompatible: {0}")]
    PresentationIncompatible(String),

    #[error("envelope undefined: canonical form of `{0}` is best-effort")]
    UnknownEnvelope(String),

    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),

    /// A documented precondition of an operation was violated by the caller.
    #[error("contract violated: {0}")]
    Contract(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
