use thiserror::Error;

use crate::laplacian::LaplacianKind;
use crate::spectra::MatchMethod;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("document {id:?} has no tokens")]
    ZeroTokenDocument { id: String },

    #[error("duplicate document id {id:?}")]
    DuplicateDocumentId { id: String },

    #[error("term vector at index {index} has zero norm")]
    ZeroNormVector { index: usize },

    #[error("symmetric eigendecomposition did not converge")]
    EigensolverFailure,

    #[error("spectrum of size {n} cannot produce a spectral function (need n >= 2)")]
    DegenerateSpectrum { n: usize },

    #[error("{method} requires a {expected:?} spectrum, got {actual:?}")]
    SpectrumKindMismatch {
        method: MatchMethod,
        expected: LaplacianKind,
        actual: LaplacianKind,
    },

    #[error("cannot compare spectral functions built with {left} and {right}")]
    MethodMismatch { left: MatchMethod, right: MatchMethod },

    #[error("x = {x} outside the domain [0, 1]")]
    DomainError { x: f64 },

    #[error("too few documents: have {n}, need at least {needed}")]
    TooFewDocuments { n: usize, needed: usize },

    #[error("cluster {cluster} of batch {batch} has {size} member(s); need at least 2 for a spectrum")]
    DegenerateCluster {
        batch: usize,
        cluster: usize,
        size: usize,
    },

    #[error("class {label:?} is empty in one of the portions")]
    EmptyClass { label: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("corpus line {line}: {message}")]
    CorpusFormat { line: usize, message: String },

    #[error("cluster model: {0}")]
    ModelFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
