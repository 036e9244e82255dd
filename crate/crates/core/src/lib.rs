//! Incremental spectral clustering of document collections by Laplacian
//! eigenvalue spectra.
//!
//! The pipeline splits a document set into batches, runs normalized spectral
//! clustering on each batch independently, and then merges clusters across
//! batches by comparing eigenvalue spectrograms of the per-cluster similarity
//! graphs, instead of recomputing eigenvectors over the full set. Spectra are
//! rescaled to piecewise-linear functions on `[0, 1]` and compared with an
//! L1-style dissimilarity under one of four matching methods (`clrl`,
//! `clssal`, `clmxl`, `nll`).
//!
//! Module map:
//!
//! - [`corpus`]: tokenization, term vectors, cosine similarity matrices.
//! - [`laplacian`]: combinatorial / normalized Laplacians and their spectra.
//! - [`spectra`]: spectral functions and the matching dissimilarities.
//! - [`clustering`]: normalized spectral clustering with k-means.
//! - [`incremental`]: batch split, cluster model, cross-batch merging.
//! - [`evaluation`]: stability experiments, confusion-matrix metrics, and a
//!   synthetic labeled-corpus generator.

pub mod clustering;
pub mod corpus;
pub mod evaluation;
pub mod incremental;
pub mod laplacian;
pub mod spectra;

mod error;
#[cfg(test)]
pub(crate) mod testutil;
mod util;

pub use error::{Error, Result};
