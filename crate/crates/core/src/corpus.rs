//! Document ingestion, term vectors, and the cosine similarity matrix that
//! defines the document graph.
//!
//! Incoming corpora are JSON Lines, one object per line with fields `id`,
//! `text`, and an optional `label`. Labels carry external ground truth (for
//! evaluation only) and are never visible to the matching algorithms.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::fmt_sig;

/// Tokenizer options: minimum token length and an optional stopword list.
#[derive(Debug, Clone)]
pub struct TokenizerConfig {
    /// Tokens shorter than this are dropped. Default 2.
    pub min_token_len: usize,
    /// Tokens equal to a stopword are dropped. Default empty.
    pub stopwords: BTreeSet<String>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            min_token_len: 2,
            stopwords: BTreeSet::new(),
        }
    }
}

/// Lowercase and split on non-alphanumeric boundaries, then apply the length
/// and stopword filters.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.len() >= config.min_token_len.max(1))
        .filter(|t| !config.stopwords.contains(*t))
        .map(str::to_owned)
        .collect()
}

/// A document with its derived token sequence.
#[derive(Debug, Clone)]
pub struct Document {
    pub id: String,
    pub text: String,
    /// External label (e.g. a hashtag); evaluation-only ground truth.
    pub label: Option<String>,
    pub tokens: Vec<String>,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        label: Option<String>,
        config: &TokenizerConfig,
    ) -> Self {
        let text = text.into();
        let tokens = tokenize(&text, config);
        Self {
            id: id.into(),
            text,
            label,
            tokens,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonDoc {
    id: String,
    text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

/// Parse a JSON Lines corpus. Blank lines are skipped; duplicate ids are
/// rejected.
pub fn parse_jsonl(input: &str, config: &TokenizerConfig) -> Result<Vec<Document>> {
    let mut seen = HashSet::new();
    let mut docs = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let raw: JsonDoc = serde_json::from_str(line).map_err(|e| Error::CorpusFormat {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        if !seen.insert(raw.id.clone()) {
            return Err(Error::DuplicateDocumentId { id: raw.id });
        }
        docs.push(Document::new(raw.id, raw.text, raw.label, config));
    }
    Ok(docs)
}

/// Serialize documents back to JSON Lines (tokens are derived, not stored).
pub fn to_jsonl(docs: &[Document]) -> String {
    let mut out = String::new();
    for doc in docs {
        let raw = JsonDoc {
            id: doc.id.clone(),
            text: doc.text.clone(),
            label: doc.label.clone(),
        };
        out.push_str(&serde_json::to_string(&raw).expect("document serialization"));
        out.push('\n');
    }
    out
}

/// Term weighting scheme for term vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    /// Raw term counts (default).
    Tf,
    /// tf × ln(N / df) over the input corpus.
    TfIdf,
}

/// Sparse weighted term representation of one document.
///
/// Entries are sorted by term id; zero weights are not stored.
#[derive(Debug, Clone)]
pub struct TermVector {
    entries: Vec<(u32, f64)>,
    norm: f64,
}

impl TermVector {
    fn from_entries(entries: Vec<(u32, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|&(_, w)| w >= 0.0));
        let norm = entries.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt();
        Self { entries, norm }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Dot product via merge join over the sorted entry lists.
    pub fn dot(&self, other: &TermVector) -> f64 {
        let (mut i, mut j) = (0, 0);
        let mut acc = 0.0;
        while i < self.entries.len() && j < other.entries.len() {
            let (ta, wa) = self.entries[i];
            let (tb, wb) = other.entries[j];
            match ta.cmp(&tb) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += wa * wb;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// Build term vectors over the vocabulary of the input corpus.
///
/// Term ids are assigned in lexicographic term order, so the mapping is
/// deterministic for a given document set.
pub fn build_term_vectors(docs: &[Document], weighting: Weighting) -> Result<Vec<TermVector>> {
    for doc in docs {
        if doc.tokens.is_empty() {
            return Err(Error::ZeroTokenDocument { id: doc.id.clone() });
        }
    }
    let mut vocab: BTreeMap<&str, u32> = BTreeMap::new();
    for doc in docs {
        for tok in &doc.tokens {
            let next = vocab.len() as u32;
            vocab.entry(tok.as_str()).or_insert(next);
        }
    }
    // BTreeMap iteration is sorted; reassign ids in that order.
    for (i, (_, id)) in vocab.iter_mut().enumerate() {
        *id = i as u32;
    }

    let mut df = vec![0u32; vocab.len()];
    let counts: Vec<BTreeMap<u32, f64>> = docs
        .iter()
        .map(|doc| {
            let mut m = BTreeMap::new();
            for tok in &doc.tokens {
                *m.entry(vocab[tok.as_str()]).or_insert(0.0) += 1.0;
            }
            m
        })
        .collect();
    for m in &counts {
        for &t in m.keys() {
            df[t as usize] += 1;
        }
    }

    let n = docs.len() as f64;
    Ok(counts
        .into_iter()
        .map(|m| {
            let entries = m
                .into_iter()
                .map(|(t, tf)| {
                    let w = match weighting {
                        Weighting::Tf => tf,
                        Weighting::TfIdf => tf * (n / f64::from(df[t as usize])).ln(),
                    };
                    (t, w)
                })
                .filter(|&(_, w)| w != 0.0)
                .collect();
            TermVector::from_entries(entries)
        })
        .collect())
}

/// Symmetric n×n cosine similarity matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    values: DMatrix<f64>,
}

impl SimilarityMatrix {
    /// Wrap a precomputed matrix, checking the type invariants: exact
    /// symmetry, entries in `[0, 1]`, zero diagonal.
    pub fn from_matrix(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() != values.ncols() {
            return Err(Error::InvalidParameter(format!(
                "similarity matrix must be square, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        let n = values.nrows();
        for i in 0..n {
            if values[(i, i)] != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "similarity diagonal must be zero (row {i})"
                )));
            }
            for j in (i + 1)..n {
                let v = values[(i, j)];
                if v != values[(j, i)] {
                    return Err(Error::InvalidParameter(format!(
                        "similarity matrix not symmetric at ({i},{j})"
                    )));
                }
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidParameter(format!(
                        "similarity {v} at ({i},{j}) outside [0,1]"
                    )));
                }
            }
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    /// Restriction to the rows/columns in `indices` (cluster submatrix).
    pub fn submatrix(&self, indices: &[usize]) -> SimilarityMatrix {
        let m = indices.len();
        let values = DMatrix::from_fn(m, m, |i, j| self.values[(indices[i], indices[j])]);
        SimilarityMatrix { values }
    }

    /// Full symmetric matrix as CSV, 15 significant digits per entry.
    pub fn to_csv(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| fmt_sig(self.values[(i, j)])).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Cosine similarity matrix of the given term vectors.
///
/// Only the upper triangle is computed; the lower triangle is mirrored, so
/// symmetry is exact and independent of the number of worker threads.
pub fn cosine_similarity_matrix(vectors: &[TermVector]) -> Result<SimilarityMatrix> {
    for (index, v) in vectors.iter().enumerate() {
        if v.norm() == 0.0 {
            return Err(Error::ZeroNormVector { index });
        }
    }
    let n = vectors.len();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| {
                    let c = vectors[i].dot(&vectors[j]) / (vectors[i].norm() * vectors[j].norm());
                    c.clamp(0.0, 1.0)
                })
                .collect()
        })
        .collect();
    let mut values = DMatrix::zeros(n, n);
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let j = i + 1 + off;
            values[(i, j)] = v;
            values[(j, i)] = v;
        }
    }
    Ok(SimilarityMatrix { values })
}

/// Ingestion filter: drop documents with fewer than `min_tokens` tokens and
/// documents whose term vectors end up with zero norm, both with a warning.
///
/// Dropping a document changes document frequencies, which under tf-idf can
/// zero out further vectors, so the filter loops until stable. Returns the
/// kept documents with their term vectors.
pub fn prepare(
    mut docs: Vec<Document>,
    min_tokens: usize,
    weighting: Weighting,
) -> Result<(Vec<Document>, Vec<TermVector>)> {
    docs.retain(|doc| {
        let keep = doc.tokens.len() >= min_tokens;
        if !keep {
            log::warn!(
                "dropping document {:?}: {} token(s) < min_tokens {}",
                doc.id,
                doc.tokens.len(),
                min_tokens
            );
        }
        keep
    });
    loop {
        if docs.is_empty() {
            return Err(Error::TooFewDocuments { n: 0, needed: 1 });
        }
        let vectors = build_term_vectors(&docs, weighting)?;
        let degenerate: Vec<usize> = vectors
            .iter()
            .enumerate()
            .filter_map(|(i, v)| (v.norm() == 0.0).then_some(i))
            .collect();
        if degenerate.is_empty() {
            return Ok((docs, vectors));
        }
        for &i in degenerate.iter().rev() {
            log::warn!("dropping document {:?}: zero-norm term vector", docs[i].id);
            docs.remove(i);
        }
    }
}
