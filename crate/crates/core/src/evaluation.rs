//! Evaluation protocol: stability experiments over random subsamples,
//! confusion-matrix metrics, adjusted Rand index, and a synthetic
//! labeled-corpus generator for reproducible experiments (real short-text
//! collections are usually not redistributable).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{build_term_vectors, cosine_similarity_matrix, Document, SimilarityMatrix, TokenizerConfig, Weighting};
use crate::error::{Error, Result};
use crate::incremental::{assign_cluster, ClusterModel};
use crate::spectra::MatchMethod;

/// k×k confusion counts; rows are true classes, columns predictions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(labels: Vec<String>) -> Self {
        let k = labels.len();
        Self {
            labels,
            counts: vec![vec![0; k]; k],
        }
    }

    pub fn from_counts(labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        let k = labels.len();
        if counts.len() != k || counts.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidParameter(format!(
                "confusion counts must be {k}x{k}"
            )));
        }
        Ok(Self { labels, counts })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn increment(&mut self, true_class: usize, predicted: usize) {
        self.counts[true_class][predicted] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    /// Fraction of mass on the diagonal.
    pub fn diagonal_fraction(&self) -> f64 {
        self.trace() as f64 / self.total().max(1) as f64
    }

    /// CSV export: header row of predicted labels, one row per true label,
    /// and a summary line with the two headline metrics.
    pub fn to_csv(&self) -> String {
        let mut out = format!("true_label,{}\n", self.labels.join(","));
        for (label, row) in self.labels.iter().zip(&self.counts) {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&format!("{label},{}\n", cells.join(",")));
        }
        out.push_str(&format!(
            "error_pct={:.4},macro_f1={:.4}\n",
            error_rate(self),
            macro_f1(self)
        ));
        out
    }
}

/// Misclassification percentage: `100 * (1 - trace / total)`.
pub fn error_rate(cm: &ConfusionMatrix) -> f64 {
    let total = cm.total();
    assert!(total > 0, "confusion matrix is empty");
    100.0 * (1.0 - cm.trace() as f64 / total as f64)
}

/// Macro-averaged F1 percentage; a class with no predictions and no members
/// contributes 0.
pub fn macro_f1(cm: &ConfusionMatrix) -> f64 {
    let k = cm.labels.len();
    let total = cm.total();
    assert!(total > 0, "confusion matrix is empty");
    let mut acc = 0.0;
    for c in 0..k {
        let tp = cm.counts[c][c] as f64;
        let row: f64 = cm.counts[c].iter().sum::<u64>() as f64;
        let col: f64 = (0..k).map(|r| cm.counts[r][c]).sum::<u64>() as f64;
        let precision = if col > 0.0 { tp / col } else { 0.0 };
        let recall = if row > 0.0 { tp / row } else { 0.0 };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        acc += f1;
    }
    100.0 * acc / k as f64
}

/// Adjusted Rand index between two clusterings of the same items.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "clusterings must cover the same items");
    let n = a.len();
    let ka = a.iter().max().map_or(0, |&m| m + 1);
    let kb = b.iter().max().map_or(0, |&m| m + 1);
    let mut contingency = vec![vec![0u64; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        contingency[x][y] += 1;
    }
    let choose2 = |x: u64| (x * x.saturating_sub(1)) as f64 / 2.0;
    let sum_ij: f64 = contingency.iter().flatten().map(|&x| choose2(x)).sum();
    let sum_a: f64 = contingency
        .iter()
        .map(|row| choose2(row.iter().sum()))
        .sum();
    let sum_b: f64 = (0..kb)
        .map(|j| choose2(contingency.iter().map(|row| row[j]).sum()))
        .sum();
    let expected = sum_a * sum_b / choose2(n as u64);
    let max_index = (sum_a + sum_b) / 2.0;
    if (max_index - expected).abs() < f64::EPSILON {
        return 1.0;
    }
    (sum_ij - expected) / (max_index - expected)
}

/// One synthetic document group. Tokens are drawn i.i.d.: with probability
/// `overlap` uniformly from the pool shared by all groups, otherwise
/// uniformly from the group's exclusive vocabulary. `overlap = 0` makes
/// group supports pairwise disjoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpec {
    pub label: String,
    pub exclusive_vocab: usize,
    pub overlap: f64,
    pub docs: usize,
    pub tokens_min: usize,
    pub tokens_max: usize,
}

/// A synthetic labeled corpus: a global shared vocabulary pool plus
/// per-group exclusive vocabularies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub shared_vocab: usize,
    pub groups: Vec<GroupSpec>,
    pub seed: u64,
}

/// Three groups whose spectra differ through vocabulary size and document
/// length; the workhorse corpus of the test suite.
pub fn three_group_benchmark(overlap: f64, docs_per_group: usize, seed: u64) -> SyntheticSpec {
    let group = |label: &str, vocab: usize, tmin: usize, tmax: usize| GroupSpec {
        label: label.to_owned(),
        exclusive_vocab: vocab,
        overlap,
        docs: docs_per_group,
        tokens_min: tmin,
        tokens_max: tmax,
    };
    SyntheticSpec {
        shared_vocab: 100,
        groups: vec![
            group("gr1", 50, 15, 25),
            group("gr2", 150, 25, 35),
            group("gr3", 400, 35, 45),
        ],
        seed,
    }
}

/// Deterministically generate the corpus described by `spec`.
pub fn generate_synthetic_corpus(spec: &SyntheticSpec) -> Vec<Document> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let tokenizer = TokenizerConfig::default();
    let mut docs = Vec::new();
    for group in &spec.groups {
        for d in 0..group.docs {
            let len = rng.gen_range(group.tokens_min..=group.tokens_max);
            let mut tokens = Vec::with_capacity(len);
            for _ in 0..len {
                let shared = spec.shared_vocab > 0
                    && group.overlap > 0.0
                    && rng.gen::<f64>() < group.overlap;
                if shared {
                    tokens.push(format!("sh{:04}", rng.gen_range(0..spec.shared_vocab)));
                } else {
                    tokens.push(format!(
                        "{}w{:04}",
                        group.label,
                        rng.gen_range(0..group.exclusive_vocab)
                    ));
                }
            }
            let text = tokens.join(" ");
            docs.push(Document::new(
                format!("{}-{d:04}", group.label),
                text,
                Some(group.label.clone()),
                &tokenizer,
            ));
        }
    }
    docs
}

fn similarity_of(docs: &[Document]) -> Result<SimilarityMatrix> {
    let vectors = build_term_vectors(docs, Weighting::Tf)?;
    cosine_similarity_matrix(&vectors)
}

fn docs_by_class<'a>(docs: &'a [Document], labels: &[String]) -> Result<Vec<Vec<&'a Document>>> {
    let mut by_class: Vec<Vec<&Document>> = vec![Vec::new(); labels.len()];
    for doc in docs {
        let label = doc.label.as_deref().ok_or_else(|| {
            Error::InvalidParameter(format!("document {:?} has no label", doc.id))
        })?;
        if let Some(c) = labels.iter().position(|l| l == label) {
            by_class[c].push(doc);
        } else {
            return Err(Error::EmptyClass {
                label: label.to_owned(),
            });
        }
    }
    for (c, members) in by_class.iter().enumerate() {
        if members.is_empty() {
            return Err(Error::EmptyClass {
                label: labels[c].clone(),
            });
        }
    }
    Ok(by_class)
}

/// Train a reference model on the classes of `train`, then repeatedly draw
/// per-class subsamples of `test_pool` and count where the assignment lands.
///
/// Each trial draws, for every class, a uniform subsample of
/// `ceil(fraction * class size)` documents and classifies it against the
/// model; `counts[true][predicted]` is incremented. Deterministic given
/// `seed`; trials derive independent sub-seeds, so they can run in any
/// order.
pub fn run_stability_experiment(
    train: &[Document],
    test_pool: &[Document],
    method: MatchMethod,
    trials: usize,
    fraction: f64,
    seed: u64,
) -> Result<ConfusionMatrix> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "fraction must be in (0, 1], got {fraction}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let labels: Vec<String> = train
        .iter()
        .filter_map(|d| d.label.clone())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    if labels.is_empty() {
        return Err(Error::InvalidParameter("training portion has no labels".into()));
    }

    let train_classes = docs_by_class(train, &labels)?;
    let test_classes = docs_by_class(test_pool, &labels)?;

    let reference_matrices: Vec<SimilarityMatrix> = train_classes
        .iter()
        .map(|members| {
            let owned: Vec<Document> = members.iter().map(|&d| d.clone()).collect();
            similarity_of(&owned)
        })
        .collect::<Result<Vec<_>>>()?;
    let model = ClusterModel::from_similarity_matrices(&reference_matrices, method)?;

    for (c, members) in test_classes.iter().enumerate() {
        let take = (fraction * members.len() as f64).ceil() as usize;
        if take < 2 {
            return Err(Error::InvalidParameter(format!(
                "class {:?}: subsample of {take} document(s) cannot carry a spectrum",
                labels[c]
            )));
        }
    }

    let outcomes: Vec<Vec<usize>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(crate::util::derive_seed(seed, t as u64));
            test_classes
                .iter()
                .map(|members| {
                    let take = (fraction * members.len() as f64).ceil() as usize;
                    let mut picked = rand::seq::index::sample(&mut rng, members.len(), take)
                        .into_vec();
                    picked.sort_unstable();
                    let subset: Vec<Document> =
                        picked.into_iter().map(|i| members[i].clone()).collect();
                    let sim = similarity_of(&subset)?;
                    assign_cluster(&sim, &model)
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cm = ConfusionMatrix::new(labels);
    for trial in outcomes {
        for (true_class, predicted) in trial.into_iter().enumerate() {
            cm.increment(true_class, predicted);
        }
    }
    Ok(cm)
}

/// JSON report of one stability experiment: config echo, counts, metrics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityReport {
    pub method: MatchMethod,
    pub fraction: f64,
    pub trials: usize,
    pub seed: u64,
    pub labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
    pub error_pct: f64,
    pub macro_f1: f64,
}

impl StabilityReport {
    pub fn from_experiment(
        cm: &ConfusionMatrix,
        method: MatchMethod,
        fraction: f64,
        trials: usize,
        seed: u64,
    ) -> Self {
        Self {
            method,
            fraction,
            trials,
            seed,
            labels: cm.labels().to_vec(),
            counts: cm.counts().to_vec(),
            error_pct: error_rate(cm),
            macro_f1: macro_f1(cm),
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization");
        out.push('\n');
        out
    }
}
