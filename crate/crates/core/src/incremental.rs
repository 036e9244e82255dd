//! Batch split, spectrum-based cluster assignment, and cross-batch merging.
//!
//! The first batch is clustered and frozen as the reference model: one
//! spectral function per cluster, built from the cluster's similarity
//! submatrix. Every later batch is clustered independently and each of its
//! clusters is merged into the reference cluster with the smallest spectral
//! distance. In the default mode each local cluster is matched
//! independently, so two local clusters may land on the same reference; the
//! bijective mode instead picks the one-to-one assignment minimizing the
//! total distance.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{spectral_cluster, Clustering};
use crate::corpus::{build_term_vectors, cosine_similarity_matrix, Document, SimilarityMatrix, Weighting};
use crate::error::{Error, Result};
use crate::laplacian::{combinatorial_laplacian, normalized_laplacian, spectrum, LaplacianKind};
use crate::spectra::{build_spectral_function, spectral_distance, MatchMethod, SpectralFunction};

/// Frozen per-cluster reference spectral functions (built from batch 0).
#[derive(Debug, Clone)]
pub struct ClusterModel {
    method: MatchMethod,
    references: Vec<SpectralFunction>,
}

impl ClusterModel {
    /// Build one reference per similarity matrix, in cluster-id order.
    pub fn from_similarity_matrices(
        matrices: &[SimilarityMatrix],
        method: MatchMethod,
    ) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::InvalidParameter("cluster model needs at least one cluster".into()));
        }
        let references = matrices
            .iter()
            .map(|s| build_spectral_function(&method_spectrum(s, method)?, method))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { method, references })
    }

    pub fn method(&self) -> MatchMethod {
        self.method
    }

    pub fn k(&self) -> usize {
        self.references.len()
    }

    pub fn references(&self) -> &[SpectralFunction] {
        &self.references
    }

    /// JSON persistence; floats survive a round trip bit-exactly.
    pub fn to_json_string(&self) -> String {
        let file = ModelFile {
            method: self.method,
            k: self.references.len(),
            references: self
                .references
                .iter()
                .enumerate()
                .map(|(cluster, f)| ReferenceFile {
                    cluster,
                    source_n: f.source_n(),
                    knots: f.knots().to_vec(),
                    values: f.values().to_vec(),
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("model serialization");
        out.push('\n');
        out
    }

    pub fn from_json_str(input: &str) -> Result<Self> {
        let file: ModelFile =
            serde_json::from_str(input).map_err(|e| Error::ModelFormat(e.to_string()))?;
        if file.references.len() != file.k {
            return Err(Error::ModelFormat(format!(
                "model declares k={} but has {} references",
                file.k,
                file.references.len()
            )));
        }
        let mut references = Vec::with_capacity(file.k);
        for (i, r) in file.references.into_iter().enumerate() {
            if r.cluster != i {
                return Err(Error::ModelFormat(format!(
                    "reference {i} carries cluster id {}",
                    r.cluster
                )));
            }
            references.push(SpectralFunction::from_parts(
                file.method,
                r.source_n,
                r.knots,
                r.values,
            )?);
        }
        Ok(Self {
            method: file.method,
            references,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    method: MatchMethod,
    k: usize,
    references: Vec<ReferenceFile>,
}

#[derive(Serialize, Deserialize)]
struct ReferenceFile {
    cluster: usize,
    source_n: usize,
    knots: Vec<f64>,
    values: Vec<f64>,
}

fn method_spectrum(s: &SimilarityMatrix, method: MatchMethod) -> Result<crate::laplacian::Spectrum> {
    let lap = match method.laplacian_kind() {
        LaplacianKind::Combinatorial => combinatorial_laplacian(s),
        LaplacianKind::Normalized => normalized_laplacian(s),
    };
    spectrum(&lap)
}

/// Spectral distances from a new cluster's similarity matrix to every
/// reference of the model, in cluster-id order.
pub fn assignment_distances(s_new: &SimilarityMatrix, model: &ClusterModel) -> Result<Vec<f64>> {
    let f = build_spectral_function(&method_spectrum(s_new, model.method)?, model.method)?;
    model
        .references
        .iter()
        .map(|r| spectral_distance(&f, r, model.method))
        .collect()
}

/// Assign a new cluster to the reference with the smallest spectral
/// distance; ties break toward the lowest cluster id.
pub fn assign_cluster(s_new: &SimilarityMatrix, model: &ClusterModel) -> Result<usize> {
    let distances = assignment_distances(s_new, model)?;
    let mut best = 0;
    for (c, d) in distances.iter().enumerate().skip(1) {
        if *d < distances[best] {
            best = c;
        }
    }
    Ok(best)
}

/// Uniform random partition into batches. Batches take `ceil(n / m)`
/// documents each with the remainder in the final batch; when that would
/// leave a batch empty, sizes differing by at most one are used instead.
/// Within each batch the original document order is preserved.
pub fn split_batches(docs: &[Document], m_plus_1: usize, seed: u64) -> Result<Vec<Vec<Document>>> {
    if m_plus_1 == 0 {
        return Err(Error::InvalidParameter("need at least one batch".into()));
    }
    let n = docs.len();
    if n < m_plus_1 {
        return Err(Error::TooFewDocuments { n, needed: m_plus_1 });
    }
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);

    let chunk = n.div_ceil(m_plus_1);
    let sizes: Vec<usize> = if n > chunk * (m_plus_1 - 1) {
        (0..m_plus_1)
            .map(|b| if b + 1 < m_plus_1 { chunk } else { n - chunk * (m_plus_1 - 1) })
            .collect()
    } else {
        let base = n / m_plus_1;
        let rem = n % m_plus_1;
        (0..m_plus_1).map(|b| base + usize::from(b < rem)).collect()
    };

    let mut batches = Vec::with_capacity(m_plus_1);
    let mut start = 0;
    for size in sizes {
        let mut chunk: Vec<usize> = indices[start..start + size].to_vec();
        chunk.sort_unstable();
        batches.push(chunk.into_iter().map(|i| docs[i].clone()).collect());
        start += size;
    }
    Ok(batches)
}

/// Parameters of the incremental pipeline.
#[derive(Debug, Clone, Copy)]
pub struct IncrementalConfig {
    pub k: usize,
    pub m_plus_1: usize,
    pub method: MatchMethod,
    pub seed: u64,
    /// Match each batch's clusters one-to-one against the references by
    /// minimum total distance instead of independently.
    pub bijective: bool,
}

/// The merged clustering of the whole set, with per-document provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedClustering {
    assignment: BTreeMap<String, usize>,
    provenance: BTreeMap<String, (usize, usize)>,
}

impl MergedClustering {
    pub fn assignment(&self) -> &BTreeMap<String, usize> {
        &self.assignment
    }

    pub fn provenance(&self) -> &BTreeMap<String, (usize, usize)> {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// CSV export `doc_id,global_cluster,batch,local_cluster`, rows sorted
    /// by document id.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("doc_id,global_cluster,batch,local_cluster\n");
        for (id, &global) in &self.assignment {
            let (batch, local) = self.provenance[id];
            out.push_str(&format!("{id},{global},{batch},{local}\n"));
        }
        out
    }
}

/// Merge bookkeeping shared by the real pipeline and test harnesses: every
/// document of batch `i`, local cluster `j`, lands in `global_of(i, j)`.
pub(crate) fn merge_batches(
    batches: &[Vec<Document>],
    locals: &[Vec<usize>],
    global_of: impl Fn(usize, usize) -> usize,
) -> MergedClustering {
    let mut assignment = BTreeMap::new();
    let mut provenance = BTreeMap::new();
    for (i, (batch, local)) in batches.iter().zip(locals).enumerate() {
        for (doc, &j) in batch.iter().zip(local) {
            assignment.insert(doc.id.clone(), global_of(i, j));
            provenance.insert(doc.id.clone(), (i, j));
        }
    }
    MergedClustering {
        assignment,
        provenance,
    }
}

/// Mean raw term-count vector of a document set, keyed by term string so it
/// is comparable across batches with different vocabularies.
fn tf_centroid(docs: &[Document]) -> HashMap<String, f64> {
    let mut acc: HashMap<String, f64> = HashMap::new();
    for doc in docs {
        for tok in &doc.tokens {
            *acc.entry(tok.clone()).or_insert(0.0) += 1.0;
        }
    }
    let n = docs.len().max(1) as f64;
    for v in acc.values_mut() {
        *v /= n;
    }
    acc
}

fn centroid_cosine(a: &HashMap<String, f64>, b: &HashMap<String, f64>) -> f64 {
    let dot: f64 = a
        .iter()
        .filter_map(|(t, &wa)| b.get(t).map(|&wb| wa * wb))
        .sum();
    let na: f64 = a.values().map(|w| w * w).sum::<f64>().sqrt();
    let nb: f64 = b.values().map(|w| w * w).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

struct BatchState {
    docs: Vec<Document>,
    sim: SimilarityMatrix,
    clustering: Clustering,
}

fn cluster_batch(docs: Vec<Document>, k: usize, seed: u64) -> Result<BatchState> {
    let vectors = build_term_vectors(&docs, Weighting::Tf)?;
    let sim = cosine_similarity_matrix(&vectors)?;
    let clustering = spectral_cluster(&sim, k, seed)?;
    Ok(BatchState {
        docs,
        sim,
        clustering,
    })
}

/// The full incremental pipeline: split, cluster each batch, build the
/// reference model from batch 0, and merge every later batch's clusters
/// into the model's clusters by spectral distance.
///
/// A later batch's cluster with fewer than two members has no spectrum; it
/// is merged into the reference cluster with the closest term centroid and
/// a warning is logged. A batch-0 cluster that small cannot seed a
/// reference and is an error.
pub fn incremental_cluster(docs: &[Document], config: IncrementalConfig) -> Result<MergedClustering> {
    incremental_cluster_with_model(docs, config).map(|(merged, _)| merged)
}

/// Like [`incremental_cluster`], also returning the frozen batch-0 model.
pub fn incremental_cluster_with_model(
    docs: &[Document],
    config: IncrementalConfig,
) -> Result<(MergedClustering, ClusterModel)> {
    if config.k < 2 {
        return Err(Error::InvalidParameter(format!("k must be >= 2, got {}", config.k)));
    }
    if config.bijective && config.k > 8 {
        return Err(Error::InvalidParameter(format!(
            "bijective matching enumerates k! assignments and supports k <= 8, got {}",
            config.k
        )));
    }
    let needed = config.m_plus_1 * (config.k + 1);
    if docs.len() < needed {
        return Err(Error::TooFewDocuments {
            n: docs.len(),
            needed,
        });
    }

    let batches = split_batches(docs, config.m_plus_1, config.seed)?;
    // The same clustering seed is reused for every batch, so a single-batch
    // run is identical to spectral clustering of the whole set.
    let states: Vec<BatchState> = batches
        .into_par_iter()
        .map(|batch| cluster_batch(batch, config.k, config.seed))
        .collect::<Result<Vec<_>>>()?;

    let reference_members: Vec<Vec<usize>> =
        (0..config.k).map(|c| states[0].clustering.members(c)).collect();
    for (c, members) in reference_members.iter().enumerate() {
        if members.len() < 2 {
            return Err(Error::DegenerateCluster {
                batch: 0,
                cluster: c,
                size: members.len(),
            });
        }
    }
    let reference_matrices: Vec<SimilarityMatrix> = reference_members
        .iter()
        .map(|members| states[0].sim.submatrix(members))
        .collect();
    let model = ClusterModel::from_similarity_matrices(&reference_matrices, config.method)?;
    let reference_centroids: Vec<HashMap<String, f64>> = reference_members
        .iter()
        .map(|members| {
            let subset: Vec<Document> =
                members.iter().map(|&i| states[0].docs[i].clone()).collect();
            tf_centroid(&subset)
        })
        .collect();

    // Per batch, the global target of each local cluster.
    let mut targets: Vec<Vec<usize>> = vec![(0..config.k).collect()];
    for (i, state) in states.iter().enumerate().skip(1) {
        let members: Vec<Vec<usize>> = (0..config.k).map(|c| state.clustering.members(c)).collect();
        let mut target = vec![0usize; config.k];

        // Distances for clusters large enough to carry a spectrum.
        let mut spectral: Vec<Option<Vec<f64>>> = Vec::with_capacity(config.k);
        for m in &members {
            if m.len() >= 2 {
                spectral.push(Some(assignment_distances(&state.sim.submatrix(m), &model)?));
            } else {
                spectral.push(None);
            }
        }

        if config.bijective {
            let eligible: Vec<usize> = (0..config.k).filter(|&j| spectral[j].is_some()).collect();
            let mut best: Option<(f64, Vec<usize>)> = None;
            for perm in (0..config.k).permutations(eligible.len()) {
                let total: f64 = eligible
                    .iter()
                    .zip(&perm)
                    .map(|(&j, &c)| spectral[j].as_ref().unwrap()[c])
                    .sum();
                if best.as_ref().is_none_or(|(b, _)| total < *b) {
                    best = Some((total, perm));
                }
            }
            let (_, perm) = best.expect("at least one permutation");
            for (&j, &c) in eligible.iter().zip(&perm) {
                target[j] = c;
            }
        } else {
            for j in 0..config.k {
                if let Some(distances) = &spectral[j] {
                    let mut c = 0;
                    for (cand, d) in distances.iter().enumerate().skip(1) {
                        if *d < distances[c] {
                            c = cand;
                        }
                    }
                    target[j] = c;
                }
            }
        }

        // Degenerate clusters fall back to the closest reference centroid.
        for j in 0..config.k {
            if spectral[j].is_none() {
                let subset: Vec<Document> =
                    members[j].iter().map(|&x| state.docs[x].clone()).collect();
                let centroid = tf_centroid(&subset);
                let mut c = 0;
                let mut best = f64::NEG_INFINITY;
                for (cand, rc) in reference_centroids.iter().enumerate() {
                    let cos = centroid_cosine(&centroid, rc);
                    if cos > best {
                        best = cos;
                        c = cand;
                    }
                }
                log::warn!(
                    "batch {i} cluster {j} has {} member(s); merged into cluster {c} by centroid similarity",
                    members[j].len()
                );
                target[j] = c;
            }
        }
        targets.push(target);
    }

    let all_batches: Vec<Vec<Document>> = states.iter().map(|s| s.docs.clone()).collect();
    let locals: Vec<Vec<usize>> = states
        .iter()
        .map(|s| s.clustering.assignment().to_vec())
        .collect();
    let merged = merge_batches(&all_batches, &locals, |i, j| targets[i][j]);
    Ok((merged, model))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TokenizerConfig;
    use crate::evaluation::{generate_synthetic_corpus, three_group_benchmark};
    use crate::laplacian::Spectrum;

    fn synthetic_docs(n_per_group: usize, seed: u64) -> Vec<Document> {
        generate_synthetic_corpus(&three_group_benchmark(0.1, n_per_group, seed))
    }

    #[test]
    fn split_reproduces_portion_sizes() {
        let config = TokenizerConfig::default();
        let docs: Vec<Document> = (0..5203)
            .map(|i| Document::new(format!("d{i}"), "aa bb", None, &config))
            .collect();
        let batches = split_batches(&docs, 3, 0).unwrap();
        let sizes: Vec<usize> = batches.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1735, 1735, 1733]);
    }

    #[test]
    fn split_four_into_two() {
        let config = TokenizerConfig::default();
        let docs: Vec<Document> = (0..4)
            .map(|i| Document::new(format!("d{i}"), "aa bb", None, &config))
            .collect();
        let batches = split_batches(&docs, 2, 1).unwrap();
        assert_eq!(batches[0].len(), 2);
        assert_eq!(batches[1].len(), 2);
    }

    #[test]
    fn split_is_deterministic_and_partitions() {
        let config = TokenizerConfig::default();
        let docs: Vec<Document> = (0..37)
            .map(|i| Document::new(format!("d{i}"), "aa bb", None, &config))
            .collect();
        let a = split_batches(&docs, 4, 9).unwrap();
        let b = split_batches(&docs, 4, 9).unwrap();
        let ids = |bs: &[Vec<Document>]| -> Vec<Vec<String>> {
            bs.iter()
                .map(|b| b.iter().map(|d| d.id.clone()).collect())
                .collect()
        };
        assert_eq!(ids(&a), ids(&b));

        let mut all: Vec<String> = a.iter().flatten().map(|d| d.id.clone()).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 37);

        let c = split_batches(&docs, 4, 10).unwrap();
        assert_ne!(ids(&a), ids(&c));
    }

    #[test]
    fn split_never_produces_empty_batches() {
        let config = TokenizerConfig::default();
        for n in 4..40usize {
            for m in 1..=4usize {
                if n < m {
                    continue;
                }
                let docs: Vec<Document> = (0..n)
                    .map(|i| Document::new(format!("d{i}"), "aa bb", None, &config))
                    .collect();
                let batches = split_batches(&docs, m, 3).unwrap();
                assert_eq!(batches.len(), m);
                assert!(batches.iter().all(|b| !b.is_empty()), "n={n} m={m}");
            }
        }
    }

    fn class_matrices(docs: &[Document]) -> Vec<SimilarityMatrix> {
        ["gr1", "gr2", "gr3"]
            .iter()
            .map(|g| {
                let subset: Vec<Document> = docs
                    .iter()
                    .filter(|d| d.label.as_deref() == Some(g))
                    .cloned()
                    .collect();
                let vectors = build_term_vectors(&subset, Weighting::Tf).unwrap();
                cosine_similarity_matrix(&vectors).unwrap()
            })
            .collect()
    }

    #[test]
    fn assign_with_singleton_model_returns_its_id() {
        let docs = synthetic_docs(20, 5);
        let mats = class_matrices(&docs);
        let model =
            ClusterModel::from_similarity_matrices(&mats[..1], MatchMethod::Clssal).unwrap();
        assert_eq!(assign_cluster(&mats[2], &model).unwrap(), 0);
    }

    #[test]
    fn assign_own_matrix_has_distance_zero() {
        let docs = synthetic_docs(20, 6);
        let mats = class_matrices(&docs);
        let model = ClusterModel::from_similarity_matrices(&mats, MatchMethod::Clssal).unwrap();
        for (c, m) in mats.iter().enumerate() {
            let distances = assignment_distances(m, &model).unwrap();
            assert_eq!(distances[c], 0.0);
            assert_eq!(assign_cluster(m, &model).unwrap(), c);
        }
    }

    #[test]
    fn assign_is_invariant_under_model_relabeling() {
        let docs = synthetic_docs(20, 7);
        let mats = class_matrices(&docs);
        let model = ClusterModel::from_similarity_matrices(&mats, MatchMethod::Clssal).unwrap();
        let rotated: Vec<SimilarityMatrix> = vec![mats[2].clone(), mats[0].clone(), mats[1].clone()];
        let rotated_model =
            ClusterModel::from_similarity_matrices(&rotated, MatchMethod::Clssal).unwrap();
        for m in &mats {
            let a = assign_cluster(m, &model).unwrap();
            let b = assign_cluster(m, &rotated_model).unwrap();
            // relabeling: original id c maps to (c + 1) % 3 in the rotated model
            assert_eq!((a + 1) % 3, b);
        }
    }

    #[test]
    fn model_json_round_trip_is_bit_exact() {
        let docs = synthetic_docs(15, 8);
        let mats = class_matrices(&docs);
        let model = ClusterModel::from_similarity_matrices(&mats, MatchMethod::Clrl).unwrap();
        let json = model.to_json_string();
        let back = ClusterModel::from_json_str(&json).unwrap();
        assert_eq!(back.method(), model.method());
        assert_eq!(back.k(), model.k());
        for (a, b) in model.references().iter().zip(back.references()) {
            assert_eq!(a.knots(), b.knots());
            assert_eq!(a.values(), b.values());
            assert_eq!(a.source_n(), b.source_n());
        }
        assert_eq!(back.to_json_string(), json);
    }

    #[test]
    fn model_json_rejects_inconsistent_files() {
        let bad = r#"{"method":"clssal","k":2,"references":[]}"#;
        assert!(matches!(
            ClusterModel::from_json_str(bad),
            Err(Error::ModelFormat(_))
        ));
    }

    #[test]
    fn merge_with_label_matcher_reproduces_label_partition() {
        // Harness sanity: matching by ground-truth labels makes the merged
        // clustering equal to the label partition.
        let docs = synthetic_docs(12, 20);
        let batches = split_batches(&docs, 3, 20).unwrap();
        let label_id = |d: &Document| match d.label.as_deref() {
            Some("gr1") => 0usize,
            Some("gr2") => 1,
            _ => 2,
        };
        let locals: Vec<Vec<usize>> = batches
            .iter()
            .map(|b| b.iter().map(label_id).collect())
            .collect();
        let merged = merge_batches(&batches, &locals, |_, j| j);
        assert_eq!(merged.len(), docs.len());
        for doc in &docs {
            assert_eq!(merged.assignment()[&doc.id], label_id(doc));
        }
    }

    #[test]
    fn single_batch_equals_full_spectral_clustering() {
        let docs = synthetic_docs(15, 21);
        let merged = incremental_cluster(
            &docs,
            IncrementalConfig {
                k: 3,
                m_plus_1: 1,
                method: MatchMethod::Clssal,
                seed: 21,
                bijective: false,
            },
        )
        .unwrap();

        let vectors = build_term_vectors(&docs, Weighting::Tf).unwrap();
        let sim = cosine_similarity_matrix(&vectors).unwrap();
        let full = spectral_cluster(&sim, 3, 21).unwrap();
        for (i, doc) in docs.iter().enumerate() {
            assert_eq!(merged.assignment()[&doc.id], full.assignment()[i]);
            assert_eq!(merged.provenance()[&doc.id], (0, full.assignment()[i]));
        }
    }

    #[test]
    fn provenance_covers_every_document_once() {
        let docs = synthetic_docs(15, 22);
        let merged = incremental_cluster(
            &docs,
            IncrementalConfig {
                k: 3,
                m_plus_1: 3,
                method: MatchMethod::Clssal,
                seed: 22,
                bijective: false,
            },
        )
        .unwrap();
        assert_eq!(merged.len(), docs.len());
        for doc in &docs {
            let (batch, local) = merged.provenance()[&doc.id];
            assert!(batch < 3);
            assert!(local < 3);
            assert!(merged.assignment()[&doc.id] < 3);
        }
    }

    #[test]
    fn bijective_mode_uses_each_reference_once_per_batch() {
        let docs = synthetic_docs(20, 23);
        let merged = incremental_cluster(
            &docs,
            IncrementalConfig {
                k: 3,
                m_plus_1: 2,
                method: MatchMethod::Clssal,
                seed: 23,
                bijective: true,
            },
        )
        .unwrap();
        for batch in 0..2usize {
            let mut globals: Vec<usize> = merged
                .provenance()
                .iter()
                .filter(|(_, &(b, _))| b == batch)
                .map(|(id, _)| merged.assignment()[id])
                .collect();
            globals.sort_unstable();
            globals.dedup();
            assert_eq!(globals, vec![0, 1, 2], "batch {batch}");
        }
    }

    #[test]
    fn merged_csv_lists_all_documents() {
        let docs = synthetic_docs(12, 24);
        let merged = incremental_cluster(
            &docs,
            IncrementalConfig {
                k: 3,
                m_plus_1: 2,
                method: MatchMethod::Clmxl,
                seed: 24,
                bijective: false,
            },
        )
        .unwrap();
        let csv = merged.to_csv();
        assert_eq!(csv.lines().count(), docs.len() + 1);
        assert!(csv.starts_with("doc_id,global_cluster,batch,local_cluster\n"));
    }

    #[test]
    fn zero_spectrum_reference_is_usable() {
        // An edgeless cluster yields the all-zero spectrum; the clrl
        // convention maps it to the zero function, which still matches.
        let mats = vec![
            SimilarityMatrix::from_matrix(nalgebra::DMatrix::zeros(3, 3)).unwrap(),
        ];
        let model = ClusterModel::from_similarity_matrices(&mats, MatchMethod::Clrl).unwrap();
        let spec = Spectrum::from_eigenvalues(LaplacianKind::Combinatorial, vec![0.0, 0.0, 0.0])
            .unwrap();
        let f = build_spectral_function(&spec, MatchMethod::Clrl).unwrap();
        assert_eq!(
            spectral_distance(&f, &model.references()[0], MatchMethod::Clrl).unwrap(),
            0.0
        );
    }
}
