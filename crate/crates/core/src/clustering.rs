//! Per-batch baseline clusterer: normalized spectral clustering with
//! unit-length rows and one additional embedding dimension, followed by
//! seeded k-means.
//!
//! The embedding takes the eigenvectors of the normalized Laplacian for the
//! `k + 1` smallest eigenvalues (the constant eigenvector is kept), fixes
//! each column's sign so its largest-magnitude entry is positive, and scales
//! every nonzero row to unit Euclidean norm.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::corpus::SimilarityMatrix;
use crate::error::{Error, Result};
use crate::laplacian::{normalized_laplacian, sorted_symmetric_eigen};
use crate::util::derive_seed;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

const KMEANS_RESTARTS: usize = 10;
const KMEANS_MAX_ITER: usize = 100;
const KMEANS_REL_TOL: f64 = 1e-6;

/// Row embedding of the documents; `d == k + 1` columns.
#[derive(Debug, Clone)]
pub struct SpectralEmbedding {
    rows: DMatrix<f64>,
    k: usize,
}

impl SpectralEmbedding {
    pub fn rows(&self) -> &DMatrix<f64> {
        &self.rows
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// A hard assignment of `n` points to `k` nonempty clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    assignment: Vec<usize>,
    k: usize,
    inertia: f64,
}

impl Clustering {
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    /// Member indices of cluster `c`, in input order.
    pub fn members(&self, c: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(i, &a)| (a == c).then_some(i))
            .collect()
    }

    /// CSV export `doc_id,cluster`, one row per document in input order.
    pub fn to_csv(&self, ids: &[String]) -> String {
        let mut out = String::from("doc_id,cluster\n");
        for (id, a) in ids.iter().zip(&self.assignment) {
            out.push_str(&format!("{id},{a}\n"));
        }
        out
    }
}

/// Spectral embedding from the `k + 1` smallest eigenvectors of the
/// normalized Laplacian, rows scaled to unit length (zero rows left zero).
pub fn spectral_embed(s: &SimilarityMatrix, k: usize) -> Result<SpectralEmbedding> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be >= 2, got {k}")));
    }
    let n = s.n();
    if n < k + 1 {
        return Err(Error::TooFewDocuments { n, needed: k + 1 });
    }
    let lap = normalized_laplacian(s);
    let (_, eigenvectors) = sorted_symmetric_eigen(lap.values())?;
    let d = k + 1;
    let mut rows = DMatrix::zeros(n, d);
    for col in 0..d {
        let v = eigenvectors.column(col);
        // Fix the sign so the largest-magnitude entry is positive.
        let mut pivot = 0;
        for i in 1..n {
            if v[i].abs() > v[pivot].abs() {
                pivot = i;
            }
        }
        let flip = if v[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            rows[(i, col)] = flip * v[i];
        }
    }
    for i in 0..n {
        let norm = (0..d).map(|j| rows[(i, j)] * rows[(i, j)]).sum::<f64>().sqrt();
        if norm > 0.0 {
            for j in 0..d {
                rows[(i, j)] /= norm;
            }
        }
    }
    Ok(SpectralEmbedding { rows, k })
}

fn sq_dist(points: &DMatrix<f64>, i: usize, centroid: &[f64]) -> f64 {
    centroid
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let d = points[(i, j)] - c;
            d * d
        })
        .sum()
}

/// k-means++ initialization: first center uniform, the rest by squared
/// distance sampling via a cumulative walk (deterministic given the RNG).
fn kmeanspp_init(points: &DMatrix<f64>, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.nrows();
    let d = points.ncols();
    let point = |i: usize| (0..d).map(|j| points[(i, j)]).collect::<Vec<f64>>();

    let mut centers = vec![point(rng.gen_range(0..n))];
    let mut dist2: Vec<f64> = (0..n).map(|i| sq_dist(points, i, &centers[0])).collect();
    let mut chosen = vec![false; n];
    while centers.len() < k {
        let total: f64 = dist2.iter().sum();
        let idx = if total > 0.0 {
            let mut r = rng.gen::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in dist2.iter().enumerate() {
                if r < w {
                    pick = i;
                    break;
                }
                r -= w;
            }
            pick
        } else {
            // All remaining points coincide with a center; take the lowest
            // unused index.
            (0..n).find(|&i| !chosen[i]).unwrap_or(0)
        };
        chosen[idx] = true;
        let c = point(idx);
        for (i, d) in dist2.iter_mut().enumerate() {
            *d = d.min(sq_dist(points, i, &c));
        }
        centers.push(c);
    }
    centers
}

struct LloydOutcome {
    assignment: Vec<usize>,
    inertia: f64,
}

fn assign_nearest(points: &DMatrix<f64>, centers: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = points.nrows();
    let mut assignment = vec![0usize; n];
    let mut inertia = 0.0;
    for (i, slot) in assignment.iter_mut().enumerate() {
        let mut best = 0;
        let mut best_d = sq_dist(points, i, &centers[0]);
        for (c, center) in centers.iter().enumerate().skip(1) {
            let d = sq_dist(points, i, center);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        *slot = best;
        inertia += best_d;
    }
    (assignment, inertia)
}

fn lloyd(points: &DMatrix<f64>, k: usize, rng: &mut ChaCha8Rng) -> LloydOutcome {
    let n = points.nrows();
    let d = points.ncols();
    let mut centers = kmeanspp_init(points, k, rng);
    let (mut assignment, mut inertia) = assign_nearest(points, &centers);

    for _ in 0..KMEANS_MAX_ITER {
        // Repair empty clusters by reseeding at the point farthest from the
        // stale centroid, then let the next assignment pick it up.
        let mut counts = vec![0usize; k];
        for &a in &assignment {
            counts[a] += 1;
        }
        let mut repaired = false;
        for c in 0..k {
            if counts[c] == 0 {
                let far = (0..n)
                    .max_by(|&a, &b| {
                        sq_dist(points, a, &centers[c]).total_cmp(&sq_dist(points, b, &centers[c]))
                    })
                    .unwrap();
                centers[c] = (0..d).map(|j| points[(far, j)]).collect();
                repaired = true;
            }
        }
        if repaired {
            let (a, _) = assign_nearest(points, &centers);
            assignment = a;
        }

        // Means update.
        let mut sums = vec![vec![0.0; d]; k];
        let mut counts = vec![0usize; k];
        for (i, &a) in assignment.iter().enumerate() {
            counts[a] += 1;
            for j in 0..d {
                sums[a][j] += points[(i, j)];
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                for j in 0..d {
                    centers[c][j] = sums[c][j] / counts[c] as f64;
                }
            }
        }

        let prev_inertia = inertia;
        let (a, cost) = assign_nearest(points, &centers);
        assignment = a;
        inertia = cost;
        if !repaired {
            assert!(
                inertia <= prev_inertia + 1e-9 * (1.0 + prev_inertia),
                "k-means inertia increased: {prev_inertia} -> {inertia}"
            );
        }
        if prev_inertia - inertia <= KMEANS_REL_TOL * prev_inertia.max(f64::MIN_POSITIVE) {
            break;
        }
    }

    // Guarantee nonempty clusters: steal the farthest point from a cluster
    // with at least two members (only reachable with heavy duplicates).
    let mut counts = vec![0usize; k];
    for &a in &assignment {
        counts[a] += 1;
    }
    for c in 0..k {
        if counts[c] == 0 {
            let victim = (0..n)
                .filter(|&i| counts[assignment[i]] >= 2)
                .max_by(|&a, &b| {
                    sq_dist(points, a, &centers[assignment[a]])
                        .total_cmp(&sq_dist(points, b, &centers[assignment[b]]))
                })
                .expect("k <= n guarantees a donor cluster");
            counts[assignment[victim]] -= 1;
            assignment[victim] = c;
            counts[c] = 1;
            centers[c] = (0..d).map(|j| points[(victim, j)]).collect();
        }
    }
    let inertia = assignment
        .iter()
        .enumerate()
        .map(|(i, &a)| sq_dist(points, i, &centers[a]))
        .sum();
    LloydOutcome { assignment, inertia }
}

/// Seeded k-means: best of 10 k-means++ restarts by inertia, ties broken by
/// lowest restart index so parallel execution never changes the result.
pub fn kmeans(points: &DMatrix<f64>, k: usize, seed: u64) -> Result<Clustering> {
    let n = points.nrows();
    if k == 0 || n < k {
        return Err(Error::TooFewDocuments { n, needed: k });
    }
    let outcomes: Vec<LloydOutcome> = (0..KMEANS_RESTARTS)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, r as u64));
            lloyd(points, k, &mut rng)
        })
        .collect();
    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.inertia.total_cmp(&b.inertia).then(ia.cmp(ib)))
        .map(|(_, o)| o)
        .unwrap();
    Ok(Clustering {
        assignment: best.assignment.clone(),
        k,
        inertia: best.inertia,
    })
}

/// Normalized spectral clustering: embed, then k-means on the rows.
pub fn spectral_cluster(s: &SimilarityMatrix, k: usize, seed: u64) -> Result<Clustering> {
    let embedding = spectral_embed(s, k)?;
    kmeans(embedding.rows(), k, seed)
}
