//! Helpers shared across the crate's unit tests.

use nalgebra::DMatrix;
use rand::Rng;

use crate::corpus::SimilarityMatrix;
use crate::laplacian::{LaplacianKind, Spectrum};
use crate::spectra::{MatchMethod, SpectralFunction};

/// Random symmetric similarity matrix with zero diagonal; each edge present
/// with probability `density`.
pub(crate) fn random_similarity(n: usize, density: f64, rng: &mut impl Rng) -> SimilarityMatrix {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < density {
                let v = rng.gen::<f64>();
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
    }
    SimilarityMatrix::from_matrix(m).unwrap()
}

/// Connected components of the similarity graph via union-find.
pub(crate) fn component_count(s: &SimilarityMatrix) -> usize {
    let n = s.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if s.get(i, j) > 0.0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    (0..n)
        .map(|i| find(&mut parent, i))
        .collect::<std::collections::HashSet<_>>()
        .len()
}

/// Random non-decreasing spectrum matching a method's Laplacian kind, with a
/// zero smallest eigenvalue.
pub(crate) fn random_spectrum(method: MatchMethod, rng: &mut impl Rng) -> Spectrum {
    let n = rng.gen_range(2..40);
    let cap = match method.laplacian_kind() {
        LaplacianKind::Combinatorial => n as f64,
        LaplacianKind::Normalized => 2.0,
    };
    let mut evs: Vec<f64> = (0..n - 1).map(|_| rng.gen::<f64>() * cap).collect();
    evs.push(0.0);
    evs.sort_by(f64::total_cmp);
    Spectrum::from_eigenvalues(method.laplacian_kind(), evs).unwrap()
}

/// Dense trapezoid quadrature of |F1 - F2| over [0, 1]: the independent
/// oracle for the exact merged-knot integral.
pub(crate) fn trapezoid_l1(f1: &SpectralFunction, f2: &SpectralFunction, samples: usize) -> f64 {
    let h = 1.0 / samples as f64;
    let mut acc = 0.0;
    let mut prev = (f1.evaluate_at(0.0).unwrap() - f2.evaluate_at(0.0).unwrap()).abs();
    for i in 1..=samples {
        let x = (i as f64 * h).min(1.0);
        let cur = (f1.evaluate_at(x).unwrap() - f2.evaluate_at(x).unwrap()).abs();
        acc += (prev + cur) / 2.0 * h;
        prev = cur;
    }
    acc
}
