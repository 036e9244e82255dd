//! Graph Laplacians of a similarity matrix and their eigenvalue spectra.
//!
//! The combinatorial Laplacian is `L = T - S` with `T = diag(row sums of S)`.
//! The normalized Laplacian is `T^(-1/2) L T^(-1/2) = I - T^(-1/2) S T^(-1/2)`;
//! its eigenvalues lie in `[0, 2]`. Isolated nodes (degree ~ 0) get a zero
//! row/column and a zero diagonal entry in the normalized Laplacian, which
//! keeps it symmetric PSD and counts the node as its own component.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::corpus::SimilarityMatrix;
use crate::error::{Error, Result};
use crate::util::fmt_sig;

/// Degrees below this count as isolated in the normalized Laplacian.
const DEG_EPS: f64 = 1e-12;

/// Maximum QL iterations before the eigensolver reports failure.
const EIGEN_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LaplacianKind {
    Combinatorial,
    Normalized,
}

/// A dense symmetric Laplacian with its degree vector.
#[derive(Debug, Clone)]
pub struct Laplacian {
    kind: LaplacianKind,
    values: DMatrix<f64>,
    degrees: DVector<f64>,
}

impl Laplacian {
    pub fn kind(&self) -> LaplacianKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn degrees(&self) -> &DVector<f64> {
        &self.degrees
    }
}

fn degree_vector(s: &SimilarityMatrix) -> DVector<f64> {
    let n = s.n();
    DVector::from_fn(n, |j, _| (0..n).map(|k| s.get(j, k)).sum())
}

/// Combinatorial Laplacian `L = T - S`.
pub fn combinatorial_laplacian(s: &SimilarityMatrix) -> Laplacian {
    let n = s.n();
    let degrees = degree_vector(s);
    let mut values = -s.values().clone();
    for j in 0..n {
        values[(j, j)] = degrees[j];
    }
    Laplacian {
        kind: LaplacianKind::Combinatorial,
        values,
        degrees,
    }
}

/// Normalized Laplacian `I - T^(-1/2) S T^(-1/2)` with the isolated-node
/// convention described in the module docs.
pub fn normalized_laplacian(s: &SimilarityMatrix) -> Laplacian {
    let n = s.n();
    let degrees = degree_vector(s);
    let inv_sqrt: Vec<f64> = degrees
        .iter()
        .map(|&d| if d > DEG_EPS { 1.0 / d.sqrt() } else { 0.0 })
        .collect();
    let mut values = DMatrix::zeros(n, n);
    for j in 0..n {
        if degrees[j] > DEG_EPS {
            values[(j, j)] = 1.0;
        }
        for k in (j + 1)..n {
            let v = -s.get(j, k) * inv_sqrt[j] * inv_sqrt[k];
            values[(j, k)] = v;
            values[(k, j)] = v;
        }
    }
    Laplacian {
        kind: LaplacianKind::Normalized,
        values,
        degrees,
    }
}

/// Eigenvalues of a Laplacian in non-decreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    kind: LaplacianKind,
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Wrap eigenvalues produced elsewhere (tests, synthetic spectra).
    /// They must already be in non-decreasing order.
    pub fn from_eigenvalues(kind: LaplacianKind, eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(
                "spectrum eigenvalues must be non-decreasing".into(),
            ));
        }
        Ok(Self { kind, eigenvalues })
    }

    pub fn kind(&self) -> LaplacianKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// CSV export with header `index,eigenvalue`, index starting at 1.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue\n");
        for (i, ev) in self.eigenvalues.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, fmt_sig(*ev)));
        }
        out
    }
}

/// Symmetric eigendecomposition with eigenpairs sorted by ascending
/// eigenvalue. The input is symmetrized explicitly first to guard against
/// floating accumulation asymmetry.
pub(crate) fn sorted_symmetric_eigen(values: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let sym = (values + values.transpose()) * 0.5;
    let eigen = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(Error::EigensolverFailure)?;
    let n = eigen.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[a]
            .total_cmp(&eigen.eigenvalues[b])
            .then(a.cmp(&b))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eigen.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        eigenvectors.set_column(col, &eigen.eigenvectors.column(i));
    }
    Ok((eigenvalues, eigenvectors))
}

/// All eigenvalues of the Laplacian, sorted non-decreasingly. Tiny negative
/// values within the scale-aware tolerance `1e-8 * max(1, λ_max)` are clamped
/// to 0.
pub fn spectrum(lap: &Laplacian) -> Result<Spectrum> {
    let (mut eigenvalues, _) = sorted_symmetric_eigen(lap.values())?;
    let lambda_max = eigenvalues.last().copied().unwrap_or(0.0);
    let tol = 1e-8 * lambda_max.max(1.0);
    for ev in &mut eigenvalues {
        if *ev < 0.0 && *ev >= -tol {
            *ev = 0.0;
        }
    }
    Ok(Spectrum {
        kind: lap.kind(),
        eigenvalues,
    })
}
