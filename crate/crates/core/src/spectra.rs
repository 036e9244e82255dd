//! Spectral functions and the matching dissimilarities.
//!
//! A spectrum of size `n` becomes a piecewise-linear function on `[0, 1]`:
//! eigenvalue `λ_i` (1-based, non-decreasing) sits at `x = (n - i) / (n - 1)`,
//! so the largest eigenvalue lands at `x = 0` and the smallest at `x = 1`.
//! Eigenvalues are rescaled per method:
//!
//! - `clrl`: `λ_i / λ_n` (combinatorial spectrum, relative to the largest);
//! - `clssal`: `λ_i / n` (combinatorial spectrum, sample-size adjusted);
//! - `clmxl`: same rescaling as `clssal`, compared only at `x = 0`;
//! - `nll`: `λ_i` unchanged (normalized spectrum, already bounded by 2).
//!
//! The dissimilarity between two functions is the exact integral of their
//! absolute difference over `[0, 1]`, except for `clmxl`, which returns
//! `|F1(0) - F2(0)|`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laplacian::{LaplacianKind, Spectrum};
use crate::util::fmt_sig;

/// The four spectrum-matching methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchMethod {
    Clrl,
    Clssal,
    Clmxl,
    Nll,
}

impl MatchMethod {
    pub const ALL: [MatchMethod; 4] = [
        MatchMethod::Clrl,
        MatchMethod::Clssal,
        MatchMethod::Clmxl,
        MatchMethod::Nll,
    ];

    /// Which Laplacian the method reads its spectrum from.
    pub fn laplacian_kind(self) -> LaplacianKind {
        match self {
            MatchMethod::Clrl | MatchMethod::Clssal | MatchMethod::Clmxl => {
                LaplacianKind::Combinatorial
            }
            MatchMethod::Nll => LaplacianKind::Normalized,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MatchMethod::Clrl => "clrl",
            MatchMethod::Clssal => "clssal",
            MatchMethod::Clmxl => "clmxl",
            MatchMethod::Nll => "nll",
        }
    }
}

impl fmt::Display for MatchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clrl" => Ok(MatchMethod::Clrl),
            "clssal" => Ok(MatchMethod::Clssal),
            "clmxl" => Ok(MatchMethod::Clmxl),
            "nll" => Ok(MatchMethod::Nll),
            other => Err(Error::InvalidParameter(format!(
                "unknown match method {other:?} (expected clrl|clssal|clmxl|nll)"
            ))),
        }
    }
}

/// Piecewise-linear function on `[0, 1]` produced from a spectrum.
///
/// Knots are strictly increasing with first knot 0 and last knot 1; values
/// are non-increasing in x because eigenvalues are non-decreasing in i.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    method: MatchMethod,
    source_n: usize,
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl SpectralFunction {
    /// Reassemble a function from stored parts (model deserialization).
    pub fn from_parts(
        method: MatchMethod,
        source_n: usize,
        knots: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::ModelFormat(format!(
                "need matching knot/value arrays of length >= 2, got {} and {}",
                knots.len(),
                values.len()
            )));
        }
        if knots[0] != 0.0 || *knots.last().unwrap() != 1.0 {
            return Err(Error::ModelFormat("knots must start at 0 and end at 1".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ModelFormat("knots must be strictly increasing".into()));
        }
        Ok(Self {
            method,
            source_n,
            knots,
            values,
        })
    }

    pub fn method(&self) -> MatchMethod {
        self.method
    }

    pub fn source_n(&self) -> usize {
        self.source_n
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Evaluate by linear interpolation between adjacent knots; exact at
    /// knots.
    pub fn evaluate_at(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::DomainError { x });
        }
        // partition_point returns the first index with knot > x; the segment
        // is [idx-1, idx]. x == 0 gives idx == 0 and is knot-exact.
        let idx = self.knots.partition_point(|&k| k <= x);
        if idx == 0 {
            return Ok(self.values[0]);
        }
        if idx == self.knots.len() {
            return Ok(*self.values.last().unwrap());
        }
        let (xl, xr) = (self.knots[idx - 1], self.knots[idx]);
        if x == xl {
            return Ok(self.values[idx - 1]);
        }
        let (vl, vr) = (self.values[idx - 1], self.values[idx]);
        let w = xr - xl;
        Ok(vl * (xr - x) / w + vr * (x - xl) / w)
    }
}

/// Transform a spectrum into its spectral function under `method`.
///
/// A `clrl` request on an all-zero spectrum yields the zero function (the
/// `λ_i / λ_n` limit is ill-defined there; the zero function keeps an empty
/// graph maximally distant from structured ones).
pub fn build_spectral_function(spectrum: &Spectrum, method: MatchMethod) -> Result<SpectralFunction> {
    let n = spectrum.n();
    if n < 2 {
        return Err(Error::DegenerateSpectrum { n });
    }
    let expected = method.laplacian_kind();
    if spectrum.kind() != expected {
        return Err(Error::SpectrumKindMismatch {
            method,
            expected,
            actual: spectrum.kind(),
        });
    }
    let eigenvalues = spectrum.eigenvalues();
    let lambda_max = *eigenvalues.last().unwrap();
    let scale = |ev: f64| match method {
        MatchMethod::Clrl => {
            if lambda_max > 0.0 {
                ev / lambda_max
            } else {
                0.0
            }
        }
        MatchMethod::Clssal | MatchMethod::Clmxl => ev / n as f64,
        MatchMethod::Nll => ev,
    };
    // j-th knot (ascending x) carries eigenvalue index i = n - j (1-based).
    let denom = (n - 1) as f64;
    let knots: Vec<f64> = (0..n).map(|j| j as f64 / denom).collect();
    let values: Vec<f64> = (0..n).map(|j| scale(eigenvalues[n - 1 - j])).collect();
    Ok(SpectralFunction {
        method,
        source_n: n,
        knots,
        values,
    })
}

/// Method-specific dissimilarity between two spectral functions.
///
/// For `clmxl` this is `|F1(0) - F2(0)|`; otherwise the exact integral of
/// `|F1 - F2|` over `[0, 1]`, computed on the merged knot set with each
/// sign change split at its root before integrating trapezoids.
pub fn spectral_distance(
    f1: &SpectralFunction,
    f2: &SpectralFunction,
    method: MatchMethod,
) -> Result<f64> {
    for f in [f1, f2] {
        if f.method != method {
            return Err(Error::MethodMismatch {
                left: f.method,
                right: method,
            });
        }
    }
    if method == MatchMethod::Clmxl {
        return Ok((f1.values[0] - f2.values[0]).abs());
    }
    l1_distance(f1, f2)
}

/// Exact L1 distance between two piecewise-linear functions on `[0, 1]`.
fn l1_distance(f1: &SpectralFunction, f2: &SpectralFunction) -> Result<f64> {
    // Merge the two sorted knot lists, deduplicating exact equals.
    let mut merged = Vec::with_capacity(f1.knots.len() + f2.knots.len());
    let (mut i, mut j) = (0, 0);
    while i < f1.knots.len() || j < f2.knots.len() {
        let next = match (f1.knots.get(i), f2.knots.get(j)) {
            (Some(&a), Some(&b)) => {
                if a <= b {
                    i += 1;
                    if a == b {
                        j += 1;
                    }
                    a
                } else {
                    j += 1;
                    b
                }
            }
            (Some(&a), None) => {
                i += 1;
                a
            }
            (None, Some(&b)) => {
                j += 1;
                b
            }
            (None, None) => unreachable!(),
        };
        if merged.last() != Some(&next) {
            merged.push(next);
        }
    }

    let mut area = 0.0;
    let mut da = f1.evaluate_at(merged[0])? - f2.evaluate_at(merged[0])?;
    for w in merged.windows(2) {
        let (a, b) = (w[0], w[1]);
        let db = f1.evaluate_at(b)? - f2.evaluate_at(b)?;
        let width = b - a;
        if da * db < 0.0 {
            // The difference is linear on [a, b]; split at its root and sum
            // the two triangles.
            let root = a + da * width / (da - db);
            area += da.abs() * (root - a) / 2.0 + db.abs() * (b - root) / 2.0;
        } else {
            area += (da.abs() + db.abs()) / 2.0 * width;
        }
        da = db;
    }
    Ok(area)
}

impl SpectralFunction {
    /// CSV export: a metadata comment line, a header, then `x,value` rows
    /// over the knot set.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# method={} source_n={}\n", self.method, self.source_n);
        out.push_str("x,value\n");
        for (x, v) in self.knots.iter().zip(&self.values) {
            out.push_str(&format!("{},{}\n", fmt_sig(*x), fmt_sig(*v)));
        }
        out
    }
}
