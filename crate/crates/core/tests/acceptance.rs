//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use spectromerge::clustering::spectral_cluster;
use spectromerge::corpus::{build_term_vectors, cosine_similarity_matrix, SimilarityMatrix, Weighting};
use spectromerge::evaluation::{
    adjusted_rand_index, error_rate, generate_synthetic_corpus, macro_f1, run_stability_experiment,
    three_group_benchmark, ConfusionMatrix,
};
use spectromerge::incremental::{incremental_cluster, IncrementalConfig};
use spectromerge::laplacian::{
    combinatorial_laplacian, normalized_laplacian, spectrum, LaplacianKind, Spectrum,
};
use spectromerge::spectra::{build_spectral_function, spectral_distance, MatchMethod};

fn report(criterion: u32, description: &str, check: impl FnOnce() -> Result<String, String>) {
    match check() {
        Ok(detail) => println!("acceptance {criterion}: PASS - {description} ({detail})"),
        Err(why) => {
            println!("acceptance {criterion}: FAIL - {description}: {why}");
            panic!("acceptance criterion {criterion} failed: {why}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        match $cond {
            true => {}
            false => return Err(format!($($arg)*)),
        }
    };
}

fn check_runtime(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("runtime {elapsed:?} exceeds limit {limit:?}"))
    }
}

fn counts(labels: &[&str], rows: &[[u64; 3]; 3]) -> ConfusionMatrix {
    ConfusionMatrix::from_counts(
        labels.iter().map(|s| s.to_string()).collect(),
        rows.iter().map(|r| r.to_vec()).collect(),
    )
    .unwrap()
}

#[test]
fn criterion_1_metric_regression_against_published_tables() {
    report(1, "error/F1 metrics reproduce all eight published pairs", || {
        let started = Instant::now();
        let classes = ["gr1", "gr2", "gr3"];
        let pseudo = ["pseudo-1", "pseudo-2", "pseudo-3"];
        let cases: [(&str, ConfusionMatrix, f64, f64); 8] = [
            ("classes clrl", counts(&classes, &[[56, 44, 0], [26, 74, 0], [0, 91, 9]]), 53.67, 41.98),
            ("classes clssal", counts(&classes, &[[100, 0, 0], [0, 100, 0], [0, 0, 100]]), 0.0, 100.0),
            ("classes clmxl", counts(&classes, &[[73, 27, 0], [14, 86, 0], [0, 0, 100]]), 13.67, 86.27),
            ("classes nll", counts(&classes, &[[0, 0, 100], [0, 0, 100], [0, 0, 100]]), 66.67, 16.67),
            ("clusters clrl", counts(&pseudo, &[[40, 57, 3], [51, 41, 8], [0, 0, 100]]), 39.67, 59.36),
            ("clusters clssal", counts(&pseudo, &[[36, 64, 0], [84, 16, 0], [0, 0, 100]]), 49.33, 50.17),
            ("clusters clmxl", counts(&pseudo, &[[37, 63, 0], [15, 85, 0], [0, 0, 100]]), 26.0, 72.41),
            ("clusters nll", counts(&pseudo, &[[0, 0, 100], [0, 0, 100], [0, 0, 100]]), 66.67, 16.67),
        ];
        for (name, cm, want_error, want_f1) in &cases {
            let got_error = error_rate(cm);
            let got_f1 = macro_f1(cm);
            ensure!(
                (got_error - want_error).abs() <= 0.05,
                "{name}: error {got_error:.4} differs from {want_error} by more than 0.05"
            );
            ensure!(
                (got_f1 - want_f1).abs() <= 0.05,
                "{name}: F1 {got_f1:.4} differs from {want_f1} by more than 0.05"
            );
        }
        let elapsed = started.elapsed();
        check_runtime(elapsed, Duration::from_secs(1))?;
        Ok(format!("8/8 pairs within ±0.05 in {elapsed:?}"))
    });
}

#[test]
fn criterion_2_synthetic_stability_diagonal() {
    report(2, "clssal stability on synthetic corpus has >= 95% diagonal per class", || {
        let started = Instant::now();
        let train = generate_synthetic_corpus(&three_group_benchmark(0.2, 500, 1001));
        let test_pool = generate_synthetic_corpus(&three_group_benchmark(0.2, 500, 2002));
        let cm = run_stability_experiment(&train, &test_pool, MatchMethod::Clssal, 100, 0.5, 7)
            .map_err(|e| e.to_string())?;
        ensure!(cm.row_sums() == vec![100, 100, 100], "row sums {:?}", cm.row_sums());
        for (c, row) in cm.counts().iter().enumerate() {
            ensure!(
                row[c] >= 95,
                "class {c} diagonal {} < 95 (counts {:?})",
                row[c],
                cm.counts()
            );
        }
        let elapsed = started.elapsed();
        check_runtime(elapsed, Duration::from_secs(120))?;
        let diag: Vec<u64> = (0..3).map(|c| cm.counts()[c][c]).collect();
        Ok(format!("diagonal {diag:?}/100 in {elapsed:?}"))
    });
}

/// Random non-decreasing spectrum with a zero bottom eigenvalue, independent
/// of the library's internals.
fn random_spectrum(method: MatchMethod, rng: &mut ChaCha8Rng) -> Spectrum {
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

#[test]
fn criterion_3_spectral_distance_oracle() {
    report(3, "exact integral agrees with 1e5-point quadrature; clmxl is |F1(0)-F2(0)|", || {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let mut worst: f64 = 0.0;
        for method in [MatchMethod::Clrl, MatchMethod::Clssal, MatchMethod::Nll] {
            for _ in 0..100 {
                let f1 = build_spectral_function(&random_spectrum(method, &mut rng), method)
                    .map_err(|e| e.to_string())?;
                let f2 = build_spectral_function(&random_spectrum(method, &mut rng), method)
                    .map_err(|e| e.to_string())?;
                let exact = spectral_distance(&f1, &f2, method).map_err(|e| e.to_string())?;

                // Trapezoid quadrature with 1e5 uniform samples.
                let samples = 100_000;
                let h = 1.0 / samples as f64;
                let mut approx = 0.0;
                let mut prev = (f1.evaluate_at(0.0).unwrap() - f2.evaluate_at(0.0).unwrap()).abs();
                for i in 1..=samples {
                    let x = (i as f64 * h).min(1.0);
                    let cur = (f1.evaluate_at(x).unwrap() - f2.evaluate_at(x).unwrap()).abs();
                    approx += (prev + cur) / 2.0 * h;
                    prev = cur;
                }
                let err = (exact - approx).abs();
                worst = worst.max(err);
                ensure!(err < 1e-6, "{method}: |{exact} - {approx}| = {err} >= 1e-6");
            }
        }
        for _ in 0..100 {
            let f1 = build_spectral_function(&random_spectrum(MatchMethod::Clmxl, &mut rng), MatchMethod::Clmxl)
                .map_err(|e| e.to_string())?;
            let f2 = build_spectral_function(&random_spectrum(MatchMethod::Clmxl, &mut rng), MatchMethod::Clmxl)
                .map_err(|e| e.to_string())?;
            let d = spectral_distance(&f1, &f2, MatchMethod::Clmxl).map_err(|e| e.to_string())?;
            let expected = (f1.evaluate_at(0.0).unwrap() - f2.evaluate_at(0.0).unwrap()).abs();
            ensure!(d == expected, "clmxl distance {d} != |F1(0)-F2(0)| = {expected}");
        }
        Ok(format!("300 integral pairs (worst gap {worst:.2e}) + 100 clmxl pairs exact"))
    });
}

/// Random symmetric similarity matrix with zero diagonal.
fn random_similarity(n: usize, density: f64, rng: &mut ChaCha8Rng) -> SimilarityMatrix {
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

/// Component count by union-find, independent of the spectral route.
fn component_count(s: &SimilarityMatrix) -> usize {
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

#[test]
fn criterion_4_laplacian_invariants() {
    report(4, "Laplacian invariants over 200 random + 50 block-structured matrices", || {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for case in 0..200 {
            let n = rng.gen_range(2..=60);
            let density = rng.gen_range(0.05..0.9);
            let s = random_similarity(n, density, &mut rng);

            let comb = combinatorial_laplacian(&s);
            for i in 0..n {
                let row_sum: f64 = (0..n).map(|j| comb.values()[(i, j)]).sum();
                ensure!(row_sum.abs() <= 1e-9, "case {case}: row {i} sums to {row_sum}");
            }
            let comb_spec = spectrum(&comb).map_err(|e| e.to_string())?;
            let sum: f64 = comb_spec.eigenvalues().iter().sum();
            let trace: f64 = (0..n).map(|i| comb.values()[(i, i)]).sum();
            ensure!(
                (sum - trace).abs() <= 1e-8 * trace.max(1.0),
                "case {case}: eigenvalue sum {sum} vs trace {trace}"
            );

            let norm_spec = spectrum(&normalized_laplacian(&s)).map_err(|e| e.to_string())?;
            let first = norm_spec.eigenvalues()[0];
            let last = *norm_spec.eigenvalues().last().unwrap();
            ensure!(first >= 0.0, "case {case}: negative normalized eigenvalue {first}");
            ensure!(last <= 2.0 + 1e-8, "case {case}: normalized eigenvalue {last} > 2");
        }

        for case in 0..50 {
            // Block-diagonal matrix with a known number of connected
            // components (dense blocks, possibly isolated singletons).
            let blocks = rng.gen_range(1..=5);
            let mut sizes = Vec::new();
            for _ in 0..blocks {
                sizes.push(rng.gen_range(1..=8usize));
            }
            let n: usize = sizes.iter().sum();
            let mut m = DMatrix::zeros(n, n);
            let mut start = 0;
            for &size in &sizes {
                for i in start..start + size {
                    for j in (i + 1)..start + size {
                        let v = rng.gen_range(0.1..1.0);
                        m[(i, j)] = v;
                        m[(j, i)] = v;
                    }
                }
                start += size;
            }
            let s = SimilarityMatrix::from_matrix(m).unwrap();
            let expected = component_count(&s);
            let spec = spectrum(&combinatorial_laplacian(&s)).map_err(|e| e.to_string())?;
            let lambda_max = spec.eigenvalues().last().copied().unwrap();
            let tol = 1e-8 * lambda_max.max(1.0);
            let zeros = spec.eigenvalues().iter().filter(|&&v| v.abs() <= tol).count();
            ensure!(
                zeros == expected,
                "case {case}: {zeros} zero eigenvalues vs {expected} components (sizes {sizes:?})"
            );
        }
        Ok("200 random + 50 block cases".into())
    });
}

#[test]
fn criterion_5_pseudometric_suite() {
    report(5, "spectral_distance symmetry/identity/triangle on 500 triples per method", || {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for method in MatchMethod::ALL {
            for case in 0..500 {
                let fa = build_spectral_function(&random_spectrum(method, &mut rng), method)
                    .map_err(|e| e.to_string())?;
                let fb = build_spectral_function(&random_spectrum(method, &mut rng), method)
                    .map_err(|e| e.to_string())?;
                let fc = build_spectral_function(&random_spectrum(method, &mut rng), method)
                    .map_err(|e| e.to_string())?;

                let dab = spectral_distance(&fa, &fb, method).map_err(|e| e.to_string())?;
                let dba = spectral_distance(&fb, &fa, method).map_err(|e| e.to_string())?;
                let daa = spectral_distance(&fa, &fa, method).map_err(|e| e.to_string())?;
                let dac = spectral_distance(&fa, &fc, method).map_err(|e| e.to_string())?;
                let dbc = spectral_distance(&fb, &fc, method).map_err(|e| e.to_string())?;

                ensure!(dab >= 0.0, "{method} case {case}: negative distance {dab}");
                ensure!(dab == dba, "{method} case {case}: asymmetry {dab} vs {dba}");
                ensure!(daa == 0.0, "{method} case {case}: self distance {daa}");
                ensure!(
                    dac <= dab + dbc + 1e-12,
                    "{method} case {case}: triangle violated: {dac} > {dab} + {dbc}"
                );
            }
        }
        Ok("2000 triples checked exactly".into())
    });
}

#[test]
fn criterion_6_incremental_vs_full_clustering() {
    report(6, "incremental merge tracks full-set clustering (ARI >= 0.8; single batch identical)", || {
        let started = Instant::now();
        let docs = generate_synthetic_corpus(&three_group_benchmark(0.2, 500, 61));
        let vectors = build_term_vectors(&docs, Weighting::Tf).map_err(|e| e.to_string())?;
        let sim = cosine_similarity_matrix(&vectors).map_err(|e| e.to_string())?;
        let full = spectral_cluster(&sim, 3, 6161).map_err(|e| e.to_string())?;

        let merged = incremental_cluster(
            &docs,
            IncrementalConfig {
                k: 3,
                m_plus_1: 3,
                method: MatchMethod::Clssal,
                seed: 6161,
                bijective: true,
            },
        )
        .map_err(|e| e.to_string())?;
        ensure!(merged.len() == docs.len(), "merged covers {} of {} documents", merged.len(), docs.len());
        let merged_assignment: Vec<usize> = docs
            .iter()
            .map(|d| merged.assignment()[&d.id])
            .collect();
        let ari = adjusted_rand_index(full.assignment(), &merged_assignment);
        ensure!(ari >= 0.8, "ARI {ari:.4} < 0.8");

        let single = incremental_cluster(
            &docs,
            IncrementalConfig {
                k: 3,
                m_plus_1: 1,
                method: MatchMethod::Clssal,
                seed: 6161,
                bijective: false,
            },
        )
        .map_err(|e| e.to_string())?;
        for (i, doc) in docs.iter().enumerate() {
            ensure!(
                single.assignment()[&doc.id] == full.assignment()[i],
                "single-batch run differs from full clustering at {:?}",
                doc.id
            );
        }
        let elapsed = started.elapsed();
        check_runtime(elapsed, Duration::from_secs(120))?;
        Ok(format!("ARI {ari:.4}, single-batch identical, in {elapsed:?}"))
    });
}
