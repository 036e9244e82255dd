//! `spectromerge` - incremental spectral clustering of document corpora by
//! Laplacian eigenvalue spectra.
//!
//! Every stage of the pipeline is an independent subcommand so partial runs
//! can be inspected and reproduced; all randomness is controlled by explicit
//! `--seed` flags and outputs are written atomically.

mod plot;

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use spectromerge::clustering::spectral_cluster;
use spectromerge::corpus::{
    cosine_similarity_matrix, parse_jsonl, to_jsonl, Document, SimilarityMatrix, TermVector,
    TokenizerConfig, Weighting,
};
use spectromerge::evaluation::{
    generate_synthetic_corpus, run_stability_experiment, GroupSpec, StabilityReport, SyntheticSpec,
};
use spectromerge::incremental::{
    assign_cluster, assignment_distances, incremental_cluster_with_model, split_batches,
    ClusterModel, IncrementalConfig,
};
use spectromerge::laplacian::{combinatorial_laplacian, normalized_laplacian, spectrum};
use spectromerge::spectra::{build_spectral_function, MatchMethod};

#[derive(Parser)]
#[command(
    name = "spectromerge",
    version,
    about = "Incremental spectral clustering of document corpora by Laplacian eigenvalue spectra"
)]
struct Cli {
    /// Worker thread count; outputs are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Clrl,
    Clssal,
    Clmxl,
    Nll,
}

impl From<MethodArg> for MatchMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Clrl => MatchMethod::Clrl,
            MethodArg::Clssal => MatchMethod::Clssal,
            MethodArg::Clmxl => MatchMethod::Clmxl,
            MethodArg::Nll => MatchMethod::Nll,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LaplacianArg {
    Combinatorial,
    Normalized,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightingArg {
    Tf,
    TfIdf,
}

impl From<WeightingArg> for Weighting {
    fn from(w: WeightingArg) -> Self {
        match w {
            WeightingArg::Tf => Weighting::Tf,
            WeightingArg::TfIdf => Weighting::TfIdf,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupingArg {
    /// Cluster the portion with normalized spectral clustering.
    Spectral,
    /// Group by the external `label` field (sorted label order gives the
    /// cluster ids).
    Labels,
}

/// Corpus reading options shared by every subcommand that ingests JSONL.
#[derive(Args)]
struct CorpusArgs {
    /// Drop documents with fewer tokens than this.
    #[arg(long, default_value_t = 10)]
    min_tokens: usize,

    /// Drop tokens shorter than this many characters.
    #[arg(long, default_value_t = 2)]
    min_token_len: usize,

    /// Stopword file, one lowercase word per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,

    /// Term weighting for similarity matrices.
    #[arg(long, value_enum, default_value_t = WeightingArg::Tf)]
    weighting: WeightingArg,
}

impl CorpusArgs {
    fn tokenizer(&self) -> Result<TokenizerConfig> {
        let stopwords: BTreeSet<String> = match &self.stopwords {
            Some(path) => fs::read_to_string(path)
                .with_context(|| format!("reading stopwords {}", path.display()))?
                .lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty())
                .collect(),
            None => BTreeSet::new(),
        };
        Ok(TokenizerConfig {
            min_token_len: self.min_token_len,
            stopwords,
        })
    }

    /// Parse, filter, and vectorize a corpus file.
    fn load(&self, path: &Path) -> Result<(Vec<Document>, Vec<TermVector>)> {
        let raw = fs::read_to_string(path)
            .with_context(|| format!("reading corpus {}", path.display()))?;
        let docs = parse_jsonl(&raw, &self.tokenizer()?)?;
        let prepared = spectromerge::corpus::prepare(docs, self.min_tokens, self.weighting.into())?;
        Ok(prepared)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Filter a raw JSONL corpus and optionally export its similarity matrix.
    Ingest {
        /// Input corpus (JSON Lines with id, text, optional label).
        #[arg(long)]
        input: PathBuf,
        /// Filtered corpus output (JSON Lines).
        #[arg(long)]
        out: PathBuf,
        /// Also write the cosine similarity matrix as CSV.
        #[arg(long)]
        similarity_out: Option<PathBuf>,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Randomly split a corpus into batches of approximately equal size.
    Split {
        #[arg(long)]
        input: PathBuf,
        /// Number of batches.
        #[arg(long)]
        batches: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output files are written as `<prefix>-<i>.jsonl`.
        #[arg(long)]
        out_prefix: String,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Spectrally cluster one batch and write `doc_id,cluster` CSV.
    ClusterBatch {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Export the Laplacian eigenvalue spectrum of a corpus.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = LaplacianArg::Combinatorial)]
        laplacian: LaplacianArg,
        /// Eigenvalue CSV output (`index,eigenvalue`).
        #[arg(long)]
        out: PathBuf,
        /// Also write the spectral function for this matching method.
        #[arg(long, value_enum, requires = "function_out")]
        method: Option<MethodArg>,
        /// Spectral function CSV output (`x,value`).
        #[arg(long, requires = "method")]
        function_out: Option<PathBuf>,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Build a reference cluster model from a training portion.
    Train {
        #[arg(long)]
        input: PathBuf,
        /// Cluster count (ignored with `--grouping labels`).
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GroupingArg::Spectral)]
        grouping: GroupingArg,
        /// Model output (JSON).
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Assign a new document cluster to the closest model reference.
    Match {
        /// Documents of the new cluster (JSON Lines).
        #[arg(long)]
        input: PathBuf,
        /// Model file written by `train` or `pipeline`.
        #[arg(long)]
        model: PathBuf,
        /// Optional JSON report with the chosen cluster and all distances.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Full incremental run: split, cluster batches, merge by spectra.
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        batches: usize,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Merged clustering CSV output.
        #[arg(long)]
        out: PathBuf,
        /// Batch-0 reference model output; defaults to `<out>.model.json`
        /// next to the clustering CSV.
        #[arg(long)]
        model_out: Option<PathBuf>,
        /// Match each batch's clusters one-to-one against the references.
        #[arg(long)]
        bijective: bool,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Stability experiment: train on one portion, classify subsamples of
    /// another, report the confusion matrix.
    Evaluate {
        /// Training portion (labeled JSON Lines).
        #[arg(long)]
        train: PathBuf,
        /// Test pool (labeled JSON Lines).
        #[arg(long)]
        test: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0.5)]
        fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Confusion matrix CSV output; written to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional JSON report (config echo, counts, metrics).
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Generate a synthetic labeled corpus.
    Generate {
        /// Number of groups; labels are gr1..grN.
        #[arg(long, default_value_t = 3)]
        groups: usize,
        #[arg(long, default_value_t = 500)]
        docs_per_group: usize,
        /// Comma-separated exclusive vocabulary sizes, one per group.
        #[arg(long, value_delimiter = ',', default_value = "50,150,400")]
        exclusive_vocab: Vec<usize>,
        /// Size of the vocabulary pool shared by all groups.
        #[arg(long, default_value_t = 100)]
        shared_vocab: usize,
        /// Fraction of each group's token mass drawn from the shared pool.
        #[arg(long, default_value_t = 0.1)]
        overlap: f64,
        #[arg(long, default_value_t = 20)]
        tokens_min: usize,
        #[arg(long, default_value_t = 40)]
        tokens_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corpus output (JSON Lines).
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a cluster model's spectral functions as an SVG line chart.
    Plot {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 640)]
        width: u32,
        #[arg(long, default_value_t = 480)]
        height: u32,
    },
}

/// Write a file atomically: temp file in the target directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn similarity_from(vectors: &[TermVector]) -> Result<SimilarityMatrix> {
    Ok(cosine_similarity_matrix(vectors)?)
}

/// Group documents by sorted label; every group must support a spectrum.
fn label_groups(docs: &[Document]) -> Result<Vec<(String, Vec<Document>)>> {
    let labels: BTreeSet<String> = docs.iter().filter_map(|d| d.label.clone()).collect();
    if labels.is_empty() {
        bail!("no labeled documents in the training portion");
    }
    let mut groups = Vec::new();
    for label in labels {
        let members: Vec<Document> = docs
            .iter()
            .filter(|d| d.label.as_deref() == Some(label.as_str()))
            .cloned()
            .collect();
        if members.len() < 2 {
            bail!("label {label:?} has {} document(s); need at least 2", members.len());
        }
        groups.push((label, members));
    }
    Ok(groups)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest {
            input,
            out,
            similarity_out,
            corpus,
        } => {
            let (docs, vectors) = corpus.load(&input)?;
            write_atomic(&out, &to_jsonl(&docs))?;
            if let Some(path) = similarity_out {
                let sim = similarity_from(&vectors)?;
                write_atomic(&path, &sim.to_csv())?;
            }
        }
        Command::Split {
            input,
            batches,
            seed,
            out_prefix,
            corpus,
        } => {
            eprintln!("run: split batches={batches} seed={seed}");
            let (docs, _) = corpus.load(&input)?;
            let parts = split_batches(&docs, batches, seed)?;
            for (i, part) in parts.iter().enumerate() {
                write_atomic(Path::new(&format!("{out_prefix}-{i}.jsonl")), &to_jsonl(part))?;
            }
        }
        Command::ClusterBatch {
            input,
            k,
            seed,
            out,
            corpus,
        } => {
            eprintln!("run: cluster-batch k={k} seed={seed}");
            let (docs, vectors) = corpus.load(&input)?;
            let sim = similarity_from(&vectors)?;
            let clustering = spectral_cluster(&sim, k, seed)?;
            let ids: Vec<String> = docs.iter().map(|d| d.id.clone()).collect();
            write_atomic(&out, &clustering.to_csv(&ids))?;
        }
        Command::Spectrum {
            input,
            laplacian,
            out,
            method,
            function_out,
            corpus,
        } => {
            let (_, vectors) = corpus.load(&input)?;
            let sim = similarity_from(&vectors)?;
            let lap = match laplacian {
                LaplacianArg::Combinatorial => combinatorial_laplacian(&sim),
                LaplacianArg::Normalized => normalized_laplacian(&sim),
            };
            let spec = spectrum(&lap)?;
            write_atomic(&out, &spec.to_csv())?;
            if let (Some(method), Some(path)) = (method, function_out) {
                let f = build_spectral_function(&spec, method.into())?;
                write_atomic(&path, &f.to_csv())?;
            }
        }
        Command::Train {
            input,
            k,
            method,
            seed,
            grouping,
            out,
            corpus,
        } => {
            eprintln!("run: train k={k} method={} seed={seed}", MatchMethod::from(method));
            let (docs, vectors) = corpus.load(&input)?;
            let matrices = match grouping {
                GroupingArg::Labels => {
                    let groups = label_groups(&docs)?;
                    for (c, (label, members)) in groups.iter().enumerate() {
                        eprintln!("cluster {c} <- label {label:?} ({} documents)", members.len());
                    }
                    groups
                        .iter()
                        .map(|(_, members)| {
                            let vs = spectromerge::corpus::build_term_vectors(
                                members,
                                corpus.weighting.into(),
                            )?;
                            Ok(cosine_similarity_matrix(&vs)?)
                        })
                        .collect::<Result<Vec<_>>>()?
                }
                GroupingArg::Spectral => {
                    let sim = similarity_from(&vectors)?;
                    let clustering = spectral_cluster(&sim, k, seed)?;
                    (0..k)
                        .map(|c| {
                            let members = clustering.members(c);
                            if members.len() < 2 {
                                bail!("cluster {c} has {} document(s); cannot build a reference", members.len());
                            }
                            Ok(sim.submatrix(&members))
                        })
                        .collect::<Result<Vec<_>>>()?
                }
            };
            let model = ClusterModel::from_similarity_matrices(&matrices, method.into())?;
            write_atomic(&out, &model.to_json_string())?;
        }
        Command::Match {
            input,
            model,
            out,
            corpus,
        } => {
            let (_, vectors) = corpus.load(&input)?;
            let sim = similarity_from(&vectors)?;
            let model_text = fs::read_to_string(&model)
                .with_context(|| format!("reading model {}", model.display()))?;
            let model = ClusterModel::from_json_str(&model_text)?;
            let distances = assignment_distances(&sim, &model)?;
            let cluster = assign_cluster(&sim, &model)?;
            println!("cluster={cluster}");
            for (c, d) in distances.iter().enumerate() {
                println!("distance[{c}]={d:.12e}");
            }
            if let Some(path) = out {
                let report = serde_json::json!({
                    "method": model.method().as_str(),
                    "cluster": cluster,
                    "distances": distances,
                });
                write_atomic(&path, &format!("{:#}\n", report))?;
            }
        }
        Command::Pipeline {
            input,
            k,
            batches,
            method,
            seed,
            out,
            model_out,
            bijective,
            corpus,
        } => {
            eprintln!(
                "run: pipeline k={k} batches={batches} method={} seed={seed} bijective={bijective}",
                MatchMethod::from(method)
            );
            let (docs, _) = corpus.load(&input)?;
            let (merged, model) = incremental_cluster_with_model(
                &docs,
                IncrementalConfig {
                    k,
                    m_plus_1: batches,
                    method: method.into(),
                    seed,
                    bijective,
                },
            )?;
            write_atomic(&out, &merged.to_csv())?;
            let model_path =
                model_out.unwrap_or_else(|| out.with_extension("model.json"));
            write_atomic(&model_path, &model.to_json_string())?;
        }
        Command::Evaluate {
            train,
            test,
            method,
            trials,
            fraction,
            seed,
            out,
            report,
            corpus,
        } => {
            eprintln!(
                "run: evaluate method={} trials={trials} fraction={fraction} seed={seed}",
                MatchMethod::from(method)
            );
            let (train_docs, _) = corpus.load(&train)?;
            let (test_docs, _) = corpus.load(&test)?;
            let cm = run_stability_experiment(
                &train_docs,
                &test_docs,
                method.into(),
                trials,
                fraction,
                seed,
            )?;
            match out {
                Some(path) => write_atomic(&path, &cm.to_csv())?,
                None => print!("{}", cm.to_csv()),
            }
            if let Some(path) = report {
                let report =
                    StabilityReport::from_experiment(&cm, method.into(), fraction, trials, seed);
                write_atomic(&path, &report.to_json_string())?;
            }
        }
        Command::Generate {
            groups,
            docs_per_group,
            exclusive_vocab,
            shared_vocab,
            overlap,
            tokens_min,
            tokens_max,
            seed,
            out,
        } => {
            if exclusive_vocab.len() != groups {
                bail!(
                    "--exclusive-vocab lists {} size(s) for {} group(s)",
                    exclusive_vocab.len(),
                    groups
                );
            }
            if tokens_min > tokens_max {
                bail!("--tokens-min {tokens_min} exceeds --tokens-max {tokens_max}");
            }
            eprintln!("run: generate groups={groups} docs_per_group={docs_per_group} overlap={overlap} seed={seed}");
            let spec = SyntheticSpec {
                shared_vocab,
                seed,
                groups: (0..groups)
                    .map(|g| GroupSpec {
                        label: format!("gr{}", g + 1),
                        exclusive_vocab: exclusive_vocab[g],
                        overlap,
                        docs: docs_per_group,
                        tokens_min,
                        tokens_max,
                    })
                    .collect(),
            };
            let docs = generate_synthetic_corpus(&spec);
            write_atomic(&out, &to_jsonl(&docs))?;
        }
        Command::Plot {
            model,
            out,
            width,
            height,
        } => {
            let model_text = fs::read_to_string(&model)
                .with_context(|| format!("reading model {}", model.display()))?;
            let model = ClusterModel::from_json_str(&model_text)?;
            write_atomic(&out, &plot::render_model_svg(&model, width, height))?;
        }
    }
    Ok(())
}

fn main() {
    // Clap exits with code 2 on malformed flags before we get here.
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
