use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Build fixed-popcount binary email features and evaluate them with
/// leave-one-out KNN under cosine distance.
#[derive(Debug, Parser)]
#[command(name = "meeeftcd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Select, lex and featurize a corpus; write the dataset and manifests.
    Build(BuildArgs),
    /// Evaluate a dataset file; write the report, confusion matrices and heatmap.
    Eval(EvalArgs),
    /// `build` followed by `eval` on the produced dataset.
    All {
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long, default_value_t = meeeftcd::knn::DEFAULT_K)]
        k: usize,
    },
    /// Print one stage's output from a build directory.
    Inspect(InspectArgs),
    /// Convert a dataset in a foreign layout to the native format.
    Import(ImportArgs),
}

#[derive(Debug, Args)]
struct BuildArgs {
    /// Corpus root (e.g. the Enron `maildir` directory).
    #[arg(long)]
    corpus: PathBuf,
    /// Label file with `label_name,label_number` lines.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Stop-word file, one word per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = meeeftcd::corpus::DEFAULT_EMAILS_PER_LABEL)]
    emails_per_label: usize,
    #[arg(long, default_value_t = 10)]
    min_doc_count: u32,
    #[arg(long, default_value_t = 100)]
    top_k: usize,
    #[arg(long, default_value_t = 51)]
    min_top_appearances: u32,
    /// Worker threads for parallel stages (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = meeeftcd::knn::DEFAULT_K)]
    k: usize,
    /// Build statistics to merge into the report. Defaults to
    /// `build_stats.txt` next to the dataset when present.
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InspectStage {
    Tokens,
    Vocab,
    Ranks,
    Row,
    Stats,
}

#[derive(Debug, Args)]
struct InspectArgs {
    stage: InspectStage,
    /// Email id for `tokens`, `ranks` and `row`; stage name for `vocab`.
    target: Option<String>,
    /// Build directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LabelColumnArg {
    First,
    Last,
}

#[derive(Debug, Args)]
struct ImportArgs {
    /// Data file or unpacked archive directory.
    #[arg(long)]
    published: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "first")]
    label_column: LabelColumnArg,
    #[arg(long, default_value_t = 0)]
    index_base: u32,
    /// Number of leading shared dimensions; inferred when omitted.
    #[arg(long)]
    primary: Option<usize>,
    /// Labels one per line, when the data file has no label column.
    #[arg(long)]
    labels_file: Option<PathBuf>,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<meeeftcd::Error>() {
        Some(e) if e.is_usage() => 2,
        Some(_) => 1,
        None if err.downcast_ref::<commands::UsageError>().is_some() => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
