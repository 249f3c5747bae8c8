use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use meeeftcd::corpus::{self, LabelSet};
use meeeftcd::io::{self, LabelColumn, MappingHints};
use meeeftcd::pipeline::{self, PipelineParams, PipelineStats};
use meeeftcd::{knn, FilterParams, Stage, StopWords};

use crate::{BuildArgs, Command, EvalArgs, ImportArgs, InspectArgs, InspectStage, LabelColumnArg};

pub const DATASET_FILE: &str = "dataset.txt";
pub const PERMUTATION_FILE: &str = "permutation.txt";
pub const STATS_FILE: &str = "build_stats.txt";
pub const SELECTION_FILE: &str = "selection.tsv";
pub const TOKENS_FILE: &str = "tokens.tsv";
pub const RANKINGS_FILE: &str = "rankings.tsv";

/// Bad flags or missing inputs detected by the CLI itself; exits with 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Build(args) => {
            let threads = args.threads;
            with_threads(threads, || build(&args).map(|_| ()))
        }
        Command::Eval(args) => with_threads(args.threads, || eval(&args)),
        Command::All { build: args, k } => with_threads(args.threads, || {
            let dataset = build(&args)?;
            eval(&EvalArgs {
                dataset,
                out: args.out.clone(),
                k,
                stats: None,
                threads: args.threads,
            })
        }),
        Command::Inspect(args) => inspect(&args),
        Command::Import(args) => import(&args),
    }
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("starting worker threads")?;
    pool.install(f)
}

fn build(args: &BuildArgs) -> Result<PathBuf> {
    let labels = match &args.labels {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read label file {}: {e}", p.display())))?;
            LabelSet::parse(&text, args.emails_per_label)?
        }
        None => LabelSet::default().with_emails_per_label(args.emails_per_label),
    };
    let stop = match &args.stopwords {
        Some(p) => StopWords::parse(
            &fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read stop-word file {}: {e}", p.display())))?,
        ),
        None => StopWords::default(),
    };
    let params = PipelineParams {
        filter: FilterParams {
            min_doc_count: args.min_doc_count,
            top_k: args.top_k,
            min_top_appearances: args.min_top_appearances,
        },
        seed: args.seed,
    };

    let selection = corpus::select_emails(&args.corpus, &labels)?;
    for w in &selection.warnings {
        eprintln!("warning: {w}");
    }
    for (label, folder) in &selection.chosen_folders {
        eprintln!("label {label}: {}", folder.display());
    }
    eprintln!("selected {} emails", selection.emails.len());

    let output = pipeline::build_features(&selection.emails, &stop, &params)?;
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }

    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output directory {}", args.out.display()))?;
    let out = &args.out;

    let mut sel = String::from("email_id\tlabel\tpath\n");
    for e in &selection.emails {
        let rel = e.source_path.strip_prefix(&args.corpus).unwrap_or(&e.source_path);
        let _ = writeln!(sel, "{}\t{}\t{}", e.email_id, e.label_number, rel.display());
    }
    io::write_atomic(&out.join(SELECTION_FILE), sel.as_bytes())?;

    let mut tokens = String::new();
    for s in &output.streams {
        let _ = writeln!(tokens, "{}\t{}", s.email_id, s.tokens.join(" "));
    }
    io::write_atomic(&out.join(TOKENS_FILE), tokens.as_bytes())?;

    for stage in Stage::ALL {
        let path = out.join(format!("vocab_{stage}.tsv"));
        io::write_atomic(&path, output.stages.get(stage).manifest().as_bytes())?;
    }

    let mut ranks = String::from("email_id\trank\tword\tsignificance\n");
    for t in &output.tables {
        for (word, s) in t.top_words() {
            let _ = writeln!(ranks, "{}\t{}\t{word}\t{:.12}", t.email_id, s.rank, s.significance);
        }
    }
    io::write_atomic(&out.join(RANKINGS_FILE), ranks.as_bytes())?;

    let mut perm = String::new();
    for p in &output.dataset.permutation {
        let _ = writeln!(perm, "{p}");
    }
    io::write_atomic(&out.join(PERMUTATION_FILE), perm.as_bytes())?;
    io::write_atomic(&out.join(STATS_FILE), output.stats.to_text().as_bytes())?;

    let dataset_path = out.join(DATASET_FILE);
    io::write_dataset(&output.dataset, &dataset_path)?;

    for (k, v) in output.stats.key_values() {
        eprintln!("{k}={v}");
    }
    eprintln!("wrote {}", dataset_path.display());
    Ok(dataset_path)
}

fn eval(args: &EvalArgs) -> Result<()> {
    let dataset = io::read_dataset(&args.dataset)?;
    let stats_path = args.stats.clone().or_else(|| {
        let sibling = args.dataset.with_file_name(STATS_FILE);
        sibling.exists().then_some(sibling)
    });
    let stats = match stats_path {
        Some(p) => {
            let text = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
            Some(PipelineStats::parse(&text)?)
        }
        None => None,
    };

    let report = knn::evaluate(&dataset, args.k)?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output directory {}", args.out.display()))?;
    io::write_report(&report, stats.as_ref(), &args.out)?;
    io::render_heatmap(&report.percentages(), &args.out.join(io::HEATMAP_FILE))?;
    eprint!("{}", io::report_text(&report, stats.as_ref()));
    Ok(())
}

fn parse_email_id(target: Option<&str>) -> Result<usize> {
    let t = target.ok_or_else(|| usage("this stage needs an email id"))?;
    t.parse()
        .map_err(|_| usage(format!("expected an email id, got {t:?}")))
}

fn read_out_file(dir: &Path, name: &str) -> Result<String> {
    let path = dir.join(name);
    fs::read_to_string(&path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn inspect(args: &InspectArgs) -> Result<()> {
    let target = args.target.as_deref();
    let text = match args.stage {
        InspectStage::Tokens => {
            let id = parse_email_id(target)?;
            let tokens = read_out_file(&args.out, TOKENS_FILE)?;
            let line = tokens
                .lines()
                .find(|l| l.split('\t').next() == Some(&id.to_string()))
                .ok_or_else(|| usage(format!("no email {id}")))?;
            let words = line.split_once('\t').map(|(_, w)| w).unwrap_or("");
            words
                .split(' ')
                .filter(|w| !w.is_empty())
                .map(|w| format!("{w}\n"))
                .collect()
        }
        InspectStage::Vocab => {
            let stage: Stage = target
                .ok_or_else(|| usage("vocab needs a stage name"))?
                .parse()?;
            read_out_file(&args.out, &format!("vocab_{stage}.tsv"))?
        }
        InspectStage::Ranks => {
            let id = parse_email_id(target)?.to_string();
            let ranks = read_out_file(&args.out, RANKINGS_FILE)?;
            ranks
                .lines()
                .skip(1)
                .filter(|l| l.split('\t').next() == Some(id.as_str()))
                .map(|l| format!("{}\n", l.split_once('\t').map(|(_, r)| r).unwrap_or("")))
                .collect()
        }
        InspectStage::Row => {
            let id = parse_email_id(target)?;
            let dataset = io::read_dataset(&args.out.join(DATASET_FILE))?;
            let vocab = read_out_file(&args.out, &format!("vocab_{}.tsv", Stage::SecondFreq))?;
            let words: Vec<&str> = vocab.lines().map(|l| l.split('\t').next().unwrap_or("")).collect();
            let (pos, row) = dataset
                .rows
                .iter()
                .enumerate()
                .find(|(_, r)| r.email_id == id)
                .ok_or_else(|| usage(format!("no email {id}")))?;
            let m = dataset.n_primary;
            let mut s = format!(
                "email_id={} label={} position={pos} primary={} secondary={}\n",
                row.email_id,
                row.label,
                row.primary_count(m),
                row.indices.len() - row.primary_count(m)
            );
            for &i in &row.indices {
                match words.get(i as usize).filter(|_| (i as usize) < m) {
                    Some(w) => s.push_str(&format!("{i}\t{w}\n")),
                    None => s.push_str(&format!("{i}\t(secondary)\n")),
                }
            }
            s
        }
        InspectStage::Stats => read_out_file(&args.out, STATS_FILE)?,
    };
    print!("{text}");
    Ok(())
}

fn import(args: &ImportArgs) -> Result<()> {
    let hints = MappingHints {
        label_column: match args.label_column {
            LabelColumnArg::First => LabelColumn::First,
            LabelColumnArg::Last => LabelColumn::Last,
        },
        index_base: args.index_base,
        n_primary: args.primary,
        labels_file: args.labels_file.clone(),
        expect: Some((2400, 48557, 40)),
    };
    let imported = io::import_published(&args.published, &hints)?;
    eprintln!("layout: {}", imported.layout);
    for n in &imported.notes {
        eprintln!("note: {n}");
    }
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output directory {}", args.out.display()))?;
    let path = args.out.join(DATASET_FILE);
    io::write_dataset(&imported.dataset, &path)?;
    let d = &imported.dataset;
    eprintln!(
        "rows={} primary={} secondary={} ones={}",
        d.len(),
        d.n_primary,
        d.n_secondary,
        d.ones_budget
    );
    eprintln!("wrote {}", path.display());
    Ok(())
}
