//! Browser bindings. Each exported function takes plain numbers or text and
//! returns a JSON string; failures come back as `{"error": "..."}`.

use meeeftcd::corpus::RawEmail;
use meeeftcd::cosine::{binary_index_distance, cosine_distance, SparseBinaryVector};
use meeeftcd::rng::SplitMix64;
use meeeftcd::vocab::passes_lexical_filter;
use meeeftcd::{io, knn, lexer};
use meeeftcd::{build_features, FilterParams, PipelineParams, StopWords};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn to_json<T: Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

#[derive(Debug, Serialize, PartialEq)]
pub struct LexedToken {
    pub token: String,
    /// Last vocabulary stage the word survives to.
    pub stage: &'static str,
}

#[derive(Debug, Serialize)]
pub struct LexPreview {
    pub has_terminator: bool,
    pub tokens: Vec<LexedToken>,
    pub kept: usize,
}

pub fn lex_preview_inner(text: &str) -> LexPreview {
    let lines: Vec<&str> = text.lines().collect();
    let (stream, has_terminator) = lexer::lex_lines(0, &lines);
    let stop = StopWords::default();
    let tokens: Vec<LexedToken> = stream
        .tokens
        .into_iter()
        .map(|token| {
            let stage = if stop.contains(&token) {
                "initial"
            } else if !passes_lexical_filter(&token) {
                "stop_filtered"
            } else {
                "basic_filtered"
            };
            LexedToken { token, stage }
        })
        .collect();
    let kept = tokens.iter().filter(|t| t.stage == "basic_filtered").count();
    LexPreview {
        has_terminator,
        tokens,
        kept,
    }
}

/// Tokens of a raw email and how far each gets through the word filters.
#[wasm_bindgen]
pub fn lex_preview(text: &str) -> String {
    to_json(Ok(lex_preview_inner(text)))
}

#[derive(Debug, Serialize)]
pub struct CosineCount {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub dimension: usize,
    pub dense: f64,
    pub binary: f64,
    pub counted: f64,
}

pub fn cosine_counter_inner(c: usize, shared: usize, seed: u64) -> Result<CosineCount, String> {
    if c == 0 || c > 256 {
        return Err(format!("popcount must be in 1..=256, got {c}"));
    }
    if shared > c {
        return Err(format!("shared ones ({shared}) cannot exceed popcount ({c})"));
    }
    let dimension = 2 * c - shared + c;
    let mut dims: Vec<u32> = (0..dimension as u32).collect();
    meeeftcd::rng::shuffle(&mut dims, seed);
    let common = &dims[..shared];
    let mut a: Vec<u32> = common.iter().chain(&dims[shared..c]).copied().collect();
    let mut b: Vec<u32> = common.iter().chain(&dims[c..2 * c - shared]).copied().collect();
    a.sort_unstable();
    b.sort_unstable();
    let va = SparseBinaryVector::new(a.clone(), dimension).map_err(|e| e.to_string())?;
    let vb = SparseBinaryVector::new(b.clone(), dimension).map_err(|e| e.to_string())?;
    Ok(CosineCount {
        dense: cosine_distance(&va.to_dense(), &vb.to_dense()).map_err(|e| e.to_string())?,
        binary: binary_index_distance(&a, &b).map_err(|e| e.to_string())?,
        counted: 1.0 - shared as f64 / c as f64,
        a,
        b,
        dimension,
    })
}

/// Two random vectors with popcount `c` sharing `shared` ones, and their
/// cosine distance computed three ways.
#[wasm_bindgen]
pub fn cosine_counter(c: usize, shared: usize, seed: u64) -> String {
    to_json(cosine_counter_inner(c, shared, seed))
}

const TOPICS: [&[&str]; 6] = [
    &["gas", "pipeline", "capacity", "pressure", "storage", "transport", "meter", "flow", "compressor", "valve"],
    &["contract", "counsel", "clause", "agreement", "litigation", "signature", "draft", "liability", "review", "legal"],
    &["resume", "candidate", "interview", "position", "hiring", "salary", "recruiter", "experience", "reference", "offer"],
    &["campus", "student", "professor", "university", "recruiting", "career", "graduate", "school", "faculty", "semester"],
    &["trade", "option", "price", "volatility", "curve", "hedge", "position", "spread", "market", "settlement"],
    &["meeting", "agenda", "conference", "room", "calendar", "schedule", "minutes", "attendees", "presentation", "call"],
];

const BACKGROUND: [&str; 16] = [
    "enron", "please", "thanks", "attached", "week", "update", "team", "group", "information", "question",
    "houston", "office", "project", "regards", "today", "follow",
];

const FILLER: [&str; 8] = ["the", "and", "to", "of", "we", "for", "is", "will"];

fn pick<'a>(rng: &mut SplitMix64, words: &[&'a str]) -> &'a str {
    words[rng.below(words.len() as u64) as usize]
}

/// Synthetic labelled mailboxes: topic words, shared office words and
/// stop words, behind a minimal header.
pub fn synthetic_corpus(seed: u64, labels: usize, per_label: usize) -> Vec<RawEmail> {
    let mut rng = SplitMix64::new(seed);
    let mut emails = Vec::with_capacity(labels * per_label);
    for (label, topic) in TOPICS.iter().enumerate().take(labels) {
        for _ in 0..per_label {
            let id = emails.len();
            let n = 15 + rng.below(45) as usize;
            let mut body = Vec::with_capacity(n);
            for _ in 0..n {
                let w = match rng.below(10) {
                    0..=3 => pick(&mut rng, topic),
                    4 => {
                        let other = rng.below(labels as u64) as usize;
                        pick(&mut rng, TOPICS[other])
                    }
                    5..=6 => pick(&mut rng, &BACKGROUND),
                    _ => pick(&mut rng, &FILLER),
                };
                body.push(w);
            }
            let text = format!(
                "From: user{id}@enron.com\nSubject: {}\nX-FileName: user.nsf\n{}\n",
                pick(&mut rng, topic),
                body.join(" ")
            );
            emails.push(RawEmail::from_bytes(id, label, format!("{label}/{id}").into(), text.as_bytes()));
        }
    }
    emails
}

#[derive(Debug, Serialize)]
pub struct Simulation {
    pub stats: Vec<(&'static str, usize)>,
    pub primary_words: Vec<String>,
    pub accuracy: f64,
    pub confusion_percent: Vec<Vec<f64>>,
    pub report: String,
    pub heatmap_svg: String,
}

pub struct SimulationParams {
    pub seed: u64,
    pub labels: usize,
    pub per_label: usize,
    pub filter: FilterParams,
    pub k: usize,
}

pub fn simulate_inner(p: &SimulationParams) -> Result<Simulation, String> {
    if !(2..=TOPICS.len()).contains(&p.labels) {
        return Err(format!("labels must be in 2..={}", TOPICS.len()));
    }
    if !(2..=200).contains(&p.per_label) {
        return Err("emails per label must be in 2..=200".into());
    }
    let emails = synthetic_corpus(p.seed, p.labels, p.per_label);
    let params = PipelineParams {
        filter: p.filter,
        seed: p.seed,
    };
    let out = build_features(&emails, &StopWords::default(), &params).map_err(|e| e.to_string())?;
    let report = knn::evaluate(&out.dataset, p.k).map_err(|e| e.to_string())?;
    let percent = report.percentages();
    Ok(Simulation {
        stats: out.stats.key_values(),
        primary_words: out.stages.second_freq.words().to_vec(),
        accuracy: report.accuracy() * 100.0,
        heatmap_svg: io::heatmap_svg(&percent).map_err(|e| e.to_string())?,
        report: io::report_text(&report, Some(&out.stats)),
        confusion_percent: percent,
    })
}

/// Builds features for a synthetic corpus and evaluates them with
/// leave-one-out KNN.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn simulate(
    seed: u64,
    labels: usize,
    per_label: usize,
    top_k: usize,
    min_doc_count: u32,
    min_top_appearances: u32,
    k: usize,
) -> String {
    to_json(simulate_inner(&SimulationParams {
        seed,
        labels,
        per_label,
        filter: FilterParams {
            min_doc_count,
            top_k,
            min_top_appearances,
        },
        k,
    }))
}
