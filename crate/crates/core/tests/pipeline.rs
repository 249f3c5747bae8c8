use std::collections::BTreeSet;
use std::path::PathBuf;

use meeeftcd::corpus::RawEmail;
use meeeftcd::features;
use meeeftcd::io;
use meeeftcd::{build_features, FilterParams, PipelineParams, Stage, StopWords};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const WORDS: [&str; 24] = [
    "gas", "power", "trade", "desk", "price", "curve", "resume", "intern", "school", "campus", "meeting",
    "agenda", "budget", "project", "deal", "contract", "the", "and", "x", "a1", "co-op", "at&t", "risk",
    "market",
];

fn corpus(seed: u64, n: usize) -> Vec<RawEmail> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|id| {
            let label = id % 3;
            let body: Vec<&str> = (0..rng.random_range(3..30))
                .map(|_| {
                    let skew = if rng.random_bool(0.5) { label * 7 } else { 0 };
                    WORDS[(skew + rng.random_range(0..10)) % WORDS.len()]
                })
                .collect();
            let text = format!(
                "From: a{id}@enron.com\nSubject: note {id}\nX-FileName: a.nsf\n{}\n",
                body.join(", ")
            );
            RawEmail::from_bytes(id, label, PathBuf::from(id.to_string()), text.as_bytes())
        })
        .collect()
}

fn params() -> PipelineParams {
    PipelineParams {
        filter: FilterParams {
            min_doc_count: 3,
            top_k: 4,
            min_top_appearances: 3,
        },
        seed: 42,
    }
}

#[test]
fn stages_are_nested_and_sorted() {
    let out = build_features(&corpus(1, 40), &StopWords::default(), &params()).unwrap();
    let mut prev: Option<BTreeSet<&str>> = None;
    for stage in Stage::ALL {
        let words = out.stages.get(stage).words();
        assert!(words.windows(2).all(|w| w[0] < w[1]), "{stage} not strictly sorted");
        let set: BTreeSet<&str> = words.iter().map(String::as_str).collect();
        if let Some(p) = &prev {
            assert!(set.is_subset(p), "{stage} is not contained in the previous stage");
        }
        prev = Some(set);
    }
    assert!(!out.stages.stop_filtered.contains("the"));
    assert!(out.stages.stop_filtered.contains("co-op"));
    assert!(!out.stages.basic_filtered.contains("co-op"));
    assert!(!out.stages.basic_filtered.contains("at&t"));
    assert!(!out.stages.basic_filtered.contains("a1"));
}

#[test]
fn doc_frequency_matches_brute_force() {
    let emails = corpus(2, 35);
    let out = build_features(&emails, &StopWords::default(), &params()).unwrap();
    for (word, df) in out.stages.initial.iter() {
        let brute = out.streams.iter().filter(|s| s.tokens.iter().any(|t| t == word)).count();
        assert_eq!(df as usize, brute, "df of {word}");
    }
}

#[test]
fn dataset_counting_identity_holds() {
    let out = build_features(&corpus(3, 60), &StopWords::default(), &params()).unwrap();
    let ds = &out.dataset;
    let m = ds.n_primary;
    let padding: usize = ds.rows.iter().map(|r| ds.ones_budget - r.primary_count(m)).sum();
    assert_eq!(ds.n_secondary, padding);
    assert_eq!(ds.n_total(), m + padding);
    assert_eq!(out.stats.features_primary, out.stages.second_freq.len());
    assert!(ds.rows.iter().all(|r| r.indices.len() == ds.ones_budget));
    assert_eq!(out.stats.ones_budget, 2 * out.stats.avg_top_appearances);

    let restored = features::unscramble(ds);
    assert!(restored.iter().enumerate().all(|(i, r)| r.email_id == i));
}

#[test]
fn dataset_file_round_trip() {
    let out = build_features(&corpus(4, 30), &StopWords::default(), &params()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dataset.txt");
    io::write_dataset(&out.dataset, &path).unwrap();
    let back = io::read_dataset(&path).unwrap();
    assert_eq!(back, out.dataset);
}

#[test]
fn seed_changes_only_row_order() {
    let emails = corpus(5, 30);
    let a = build_features(&emails, &StopWords::default(), &params()).unwrap();
    let mut p = params();
    p.seed = 7;
    let b = build_features(&emails, &StopWords::default(), &p).unwrap();
    assert_ne!(a.dataset.permutation, b.dataset.permutation);
    assert_eq!(features::unscramble(&a.dataset), features::unscramble(&b.dataset));
}
