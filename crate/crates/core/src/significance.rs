//! Per-email TF-IDF significance, top-k ranking and the two frequency
//! filters that narrow the basic-filtered vocabulary to the primary words.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::vocab::{EmailTermCounts, Stage, VocabStage};

/// Rank given to words outside an email's top-k.
pub const UNRANKED: i32 = -1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterParams {
    /// Minimum number of emails a word must appear in.
    pub min_doc_count: u32,
    /// Size of each email's ranking window.
    pub top_k: usize,
    /// Minimum number of emails whose top-k must contain a word.
    pub min_top_appearances: u32,
}

impl Default for FilterParams {
    fn default() -> Self {
        FilterParams {
            min_doc_count: 10,
            top_k: 100,
            min_top_appearances: 51,
        }
    }
}

impl FilterParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_doc_count == 0 || self.top_k == 0 || self.min_top_appearances == 0 {
            return Err(Error::Config(format!(
                "filter parameters must be positive, got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scored {
    pub significance: f64,
    /// 1-based rank within the email's top-k, or [`UNRANKED`].
    pub rank: i32,
}

impl Scored {
    pub fn is_ranked(&self) -> bool {
        self.rank != UNRANKED
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceTable {
    pub email_id: usize,
    pub entries: BTreeMap<String, Scored>,
}

impl SignificanceTable {
    pub fn ranked_count(&self) -> usize {
        self.entries.values().filter(|s| s.is_ranked()).count()
    }

    /// Ranked words in rank order.
    pub fn top_words(&self) -> Vec<(&str, Scored)> {
        let mut top: Vec<(&str, Scored)> = self
            .entries
            .iter()
            .filter(|(_, s)| s.is_ranked())
            .map(|(w, s)| (w.as_str(), *s))
            .collect();
        top.sort_by_key(|(_, s)| s.rank);
        top
    }
}

/// `S = (F / total) * ln(N / df)` for every basic-filtered word present in
/// the email. The denominator counts every token of the email, filtered or
/// not. An empty email yields an empty map.
pub fn compute_significance(
    counts: &EmailTermCounts,
    basic: &VocabStage,
    n_emails: usize,
) -> Result<BTreeMap<String, f64>> {
    if n_emails == 0 {
        return Err(Error::Domain("significance needs at least one email".into()));
    }
    let mut out = BTreeMap::new();
    if counts.total_initial_occurrences == 0 {
        return Ok(out);
    }
    let total = counts.total_initial_occurrences as f64;
    for (word, &f) in &counts.counts {
        let Some(df) = basic.doc_frequency(word) else {
            continue;
        };
        if df == 0 {
            return Err(Error::Internal(format!(
                "word {word:?} present in email {} has zero document frequency",
                counts.email_id
            )));
        }
        let idf = (n_emails as f64 / df as f64).ln();
        out.insert(word.clone(), f as f64 / total * idf);
    }
    Ok(out)
}

/// Significance descending, then word ascending.
fn rank_order(a: (&String, &f64), b: (&String, &f64)) -> Ordering {
    b.1.total_cmp(a.1).then_with(|| a.0.cmp(b.0))
}

pub fn rank_top_words(significances: &BTreeMap<String, f64>, top_k: usize) -> BTreeMap<String, i32> {
    let mut order: Vec<(&String, &f64)> = significances.iter().collect();
    order.sort_by(|a, b| rank_order(*a, *b));
    order
        .into_iter()
        .enumerate()
        .map(|(i, (w, _))| {
            let rank = if i < top_k { i as i32 + 1 } else { UNRANKED };
            (w.clone(), rank)
        })
        .collect()
}

pub fn significance_table(
    counts: &EmailTermCounts,
    basic: &VocabStage,
    n_emails: usize,
    top_k: usize,
) -> Result<SignificanceTable> {
    let sig = compute_significance(counts, basic, n_emails)?;
    let ranks = rank_top_words(&sig, top_k);
    let entries = sig
        .into_iter()
        .map(|(w, significance)| {
            let rank = ranks[&w];
            (w, Scored { significance, rank })
        })
        .collect();
    Ok(SignificanceTable {
        email_id: counts.email_id,
        entries,
    })
}

pub fn first_frequency_filter(basic: &VocabStage, params: &FilterParams) -> VocabStage {
    basic.retain(Stage::FirstFreq, |_, df| df >= params.min_doc_count)
}

/// Number of tables in which each word is ranked.
pub fn top_appearances(tables: &[SignificanceTable]) -> BTreeMap<&str, u32> {
    let mut hits: BTreeMap<&str, u32> = BTreeMap::new();
    for t in tables {
        for (w, s) in &t.entries {
            if s.is_ranked() {
                *hits.entry(w.as_str()).or_insert(0) += 1;
            }
        }
    }
    hits
}

/// Keeps first-frequency words ranked in at least `min_top_appearances`
/// emails. Ranks must come from the full basic-filtered population.
pub fn second_frequency_filter(
    first: &VocabStage,
    tables: &[SignificanceTable],
    params: &FilterParams,
) -> VocabStage {
    let hits = top_appearances(tables);
    first.retain(Stage::SecondFreq, |w, _| {
        hits.get(w).copied().unwrap_or(0) >= params.min_top_appearances
    })
}

/// Drops every entry outside `second`; ranks are kept as computed.
pub fn restrict_to_second_freq(
    tables: &[SignificanceTable],
    second: &VocabStage,
) -> Vec<SignificanceTable> {
    tables
        .iter()
        .map(|t| SignificanceTable {
            email_id: t.email_id,
            entries: t
                .entries
                .iter()
                .filter(|(w, _)| second.contains(w))
                .map(|(w, s)| (w.clone(), *s))
                .collect(),
        })
        .collect()
}
