//! Staged vocabularies and per-email term counts.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lexer::TokenStream;

const DEFAULT_STOP_WORDS: &str = include_str!("../data/stopwords.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Initial,
    StopFiltered,
    BasicFiltered,
    FirstFreq,
    SecondFreq,
}

impl Stage {
    pub const ALL: [Stage; 5] = [
        Stage::Initial,
        Stage::StopFiltered,
        Stage::BasicFiltered,
        Stage::FirstFreq,
        Stage::SecondFreq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Initial => "initial",
            Stage::StopFiltered => "stop_filtered",
            Stage::BasicFiltered => "basic_filtered",
            Stage::FirstFreq => "first_freq",
            Stage::SecondFreq => "second_freq",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Stage::ALL.iter().map(|st| st.name()).collect();
                Error::Usage(format!("unknown stage {s:?}, expected one of {}", names.join(", ")))
            })
    }
}

/// A sorted word list with document frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabStage {
    pub stage: Stage,
    words: Vec<String>,
    doc_frequency: Vec<u32>,
}

impl VocabStage {
    pub fn empty(stage: Stage) -> Self {
        VocabStage {
            stage,
            words: Vec::new(),
            doc_frequency: Vec::new(),
        }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn position(&self, word: &str) -> Option<usize> {
        self.words
            .binary_search_by(|w| w.as_str().cmp(word))
            .ok()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.position(word).is_some()
    }

    pub fn doc_frequency(&self, word: &str) -> Option<u32> {
        self.position(word).map(|i| self.doc_frequency[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.words
            .iter()
            .map(String::as_str)
            .zip(self.doc_frequency.iter().copied())
    }

    /// Keeps words satisfying `keep`, relabelled as `stage`.
    pub fn retain(&self, stage: Stage, mut keep: impl FnMut(&str, u32) -> bool) -> VocabStage {
        let mut out = VocabStage::empty(stage);
        for (w, df) in self.iter() {
            if keep(w, df) {
                out.words.push(w.to_string());
                out.doc_frequency.push(df);
            }
        }
        out
    }

    /// `word<TAB>doc_frequency` lines.
    pub fn manifest(&self) -> String {
        let mut out = String::new();
        for (w, df) in self.iter() {
            out.push_str(w);
            out.push('\t');
            out.push_str(&df.to_string());
            out.push('\n');
        }
        out
    }
}

/// Distinct tokens across all streams, byte-wise sorted, with the number of
/// streams containing each.
pub fn build_initial_vocab(streams: &[TokenStream]) -> VocabStage {
    let mut df: BTreeMap<&str, u32> = BTreeMap::new();
    for stream in streams {
        let distinct: BTreeSet<&str> = stream.tokens.iter().map(String::as_str).collect();
        for w in distinct {
            *df.entry(w).or_insert(0) += 1;
        }
    }
    VocabStage {
        stage: Stage::Initial,
        words: df.keys().map(|w| w.to_string()).collect(),
        doc_frequency: df.values().copied().collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmailTermCounts {
    pub email_id: usize,
    /// Occurrences of each word present in the email.
    pub counts: BTreeMap<String, u32>,
    /// Sum of all counts: the term-frequency denominator.
    pub total_initial_occurrences: u64,
}

impl EmailTermCounts {
    pub fn count(&self, word: &str) -> u32 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    /// Normalized per-email frequency, `None` for an empty email.
    pub fn normalized_frequency(&self, word: &str) -> Option<f64> {
        (self.total_initial_occurrences > 0)
            .then(|| self.count(word) as f64 / self.total_initial_occurrences as f64)
    }
}

pub fn count_terms(stream: &TokenStream, vocab: &VocabStage) -> Result<EmailTermCounts> {
    let mut counts: BTreeMap<String, u32> = BTreeMap::new();
    for t in &stream.tokens {
        if let Some(c) = counts.get_mut(t.as_str()) {
            *c += 1;
        } else {
            if !vocab.contains(t) {
                return Err(Error::Internal(format!(
                    "token {t:?} of email {} missing from the {} vocabulary",
                    stream.email_id, vocab.stage
                )));
            }
            counts.insert(t.clone(), 1);
        }
    }
    Ok(EmailTermCounts {
        email_id: stream.email_id,
        counts,
        total_initial_occurrences: stream.tokens.len() as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWords(HashSet<String>);

impl Default for StopWords {
    fn default() -> Self {
        StopWords::parse(DEFAULT_STOP_WORDS)
    }
}

impl StopWords {
    /// One word per line; `#` starts a comment line. Words are lowercased.
    pub fn parse(text: &str) -> Self {
        StopWords(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn filter_stop_words(stage: &VocabStage, stop: &StopWords) -> VocabStage {
    stage.retain(Stage::StopFiltered, |w, _| !stop.contains(w))
}

/// Rejects single-character words and words containing a digit, `-`, `@`
/// or `&`.
pub fn passes_lexical_filter(word: &str) -> bool {
    let mut chars = word.chars();
    if chars.next().is_none() || chars.next().is_none() {
        return false;
    }
    !word
        .chars()
        .any(|c| c.is_ascii_digit() || matches!(c, '-' | '@' | '&'))
}

pub fn lexical_filter(stage: &VocabStage) -> VocabStage {
    stage.retain(Stage::BasicFiltered, |w, _| passes_lexical_filter(w))
}
