//! End-to-end feature construction over an in-memory email selection.

use crate::corpus::RawEmail;
use crate::error::{Error, Result};
use crate::features::{self, FeatureDataset, PrimaryRow};
use crate::lexer::{self, TokenStream};
use crate::par;
use crate::significance::{self, FilterParams, SignificanceTable};
use crate::vocab::{self, Stage, StopWords, VocabStage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineParams {
    pub filter: FilterParams,
    pub seed: u64,
}

/// Counts reported by a build. Serialized as `key=value` lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineStats {
    pub emails: usize,
    pub emails_without_header_terminator: usize,
    pub empty_emails: usize,
    pub initial_words: usize,
    pub stop_filtered_words: usize,
    pub basic_filtered_words: usize,
    pub first_freq_words: usize,
    pub second_freq_words: usize,
    pub avg_top_appearances: usize,
    pub ones_budget: usize,
    pub features_primary: usize,
    pub features_secondary: usize,
}

impl PipelineStats {
    pub fn features_total(&self) -> usize {
        self.features_primary + self.features_secondary
    }

    pub fn key_values(&self) -> Vec<(&'static str, usize)> {
        vec![
            ("emails", self.emails),
            ("emails_without_header_terminator", self.emails_without_header_terminator),
            ("empty_emails", self.empty_emails),
            ("initial_words", self.initial_words),
            ("stop_filtered_words", self.stop_filtered_words),
            ("basic_filtered_words", self.basic_filtered_words),
            ("first_freq_words", self.first_freq_words),
            ("second_freq_words", self.second_freq_words),
            ("avg_top_appearances", self.avg_top_appearances),
            ("primary_ones_upper_bound", self.ones_budget),
            ("features_total", self.features_total()),
            ("features_primary", self.features_primary),
            ("features_secondary", self.features_secondary),
        ]
    }

    pub fn to_text(&self) -> String {
        self.key_values()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    /// Parses [`to_text`](Self::to_text) output. Unknown keys are ignored;
    /// missing keys stay zero.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = PipelineStats::default();
        for (i, line) in text.lines().enumerate() {
            let Some((key, value)) = line.split_once('=') else {
                continue;
            };
            let slot = match key.trim() {
                "emails" => &mut s.emails,
                "emails_without_header_terminator" => &mut s.emails_without_header_terminator,
                "empty_emails" => &mut s.empty_emails,
                "initial_words" => &mut s.initial_words,
                "stop_filtered_words" => &mut s.stop_filtered_words,
                "basic_filtered_words" => &mut s.basic_filtered_words,
                "first_freq_words" => &mut s.first_freq_words,
                "second_freq_words" => &mut s.second_freq_words,
                "avg_top_appearances" => &mut s.avg_top_appearances,
                "primary_ones_upper_bound" => &mut s.ones_budget,
                "features_primary" => &mut s.features_primary,
                "features_secondary" => &mut s.features_secondary,
                _ => continue,
            };
            *slot = value.trim().parse().map_err(|_| {
                Error::Config(format!("stats line {}: bad value {:?}", i + 1, value.trim()))
            })?;
        }
        Ok(s)
    }
}

#[derive(Debug, Clone)]
pub struct Stages {
    pub initial: VocabStage,
    pub stop_filtered: VocabStage,
    pub basic_filtered: VocabStage,
    pub first_freq: VocabStage,
    pub second_freq: VocabStage,
}

impl Stages {
    pub fn get(&self, stage: Stage) -> &VocabStage {
        match stage {
            Stage::Initial => &self.initial,
            Stage::StopFiltered => &self.stop_filtered,
            Stage::BasicFiltered => &self.basic_filtered,
            Stage::FirstFreq => &self.first_freq,
            Stage::SecondFreq => &self.second_freq,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub streams: Vec<TokenStream>,
    pub stages: Stages,
    /// Rankings over the basic-filtered words, one per email.
    pub tables: Vec<SignificanceTable>,
    /// `tables` restricted to second-frequency words.
    pub restricted: Vec<SignificanceTable>,
    /// Scrambled dataset. Primary dimension `i` is `stages.second_freq.words()[i]`.
    pub dataset: FeatureDataset,
    pub stats: PipelineStats,
    pub warnings: Vec<String>,
}

pub fn lex_all(emails: &[RawEmail]) -> (Vec<TokenStream>, usize) {
    let lexed = par::map(emails, |e| lexer::lex_lines(e.email_id, &e.lines));
    let missing = lexed.iter().filter(|(_, has)| !has).count();
    (lexed.into_iter().map(|(s, _)| s).collect(), missing)
}

pub fn build_features(emails: &[RawEmail], stop: &StopWords, params: &PipelineParams) -> Result<BuildOutput> {
    params.filter.validate()?;
    if emails.is_empty() {
        return Err(Error::Config("no emails selected".into()));
    }
    for (i, e) in emails.iter().enumerate() {
        if e.email_id != i {
            return Err(Error::Internal(format!(
                "email ids must follow selection order, found id {} at position {i}",
                e.email_id
            )));
        }
    }
    let mut warnings = Vec::new();

    let (streams, without_terminator) = lex_all(emails);
    if without_terminator > 0 {
        warnings.push(format!(
            "{without_terminator} emails have no x-filename: line and were lexed whole"
        ));
    }
    let empty = streams.iter().filter(|s| s.tokens.is_empty()).count();
    if empty > 0 {
        warnings.push(format!("{empty} emails produced no words"));
    }

    let initial = vocab::build_initial_vocab(&streams);
    let stop_filtered = vocab::filter_stop_words(&initial, stop);
    let basic_filtered = vocab::lexical_filter(&stop_filtered);

    let counts = par::map(&streams, |s| vocab::count_terms(s, &initial))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let n = emails.len();
    let top_k = params.filter.top_k;
    let tables = par::map(&counts, |c| {
        significance::significance_table(c, &basic_filtered, n, top_k)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let first_freq = significance::first_frequency_filter(&basic_filtered, &params.filter);
    let second_freq = significance::second_frequency_filter(&first_freq, &tables, &params.filter);
    if second_freq.is_empty() {
        return Err(Error::Config(
            "no word passes both frequency filters; lower --min-doc-count or --min-top-appearances".into(),
        ));
    }
    let restricted = significance::restrict_to_second_freq(&tables, &second_freq);

    let avg_top = features::mean_top_appearances(&restricted)?;
    let ones_budget = features::compute_ones_budget(&restricted)?;
    let primary: Vec<PrimaryRow> = par::map(&restricted, |t| {
        features::build_primary_row(t, &second_freq, ones_budget)
    })
    .into_iter()
    .zip(emails)
    .map(|(indices, e)| PrimaryRow {
        email_id: e.email_id,
        label: e.label_number,
        indices,
    })
    .collect();
    let unscrambled = features::pad_with_secondary(primary, ones_budget, second_freq.len())?;
    let dataset = features::scramble(unscrambled, params.seed);
    if let Err((pos, msg)) = dataset.validate() {
        return Err(Error::Internal(format!("built dataset row {pos}: {msg}")));
    }

    let stats = PipelineStats {
        emails: n,
        emails_without_header_terminator: without_terminator,
        empty_emails: empty,
        initial_words: initial.len(),
        stop_filtered_words: stop_filtered.len(),
        basic_filtered_words: basic_filtered.len(),
        first_freq_words: first_freq.len(),
        second_freq_words: second_freq.len(),
        avg_top_appearances: avg_top,
        ones_budget,
        features_primary: dataset.n_primary,
        features_secondary: dataset.n_secondary,
    };

    Ok(BuildOutput {
        streams,
        stages: Stages {
            initial,
            stop_filtered,
            basic_filtered,
            first_freq,
            second_freq,
        },
        tables,
        restricted,
        dataset,
        stats,
        warnings,
    })
}
