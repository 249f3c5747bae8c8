//! Fixed-popcount binary features.
//!
//! Every email gets exactly `ones_budget` ones. Primary dimensions (one per
//! second-frequency word) are shared by all emails; each email is then padded
//! with secondary dimensions that no other email uses, so padding changes the
//! norm but never the overlap between two emails.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::rng;
use crate::significance::SignificanceTable;
use crate::vocab::VocabStage;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureRow {
    pub email_id: usize,
    pub label: usize,
    /// Strictly increasing nonzero dimensions.
    pub indices: Vec<u32>,
}

impl FeatureRow {
    pub fn primary_count(&self, n_primary: usize) -> usize {
        self.indices.partition_point(|&i| (i as usize) < n_primary)
    }

    pub fn primary_indices(&self, n_primary: usize) -> &[u32] {
        &self.indices[..self.primary_count(n_primary)]
    }

    pub fn secondary_indices(&self, n_primary: usize) -> &[u32] {
        &self.indices[self.primary_count(n_primary)..]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureDataset {
    pub n_primary: usize,
    pub n_secondary: usize,
    pub ones_budget: usize,
    pub seed: u64,
    pub rows: Vec<FeatureRow>,
    /// `permutation[p]` is the pre-scramble position of the row now at `p`.
    pub permutation: Vec<usize>,
}

impl FeatureDataset {
    pub fn n_total(&self) -> usize {
        self.n_primary + self.n_secondary
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_labels(&self) -> usize {
        self.rows.iter().map(|r| r.label + 1).max().unwrap_or(0)
    }

    /// Checks every structural invariant, reporting the first violation with
    /// the offending row position.
    pub fn validate(&self) -> std::result::Result<(), (usize, String)> {
        let total = self.n_total();
        let mut seen_secondary = HashSet::new();
        let mut padding = 0usize;
        for (pos, row) in self.rows.iter().enumerate() {
            if row.indices.len() != self.ones_budget {
                return Err((
                    pos,
                    format!(
                        "row has {} nonzeros, expected {}",
                        row.indices.len(),
                        self.ones_budget
                    ),
                ));
            }
            if row.indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err((pos, "indices are not strictly increasing".into()));
            }
            if let Some(&last) = row.indices.last() {
                if last as usize >= total {
                    return Err((pos, format!("index {last} out of range for {total} dimensions")));
                }
            }
            for &s in row.secondary_indices(self.n_primary) {
                if !seen_secondary.insert(s) {
                    return Err((pos, format!("secondary index {s} used by more than one row")));
                }
            }
            padding += self.ones_budget - row.primary_count(self.n_primary);
        }
        if padding != self.n_secondary {
            return Err((
                self.rows.len(),
                format!(
                    "secondary dimension count {} does not match total padding {padding}",
                    self.n_secondary
                ),
            ));
        }
        if self.permutation.len() != self.rows.len() {
            return Err((self.rows.len(), "permutation length does not match row count".into()));
        }
        Ok(())
    }
}

/// Mean number of ranked words per restricted table, truncated.
pub fn mean_top_appearances(restricted: &[SignificanceTable]) -> Result<usize> {
    if restricted.is_empty() {
        return Err(Error::Config("cannot size features for an empty corpus".into()));
    }
    let total: usize = restricted.iter().map(SignificanceTable::ranked_count).sum();
    Ok(total / restricted.len())
}

/// Twice [`mean_top_appearances`].
pub fn compute_ones_budget(restricted: &[SignificanceTable]) -> Result<usize> {
    let avg = mean_top_appearances(restricted)?;
    if avg == 0 {
        return Err(Error::Config(
            "average number of ranked primary words per email truncates to 0; \
             the corpus is too small or the filters too strict"
                .into(),
        ));
    }
    Ok(2 * avg)
}

/// Primary dimensions of one email: its ranked second-frequency words,
/// capped to the `ones_budget` best ranks.
pub fn build_primary_row(restricted: &SignificanceTable, second: &VocabStage, ones_budget: usize) -> Vec<u32> {
    // Entries iterate in word order, so a stable sort on rank keeps
    // lexicographic order among equal ranks.
    let mut candidates: Vec<(i32, u32)> = restricted
        .entries
        .iter()
        .filter(|(_, s)| s.is_ranked())
        .filter_map(|(w, s)| second.position(w).map(|p| (s.rank, p as u32)))
        .collect();
    candidates.sort_by_key(|(rank, _)| *rank);
    candidates.truncate(ones_budget);
    let mut row: Vec<u32> = candidates.into_iter().map(|(_, p)| p).collect();
    row.sort_unstable();
    row
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryRow {
    pub email_id: usize,
    pub label: usize,
    pub indices: Vec<u32>,
}

/// Pads each row, in order, with fresh secondary dimensions numbered from
/// `n_primary` upward.
pub fn pad_with_secondary(primary: Vec<PrimaryRow>, ones_budget: usize, n_primary: usize) -> Result<FeatureDataset> {
    let mut next = n_primary;
    let mut rows = Vec::with_capacity(primary.len());
    for p in primary {
        if p.indices.len() > ones_budget {
            return Err(Error::Internal(format!(
                "email {} has {} primary ones, more than the budget {ones_budget}",
                p.email_id,
                p.indices.len()
            )));
        }
        if p.indices.iter().any(|&i| i as usize >= n_primary) {
            return Err(Error::Internal(format!(
                "email {} has a primary index outside [0, {n_primary})",
                p.email_id
            )));
        }
        let pad = ones_budget - p.indices.len();
        let mut indices = p.indices;
        indices.extend((next..next + pad).map(|i| i as u32));
        next += pad;
        rows.push(FeatureRow {
            email_id: p.email_id,
            label: p.label,
            indices,
        });
    }
    let n = rows.len();
    Ok(FeatureDataset {
        n_primary,
        n_secondary: next - n_primary,
        ones_budget,
        seed: 0,
        rows,
        permutation: (0..n).collect(),
    })
}

/// Reorders rows with a seeded Fisher-Yates shuffle. Row contents and
/// dimension assignments are untouched.
pub fn scramble(mut dataset: FeatureDataset, seed: u64) -> FeatureDataset {
    let mut order: Vec<usize> = (0..dataset.rows.len()).collect();
    rng::shuffle(&mut order, seed);
    let mut old: Vec<Option<FeatureRow>> = dataset.rows.into_iter().map(Some).collect();
    dataset.rows = order
        .iter()
        .map(|&i| old[i].take().expect("permutation visits each row once"))
        .collect();
    dataset.permutation = order.iter().map(|&i| dataset.permutation[i]).collect();
    dataset.seed = seed;
    dataset
}

/// Restores pre-scramble order.
pub fn unscramble(dataset: &FeatureDataset) -> Vec<FeatureRow> {
    let mut rows: Vec<Option<&FeatureRow>> = vec![None; dataset.rows.len()];
    for (pos, &orig) in dataset.permutation.iter().enumerate() {
        rows[orig] = Some(&dataset.rows[pos]);
    }
    rows.into_iter().flatten().cloned().collect()
}
