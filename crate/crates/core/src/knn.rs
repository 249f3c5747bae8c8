//! Leave-one-out k-nearest-neighbour majority voting under cosine distance,
//! plus the per-label feature statistics reported next to it.

use crate::cosine::{binary_index_distance, shared_count};
use crate::error::{Error, Result};
use crate::features::FeatureDataset;
use crate::par;

pub const DEFAULT_K: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    /// Population (divide-by-n) standard deviation.
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Option<MeanStd> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Some(MeanStd { mean, std: var.sqrt() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalStats {
    pub primary: MeanStd,
    pub mean_secondary: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelStats {
    pub label: usize,
    pub emails: usize,
    pub primary: MeanStd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub k: usize,
    pub n_rows: usize,
    pub n_primary: usize,
    pub n_secondary: usize,
    pub ones_budget: usize,
    /// `confusion[true][predicted]` counts.
    pub confusion: Vec<Vec<u64>>,
    /// Predicted label for each row, in dataset order.
    pub predictions: Vec<usize>,
    pub per_label: Vec<LabelStats>,
    pub global: GlobalStats,
}

impl EvalReport {
    pub fn correct(&self) -> u64 {
        (0..self.confusion.len()).map(|i| self.confusion[i][i]).sum()
    }

    pub fn accuracy(&self) -> f64 {
        self.correct() as f64 / self.n_rows as f64
    }

    /// Cell count as a percentage of all rows.
    pub fn percent(&self, actual: usize, predicted: usize) -> f64 {
        self.confusion[actual][predicted] as f64 * 100.0 / self.n_rows as f64
    }

    pub fn percentages(&self) -> Vec<Vec<f64>> {
        (0..self.confusion.len())
            .map(|i| (0..self.confusion.len()).map(|j| self.percent(i, j)).collect())
            .collect()
    }
}

fn check_k(n_rows: usize, k: usize) -> Result<()> {
    if k == 0 || k + 1 > n_rows {
        return Err(Error::Usage(format!(
            "k must be between 1 and {} for {n_rows} rows, got {k}",
            n_rows.saturating_sub(1)
        )));
    }
    Ok(())
}

/// Predicts the label of row `query` from its `k` nearest other rows.
///
/// Neighbours are ordered by distance, then by row position. The vote goes
/// to the most frequent label; ties go to the label whose neighbours have
/// the smallest summed distance, then to the smallest label number.
///
/// When every row has the query's popcount `c`, distance is `1 - shared/c`
/// and both orderings are done on integer shared counts, so equal sums are
/// never split by rounding.
pub fn knn_predict(dataset: &FeatureDataset, query: usize, k: usize) -> Result<usize> {
    let n = dataset.rows.len();
    check_k(n, k)?;
    if query >= n {
        return Err(Error::Usage(format!("row {query} out of range for {n} rows")));
    }
    let q = &dataset.rows[query].indices;
    let uniform = dataset.rows.iter().all(|r| r.indices.len() == q.len());
    let mut neighbours = Vec::with_capacity(n - 1);
    for (pos, row) in dataset.rows.iter().enumerate() {
        if pos != query {
            let d = binary_index_distance(q, &row.indices)?;
            neighbours.push((d, shared_count(q, &row.indices), pos));
        }
    }
    let nearer = |a: &(f64, usize, usize), b: &(f64, usize, usize)| {
        let by_distance = if uniform { b.1.cmp(&a.1) } else { a.0.total_cmp(&b.0) };
        by_distance.then(a.2.cmp(&b.2))
    };
    if k < neighbours.len() {
        neighbours.select_nth_unstable_by(k - 1, nearer);
        neighbours.truncate(k);
    }

    let n_labels = dataset.n_labels();
    let mut votes = vec![0usize; n_labels];
    let mut summed = vec![0.0f64; n_labels];
    let mut summed_shared = vec![0usize; n_labels];
    for &(d, shared, pos) in &neighbours {
        let label = dataset.rows[pos].label;
        votes[label] += 1;
        summed[label] += d;
        summed_shared[label] += shared;
    }
    let closer = |a: usize, b: usize| {
        if uniform {
            summed_shared[b].cmp(&summed_shared[a])
        } else {
            summed[a].total_cmp(&summed[b])
        }
    };
    let best = (0..n_labels)
        .filter(|&l| votes[l] > 0)
        .min_by(|&a, &b| votes[b].cmp(&votes[a]).then(closer(a, b)).then(a.cmp(&b)))
        .expect("k >= 1 neighbours");
    Ok(best)
}

pub fn compute_global_stats(dataset: &FeatureDataset) -> Result<GlobalStats> {
    if dataset.rows.is_empty() {
        return Err(Error::Usage("statistics of an empty dataset".into()));
    }
    let m = dataset.n_primary;
    let primary: Vec<f64> = dataset.rows.iter().map(|r| r.primary_count(m) as f64).collect();
    let secondary: Vec<f64> = dataset
        .rows
        .iter()
        .map(|r| (r.indices.len() - r.primary_count(m)) as f64)
        .collect();
    Ok(GlobalStats {
        primary: MeanStd::of(&primary).expect("non-empty"),
        mean_secondary: MeanStd::of(&secondary).expect("non-empty").mean,
    })
}

/// Primary-ones mean and std for every label that has at least one row.
pub fn per_label_stats(dataset: &FeatureDataset) -> Vec<LabelStats> {
    let m = dataset.n_primary;
    (0..dataset.n_labels())
        .filter_map(|label| {
            let counts: Vec<f64> = dataset
                .rows
                .iter()
                .filter(|r| r.label == label)
                .map(|r| r.primary_count(m) as f64)
                .collect();
            MeanStd::of(&counts).map(|primary| LabelStats {
                label,
                emails: counts.len(),
                primary,
            })
        })
        .collect()
}

pub fn evaluate(dataset: &FeatureDataset, k: usize) -> Result<EvalReport> {
    let n = dataset.rows.len();
    if n < 2 {
        return Err(Error::Usage(format!("evaluation needs at least 2 rows, got {n}")));
    }
    check_k(n, k)?;
    let positions: Vec<usize> = (0..n).collect();
    let predictions = par::map(&positions, |&q| knn_predict(dataset, q, k))
        .into_iter()
        .collect::<Result<Vec<usize>>>()?;

    let n_labels = dataset.n_labels();
    let mut confusion = vec![vec![0u64; n_labels]; n_labels];
    for (row, &pred) in dataset.rows.iter().zip(&predictions) {
        confusion[row.label][pred] += 1;
    }
    Ok(EvalReport {
        k,
        n_rows: n,
        n_primary: dataset.n_primary,
        n_secondary: dataset.n_secondary,
        ones_budget: dataset.ones_budget,
        confusion,
        predictions,
        per_label: per_label_stats(dataset),
        global: compute_global_stats(dataset)?,
    })
}
