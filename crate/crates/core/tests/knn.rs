use std::collections::HashSet;

use meeeftcd::cosine::cosine_distance;
use meeeftcd::features::{self, FeatureDataset, PrimaryRow};
use meeeftcd::knn;
use proptest::prelude::*;

fn dataset(rows: Vec<(usize, Vec<u32>)>, m: usize, c: usize, seed: u64) -> FeatureDataset {
    let primary = rows
        .into_iter()
        .enumerate()
        .map(|(email_id, (label, mut indices))| {
            indices.sort_unstable();
            indices.dedup();
            indices.truncate(c);
            PrimaryRow {
                email_id,
                label,
                indices,
            }
        })
        .collect();
    features::scramble(features::pad_with_secondary(primary, c, m).unwrap(), seed)
}

fn rows_strategy() -> impl Strategy<Value = (Vec<(usize, Vec<u32>)>, usize)> {
    (2usize..12, 3usize..50).prop_flat_map(|(c, n)| {
        let row = (0usize..3, prop::collection::vec(0u32..20, 0..=c));
        (prop::collection::vec(row, n), Just(c))
    })
}

/// Full dense distance matrix and a plain vote, with the documented tie rules.
fn dense_oracle(ds: &FeatureDataset, k: usize) -> Vec<usize> {
    let dense: Vec<Vec<f64>> = ds
        .rows
        .iter()
        .map(|r| {
            let mut v = vec![0.0; ds.n_total()];
            for &i in &r.indices {
                v[i as usize] = 1.0;
            }
            v
        })
        .collect();
    let n = ds.rows.len();
    let c = ds.ones_budget as f64;
    (0..n)
        .map(|q| {
            let mut d: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != q)
                .map(|j| {
                    // snap to the nearest multiple of 1/c so equal overlaps compare equal
                    let raw = cosine_distance(&dense[q], &dense[j]).unwrap();
                    ((raw * c).round() / c, j)
                })
                .collect();
            d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut votes = [(0usize, 0i64); 3];
            for &(dist, j) in &d[..k] {
                let l = ds.rows[j].label;
                votes[l].0 += 1;
                votes[l].1 -= (dist * c).round() as i64;
            }
            (0..3).rev().max_by_key(|&l| votes[l]).unwrap()
        })
        .collect()
}

/// Queries whose neighbour set and vote are decided without any tie rule.
fn untied_queries(ds: &FeatureDataset, k: usize) -> Vec<usize> {
    let sets: Vec<HashSet<u32>> = ds.rows.iter().map(|r| r.indices.iter().copied().collect()).collect();
    (0..ds.rows.len())
        .filter(|&q| {
            let mut shared: Vec<(usize, usize)> = (0..ds.rows.len())
                .filter(|&j| j != q)
                .map(|j| (sets[q].intersection(&sets[j]).count(), ds.rows[j].label))
                .collect();
            shared.sort_by_key(|s| std::cmp::Reverse(s.0));
            let boundary_clear = shared.len() == k || shared[k - 1].0 != shared[k].0;
            let mut votes = [0usize; 3];
            for s in &shared[..k] {
                votes[s.1] += 1;
            }
            let top = *votes.iter().max().unwrap();
            boundary_clear && votes.iter().filter(|&&v| v == top).count() == 1
        })
        .map(|q| ds.rows[q].email_id)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_dense_oracle((rows, c) in rows_strategy(), k in 1usize..6, seed in any::<u64>()) {
        let ds = dataset(rows, 20, c, seed);
        let k = k.min(ds.len() - 1);
        let report = knn::evaluate(&ds, k).unwrap();
        prop_assert_eq!(report.predictions, dense_oracle(&ds, k));
    }

    #[test]
    fn untied_predictions_survive_row_permutation(
        (rows, c) in rows_strategy(), k in 1usize..6, s1 in any::<u64>(), s2 in any::<u64>()
    ) {
        let a = dataset(rows.clone(), 20, c, s1);
        let b = dataset(rows, 20, c, s2);
        let k = k.min(a.len() - 1);
        let pa = knn::evaluate(&a, k).unwrap().predictions;
        let pb = knn::evaluate(&b, k).unwrap().predictions;
        let by_id = |ds: &FeatureDataset, p: &[usize], id: usize| {
            p[ds.rows.iter().position(|r| r.email_id == id).unwrap()]
        };
        for id in untied_queries(&a, k) {
            prop_assert_eq!(by_id(&a, &pa, id), by_id(&b, &pb, id));
        }
    }

    #[test]
    fn confusion_mass_is_conserved((rows, c) in rows_strategy(), seed in any::<u64>()) {
        let ds = dataset(rows, 20, c, seed);
        let report = knn::evaluate(&ds, 1).unwrap();
        let total: u64 = report.confusion.iter().flatten().sum();
        prop_assert_eq!(total as usize, ds.len());
        for (label, row) in report.confusion.iter().enumerate() {
            let count = ds.rows.iter().filter(|r| r.label == label).count();
            prop_assert_eq!(row.iter().sum::<u64>() as usize, count);
        }
    }
}
