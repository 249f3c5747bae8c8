//! Cosine distance for dense real vectors and for sparse binary vectors.
//!
//! For binary vectors the dot product is the size of the index intersection
//! and each norm is the square root of the popcount. When both vectors carry
//! the same number of ones `c`, the distance collapses to
//! `1 - shared / c`: a normalized count of positions where both are set.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBinaryVector {
    indices: Vec<u32>,
    dimension: usize,
}

impl SparseBinaryVector {
    pub fn new(indices: Vec<u32>, dimension: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("indices must be strictly increasing".into()));
        }
        if let Some(&last) = indices.last() {
            if last as usize >= dimension {
                return Err(Error::Domain(format!(
                    "index {last} out of range for dimension {dimension}"
                )));
            }
        }
        Ok(SparseBinaryVector { indices, dimension })
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn popcount(&self) -> usize {
        self.indices.len()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.dimension];
        for &i in &self.indices {
            dense[i as usize] = 1.0;
        }
        dense
    }
}

/// `1 - a.b / (|a| |b|)`.
pub fn cosine_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Usage(format!(
            "dimension mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let (mut dot, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        aa += x * x;
        bb += y * y;
    }
    if aa == 0.0 || bb == 0.0 {
        return Err(Error::Domain("cosine distance of a zero vector".into()));
    }
    Ok(1.0 - dot / (aa.sqrt() * bb.sqrt()))
}

/// Size of the intersection of two strictly increasing index lists.
pub fn shared_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut shared) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                shared += 1;
                i += 1;
                j += 1;
            }
        }
    }
    shared
}

/// Distance between two non-empty sorted index sets.
pub fn binary_index_distance(a: &[u32], b: &[u32]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("cosine distance of an empty binary vector".into()));
    }
    let shared = shared_count(a, b);
    if a.len() == b.len() {
        return Ok(1.0 - shared as f64 / a.len() as f64);
    }
    Ok(1.0 - shared as f64 / ((a.len() as f64) * (b.len() as f64)).sqrt())
}

pub fn binary_cosine_distance(a: &SparseBinaryVector, b: &SparseBinaryVector) -> Result<f64> {
    binary_index_distance(&a.indices, &b.indices)
}
