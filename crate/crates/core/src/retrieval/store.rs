use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cosine similarity, clamped to `[-1, 1]`.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let nu = norm(u);
    let nv = norm(v);
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::DegenerateVector);
    }
    Ok((dot(u, v) / (nu * nv)).clamp(-1.0, 1.0))
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn norm(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

/// Exhaustive in-memory store of unit vectors keyed by chunk id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorStore {
    dimension: usize,
    normalized: bool,
    entries: BTreeMap<String, Vec<f64>>,
}

impl VectorStore {
    /// With `normalize`, every inserted vector is scaled to unit length.
    pub fn new(dimension: usize, normalize: bool) -> Self {
        Self {
            dimension,
            normalized: normalize,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, id: impl Into<String>, mut vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                left: self.dimension,
                right: vector.len(),
            });
        }
        let n = norm(&vector);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DegenerateVector);
        }
        if self.normalized {
            vector.iter_mut().for_each(|x| *x /= n);
        }
        self.entries.insert(id.into(), vector);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&[f64]> {
        self.entries.get(id).map(Vec::as_slice)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Checks the dimension and, when flagged, the unit norm of every entry.
    pub fn validate(&self) -> Result<()> {
        for (id, v) in &self.entries {
            if v.len() != self.dimension {
                return Err(Error::DimensionMismatch {
                    left: self.dimension,
                    right: v.len(),
                });
            }
            if self.normalized && (norm(v) - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidConfig(format!("vector `{id}` is not unit length")));
            }
        }
        Ok(())
    }
}
