//! Domain types shared by every layer: the object set, queries, fusion
//! weights and the `(id, distance)` pair used throughout graph code.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{NhqError, Result};

/// Vertex / object identifier. Object `i` of an [`ObjectSet`] is vertex `i`
/// of every graph built over it.
pub type NodeId = u32;

/// An object id paired with its distance to some reference point.
///
/// Ordering is by distance first and id second, so ties always break toward
/// the lower index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Neighbor {
    pub id: NodeId,
    pub distance: f64,
}

impl Neighbor {
    pub fn new(id: NodeId, distance: f64) -> Self {
        Self { id, distance }
    }
}

impl Eq for Neighbor {}

impl Ord for Neighbor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.id.cmp(&other.id))
    }
}

impl PartialOrd for Neighbor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Weights for the fusion distance `w_v * vector_dist + w_a * attr_dist`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum FusionWeights {
    /// Constant weights.
    Fixed { vector: f64, attribute: f64 },
    /// Per-pair weights `w_v = 1`, `w_a = vector_dist / m`, which scales the
    /// vector distance by `1 + mismatches / m` and so keeps the fused value
    /// within `[vector_dist, 2 * vector_dist]`.
    #[default]
    Recommended,
}

impl FusionWeights {
    pub fn fixed(vector: f64, attribute: f64) -> Result<Self> {
        let w = FusionWeights::Fixed { vector, attribute };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if let FusionWeights::Fixed { vector, attribute } = *self {
            if !(vector.is_finite() && attribute.is_finite()) || vector < 0.0 || attribute < 0.0 {
                return Err(NhqError::usage(
                    "fusion weights must be finite and non-negative",
                ));
            }
            if vector == 0.0 && attribute == 0.0 {
                return Err(NhqError::usage("fusion weights cannot both be zero"));
            }
        }
        Ok(())
    }
}

/// The distance a graph was built under, and that searches on it use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DistanceMode {
    Euclidean,
    Fusion(FusionWeights),
}

impl DistanceMode {
    pub fn is_fusion(&self) -> bool {
        matches!(self, DistanceMode::Fusion(_))
    }
}

/// `n` objects, each a `dim`-dimensional feature vector plus `m` ordinal
/// attribute codes. Storage is row-major and flat.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectSet {
    dim: usize,
    attr_dim: usize,
    vectors: Vec<f32>,
    attributes: Vec<u32>,
    cardinalities: Vec<u32>,
}

impl ObjectSet {
    /// Builds an object set from flat row-major buffers, validating every
    /// invariant (finite values, aligned row counts, codes below cardinality).
    pub fn new(
        dim: usize,
        vectors: Vec<f32>,
        attributes: Vec<u32>,
        cardinalities: Vec<u32>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(NhqError::usage("vector dimension must be at least 1"));
        }
        if !vectors.len().is_multiple_of(dim) {
            return Err(NhqError::usage(format!(
                "vector buffer of length {} is not a multiple of dimension {dim}",
                vectors.len()
            )));
        }
        let n = vectors.len() / dim;
        let attr_dim = cardinalities.len();
        if attributes.len() != n * attr_dim {
            return Err(NhqError::usage(format!(
                "expected {} attribute codes for {n} objects with m={attr_dim}, got {}",
                n * attr_dim,
                attributes.len()
            )));
        }
        if let Some(pos) = vectors.iter().position(|v| !v.is_finite()) {
            return Err(NhqError::Data(format!(
                "non-finite value in vector {} (coordinate {})",
                pos / dim,
                pos % dim
            )));
        }
        if cardinalities.contains(&0) {
            return Err(NhqError::usage("attribute cardinalities must be positive"));
        }
        if attr_dim > 0 {
            for (row, codes) in attributes.chunks_exact(attr_dim).enumerate() {
                for (a, (&code, &card)) in codes.iter().zip(&cardinalities).enumerate() {
                    if code >= card {
                        return Err(NhqError::Data(format!(
                            "object {row}: attribute {a} code {code} exceeds cardinality {card}"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            dim,
            attr_dim,
            vectors,
            attributes,
            cardinalities,
        })
    }

    /// Vector-only object set (`m = 0`).
    pub fn from_vectors(dim: usize, vectors: Vec<f32>) -> Result<Self> {
        Self::new(dim, vectors, Vec::new(), Vec::new())
    }

    pub fn len(&self) -> usize {
        self.vectors.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn attr_dim(&self) -> usize {
        self.attr_dim
    }

    pub fn cardinalities(&self) -> &[u32] {
        &self.cardinalities
    }

    #[inline]
    pub fn vector(&self, i: usize) -> &[f32] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn attributes(&self, i: usize) -> &[u32] {
        &self.attributes[i * self.attr_dim..(i + 1) * self.attr_dim]
    }

    pub fn raw_vectors(&self) -> &[f32] {
        &self.vectors
    }

    pub fn raw_attributes(&self) -> &[u32] {
        &self.attributes
    }

    /// Checks that a query can be posed against this set.
    pub fn check_query(&self, q: &Query) -> Result<()> {
        if q.vector.len() != self.dim {
            return Err(NhqError::DimensionMismatch {
                expected: self.dim,
                found: q.vector.len(),
            });
        }
        if q.attributes.len() != self.attr_dim {
            return Err(NhqError::DimensionMismatch {
                expected: self.attr_dim,
                found: q.attributes.len(),
            });
        }
        Ok(())
    }
}

/// A hybrid query: a feature vector and the attribute codes to match.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub vector: Vec<f32>,
    pub attributes: Vec<u32>,
}

impl Query {
    pub fn new(vector: Vec<f32>, attributes: Vec<u32>) -> Self {
        Self { vector, attributes }
    }

    pub fn vector_only(vector: Vec<f32>) -> Self {
        Self {
            vector,
            attributes: Vec::new(),
        }
    }

    /// Splits flat row-major buffers into queries.
    pub fn batch(dim: usize, vectors: &[f32], attr_dim: usize, attributes: &[u32]) -> Result<Vec<Query>> {
        if dim == 0 || !vectors.len().is_multiple_of(dim) {
            return Err(NhqError::usage("query vector buffer does not match dimension"));
        }
        let n = vectors.len() / dim;
        if attributes.len() != n * attr_dim {
            return Err(NhqError::usage(format!(
                "{n} query vectors but {} attribute codes for m={attr_dim}",
                attributes.len()
            )));
        }
        Ok((0..n)
            .map(|i| Query {
                vector: vectors[i * dim..(i + 1) * dim].to_vec(),
                attributes: attributes[i * attr_dim..(i + 1) * attr_dim].to_vec(),
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbor_ties_break_by_index() {
        let mut v = [Neighbor::new(5, 1.0), Neighbor::new(2, 1.0), Neighbor::new(9, 0.5)];
        v.sort();
        let ids: Vec<_> = v.iter().map(|n| n.id).collect();
        assert_eq!(ids, vec![9, 2, 5]);
    }

    #[test]
    fn object_set_rejects_bad_input() {
        assert!(ObjectSet::new(0, vec![], vec![], vec![]).is_err());
        assert!(ObjectSet::new(2, vec![1.0, 2.0, 3.0], vec![], vec![]).is_err());
        assert!(ObjectSet::new(1, vec![f32::NAN], vec![], vec![]).is_err());
        assert!(ObjectSet::new(1, vec![1.0], vec![3], vec![3]).is_err());
        assert!(ObjectSet::new(1, vec![1.0], vec![2], vec![0]).is_err());
        let s = ObjectSet::new(2, vec![0.0, 1.0, 2.0, 3.0], vec![0, 1], vec![2]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.vector(1), &[2.0, 3.0]);
        assert_eq!(s.attributes(1), &[1]);
    }

    #[test]
    fn fixed_weights_validated() {
        assert!(FusionWeights::fixed(0.0, 0.0).is_err());
        assert!(FusionWeights::fixed(-1.0, 1.0).is_err());
        assert!(FusionWeights::fixed(1.0, 0.0).is_ok());
    }
}
