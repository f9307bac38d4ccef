//! Euclidean, attribute (Hamming) and fusion distances.
//!
//! Everything accumulates in `f64` even though vectors are stored as `f32`,
//! so comparisons near ties during edge selection are stable.

use crate::error::{NhqError, Result};
use crate::types::{DistanceMode, FusionWeights, NodeId, ObjectSet, Query};

#[inline]
pub(crate) fn l2(a: &[f32], b: &[f32]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = f64::from(x) - f64::from(y);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

#[inline]
pub(crate) fn mismatches(a: &[u32], b: &[u32]) -> u32 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u32
}

#[inline]
pub(crate) fn fuse(vector_dist: f64, attr_dist: u32, attr_dim: usize, w: FusionWeights) -> f64 {
    match w {
        FusionWeights::Fixed { vector, attribute } => {
            vector * vector_dist + attribute * f64::from(attr_dist)
        }
        FusionWeights::Recommended => {
            if attr_dim == 0 {
                vector_dist
            } else {
                vector_dist * (1.0 + f64::from(attr_dist) / attr_dim as f64)
            }
        }
    }
}

/// Euclidean distance between two feature vectors.
pub fn euclidean(a: &[f32], b: &[f32]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(NhqError::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(l2(a, b))
}

/// Number of attribute positions at which `a` and `b` differ.
pub fn attribute_distance(a: &[u32], b: &[u32]) -> Result<u32> {
    if a.len() != b.len() {
        return Err(NhqError::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(mismatches(a, b))
}

/// Fusion distance between two (vector, attributes) pairs.
pub fn fusion_distance(
    a_vec: &[f32],
    a_attr: &[u32],
    b_vec: &[f32],
    b_attr: &[u32],
    w: FusionWeights,
) -> Result<f64> {
    let vd = euclidean(a_vec, b_vec)?;
    let ad = attribute_distance(a_attr, b_attr)?;
    Ok(fuse(vd, ad, a_attr.len(), w))
}

/// Distance between two objects of one set under a fixed [`DistanceMode`].
#[derive(Debug, Clone, Copy)]
pub struct PairMetric<'a> {
    set: &'a ObjectSet,
    mode: DistanceMode,
}

impl<'a> PairMetric<'a> {
    pub fn new(set: &'a ObjectSet, mode: DistanceMode) -> Self {
        Self { set, mode }
    }

    pub fn set(&self) -> &'a ObjectSet {
        self.set
    }

    pub fn mode(&self) -> DistanceMode {
        self.mode
    }

    #[inline]
    pub fn between(&self, i: NodeId, j: NodeId) -> f64 {
        let (i, j) = (i as usize, j as usize);
        let vd = l2(self.set.vector(i), self.set.vector(j));
        match self.mode {
            DistanceMode::Euclidean => vd,
            DistanceMode::Fusion(w) => fuse(
                vd,
                mismatches(self.set.attributes(i), self.set.attributes(j)),
                self.set.attr_dim(),
                w,
            ),
        }
    }
}

/// Distance from a fixed query point to an object id.
///
/// Search routines only ever see the object set through this trait, which
/// lets tests substitute hand-built distance tables or counting wrappers.
pub trait QueryDistance {
    fn eval(&self, id: NodeId) -> f64;
}

impl<F: Fn(NodeId) -> f64> QueryDistance for F {
    fn eval(&self, id: NodeId) -> f64 {
        self(id)
    }
}

/// Query-to-object distance under a [`DistanceMode`].
#[derive(Debug, Clone, Copy)]
pub struct QueryMetric<'a> {
    set: &'a ObjectSet,
    query: &'a Query,
    mode: DistanceMode,
}

impl<'a> QueryMetric<'a> {
    pub fn new(set: &'a ObjectSet, query: &'a Query, mode: DistanceMode) -> Result<Self> {
        set.check_query(query)?;
        Ok(Self { set, query, mode })
    }
}

impl QueryDistance for QueryMetric<'_> {
    #[inline]
    fn eval(&self, id: NodeId) -> f64 {
        let i = id as usize;
        let vd = l2(&self.query.vector, self.set.vector(i));
        match self.mode {
            DistanceMode::Euclidean => vd,
            DistanceMode::Fusion(w) => fuse(
                vd,
                mismatches(&self.query.attributes, self.set.attributes(i)),
                self.set.attr_dim(),
                w,
            ),
        }
    }
}
