//! Seeded synthetic workloads.
//!
//! Attribute generation is pinned so files can be regenerated anywhere: a
//! `ChaCha8Rng` seeded with `derive_seed(seed, 5, 0)` (objects) or
//! `derive_seed(seed, 5, 1)` (queries) draws, row by row and attribute by
//! attribute, `gen_range(0..cardinality)` as a `u32` (rand 0.8 semantics).

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{NhqError, Result};
use crate::exec::{rng_for, stream};

fn check_cards(cardinalities: &[u32]) -> Result<()> {
    if cardinalities.is_empty() {
        return Err(NhqError::usage("at least one attribute is required"));
    }
    if cardinalities.contains(&0) {
        return Err(NhqError::usage("attribute cardinalities must be at least 1"));
    }
    Ok(())
}

fn draw(n: usize, cardinalities: &[u32], seed: u64, index: u64) -> Result<Vec<Vec<u32>>> {
    check_cards(cardinalities)?;
    let mut rng = rng_for(seed, stream::ATTRIBUTES, index);
    Ok((0..n)
        .map(|_| cardinalities.iter().map(|&c| rng.gen_range(0..c)).collect())
        .collect())
}

/// Independent uniform attribute values for `n` objects. `m` must equal
/// `cardinalities.len()`.
pub fn generate_attributes(n: usize, m: usize, cardinalities: &[u32], seed: u64) -> Result<Vec<Vec<u32>>> {
    if m != cardinalities.len() {
        return Err(NhqError::usage(format!(
            "{} cardinalities given for {m} attributes",
            cardinalities.len()
        )));
    }
    draw(n, cardinalities, seed, 0)
}

/// Query attributes from the same distribution on a separate stream.
pub fn generate_query_attributes(count: usize, cardinalities: &[u32], seed: u64) -> Result<Vec<Vec<u32>>> {
    draw(count, cardinalities, seed, 1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VectorDistribution {
    /// Each coordinate uniform in `[0, 1)`.
    Uniform,
    /// Each coordinate standard normal.
    Gaussian,
    /// Normal blobs of standard deviation `spread` around `clusters` centers
    /// drawn uniformly from `[0, 1)^d`.
    Clustered { clusters: usize, spread: f32 },
}

/// `n` row-major `d`-dimensional vectors. `index` separates independent
/// draws (e.g. objects and queries) under one seed.
pub fn generate_vectors(n: usize, d: usize, dist: VectorDistribution, seed: u64, index: u64) -> Result<Vec<f32>> {
    if d == 0 {
        return Err(NhqError::usage("vector dimension must be positive"));
    }
    let mut rng = rng_for(seed, stream::VECTORS, index);
    Ok(match dist {
        VectorDistribution::Uniform => (0..n * d).map(|_| rng.gen::<f32>()).collect(),
        VectorDistribution::Gaussian => {
            let normal = Normal::new(0.0f32, 1.0).unwrap();
            (0..n * d).map(|_| normal.sample(&mut rng)).collect()
        }
        VectorDistribution::Clustered { clusters, spread } => {
            if clusters == 0 || spread.is_nan() || spread <= 0.0 {
                return Err(NhqError::usage("clustered data needs clusters >= 1 and spread > 0"));
            }
            // centers come from their own stream so they do not depend on n
            let mut crng = rng_for(seed, stream::VECTORS, u64::MAX);
            let centers: Vec<f32> = (0..clusters * d).map(|_| crng.gen()).collect();
            let normal = Normal::new(0.0f32, spread).unwrap();
            let mut out = Vec::with_capacity(n * d);
            for _ in 0..n {
                let c = rng.gen_range(0..clusters);
                out.extend(centers[c * d..(c + 1) * d].iter().map(|&x| x + normal.sample(&mut rng)));
            }
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinality_one_is_all_zero() {
        let a = generate_attributes(50, 3, &[1, 1, 1], 9).unwrap();
        assert!(a.iter().all(|r| r == &[0, 0, 0]));
    }

    #[test]
    fn empirical_selectivity_near_expectation() {
        let cards = [3, 3, 3];
        let objs = generate_attributes(10_000, 3, &cards, 42).unwrap();
        let qs = generate_query_attributes(50, &cards, 42).unwrap();
        let mean: f64 = qs
            .iter()
            .map(|q| 1.0 - objs.iter().filter(|o| *o == q).count() as f64 / objs.len() as f64)
            .sum::<f64>()
            / qs.len() as f64;
        assert!((mean - (1.0 - 1.0 / 27.0)).abs() <= 0.02, "mean selectivity {mean}");
        for j in 0..3 {
            for v in 0..3 {
                let share = objs.iter().filter(|o| o[j] == v).count() as f64 / 10_000.0;
                assert!((share - 1.0 / 3.0).abs() < 0.03);
            }
        }
    }

    #[test]
    fn seeded_and_stream_separated() {
        let a = generate_attributes(200, 2, &[5, 7], 1).unwrap();
        assert_eq!(a, generate_attributes(200, 2, &[5, 7], 1).unwrap());
        assert_ne!(a, generate_attributes(200, 2, &[5, 7], 2).unwrap());
        assert_ne!(a, generate_query_attributes(200, &[5, 7], 1).unwrap());
        assert!(a.iter().all(|r| r[0] < 5 && r[1] < 7));
    }

    #[test]
    fn bad_arguments() {
        assert!(generate_attributes(5, 2, &[3], 0).is_err());
        assert!(generate_attributes(5, 1, &[0], 0).is_err());
        assert!(generate_vectors(5, 0, VectorDistribution::Uniform, 0, 0).is_err());
    }

    #[test]
    fn vector_draws() {
        let u = generate_vectors(100, 4, VectorDistribution::Uniform, 3, 0).unwrap();
        assert_eq!(u.len(), 400);
        assert!(u.iter().all(|&x| (0.0..1.0).contains(&x)));
        assert_ne!(u, generate_vectors(100, 4, VectorDistribution::Uniform, 3, 1).unwrap());
        let c = generate_vectors(100, 4, VectorDistribution::Clustered { clusters: 5, spread: 0.01 }, 3, 0).unwrap();
        assert_eq!(c.len(), 400);
        let g = generate_vectors(2000, 1, VectorDistribution::Gaussian, 3, 0).unwrap();
        let mean = g.iter().sum::<f32>() / 2000.0;
        assert!(mean.abs() < 0.1);
    }
}
