//! Data-parallel map over index ranges.
//!
//! With the `parallel` feature (default) and more than one worker, work runs
//! on a dedicated rayon pool; otherwise it runs on the calling thread. Output
//! order always follows input order, so results never depend on the worker
//! count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Worker configuration for one build or batch job.
pub struct Executor {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl Executor {
    /// `threads == 1` forces sequential execution; `0` means "all cores".
    pub fn new(threads: usize) -> Self {
        #[cfg(feature = "parallel")]
        {
            let pool = if threads == 1 {
                None
            } else {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(|e| log::warn!("falling back to sequential execution: {e}"))
                    .ok()
            };
            Executor { pool }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = threads;
            Executor {}
        }
    }

    pub fn sequential() -> Self {
        Self::new(1)
    }

    pub fn is_parallel(&self) -> bool {
        #[cfg(feature = "parallel")]
        {
            self.pool.is_some()
        }
        #[cfg(not(feature = "parallel"))]
        {
            false
        }
    }

    /// `(0..n).map(f).collect()`, possibly in parallel.
    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| (0..n).into_par_iter().map(&f).collect());
        }
        (0..n).map(f).collect()
    }
}

/// Mixes a base seed with a stream tag and an index (splitmix64 finalizer),
/// giving each vertex / query / stage an independent reproducible RNG.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, stream, index))
}

/// Stream tags for [`derive_seed`].
pub(crate) mod stream {
    pub const KGRAPH_INIT: u64 = 1;
    pub const QUALITY_SAMPLE: u64 = 2;
    pub const NSW_ENTRY: u64 = 3;
    pub const QUERY: u64 = 4;
    pub const ATTRIBUTES: u64 = 5;
    pub const VECTORS: u64 = 6;
}
