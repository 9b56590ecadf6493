//! Seeded Monte Carlo sampling of the urn process, used as an empirical
//! oracle against the exact machinery.
//!
//! A replicate simulates the draws one ball at a time: with w white balls
//! left among r remaining, the next draw is white with probability w/r.
//! The generator is ChaCha8, seeded from a user-supplied 64-bit seed.
//! Replicates are partitioned into fixed blocks of [`BLOCK_SIZE`]; block b
//! runs on its own stream (`set_stream(b)`) of the same seed, and block
//! counts are merged by integer addition. Estimates are therefore
//! bit-identical across runs and across worker counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::Hypergeometric;
use crate::error::{Error, Result};

/// Replicates per RNG stream. Fixed: changing it changes which stream
/// serves which replicate, and with it every estimate.
pub const BLOCK_SIZE: u64 = 4096;

/// Seed and replicate count for one estimation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    seed: u64,
    replicates: u64,
}

impl SampleConfig {
    pub fn new(seed: u64, replicates: u64) -> Result<Self> {
        if replicates == 0 {
            return Err(Error::ZeroReplicates);
        }
        Ok(SampleConfig { seed, replicates })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replicates(&self) -> u64 {
        self.replicates
    }
}

/// An empirical tail probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub point_estimate: f64,
    pub std_error: f64,
    pub replicates: u64,
}

/// The generator for block `b` of a run with this seed.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// One replicate: n sequential draws without replacement; returns the
/// number of white balls drawn. Always lies inside the support.
pub fn draw_once<R: Rng + ?Sized>(params: &Hypergeometric, rng: &mut R) -> u64 {
    let mut whites_left = params.whites();
    let mut remaining = params.population();
    let mut drawn = 0u64;
    for _ in 0..params.draws() {
        if rng.random_range(0..remaining) < whites_left {
            drawn += 1;
            whites_left -= 1;
        }
        remaining -= 1;
    }
    drawn
}

/// Estimates Pr[i >= k] as the hit fraction over `config.replicates()`
/// independent replicates. Deterministic for fixed (params, k, config),
/// regardless of how many threads execute the blocks.
pub fn estimate_upper_tail(
    params: &Hypergeometric,
    k: i64,
    config: &SampleConfig,
) -> TailEstimate {
    let reps = config.replicates();
    let blocks = reps.div_ceil(BLOCK_SIZE);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(config.seed(), b);
            let in_block = BLOCK_SIZE.min(reps - b * BLOCK_SIZE);
            let mut count = 0u64;
            for _ in 0..in_block {
                if draw_once(params, &mut rng) as i64 >= k {
                    count += 1;
                }
            }
            count
        })
        .sum();
    let p_hat = hits as f64 / reps as f64;
    TailEstimate {
        point_estimate: p_hat,
        std_error: (p_hat * (1.0 - p_hat) / reps as f64).sqrt(),
        replicates: reps,
    }
}
