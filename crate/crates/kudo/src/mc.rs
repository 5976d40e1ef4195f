//! Parallel Monte Carlo estimate of the Furstenberg entropy.
//!
//! Each stream owns its generator (`seed`, stream index), streams run on the
//! rayon pool and are merged in index order, so the result does not depend
//! on the number of threads.

use kudo_core::walk::harmonic::CylinderSpace;
use kudo_core::walk::sampler::{self, Estimate, RayParams, StreamStats, MIN_SAMPLES};
use rayon::prelude::*;

pub const DEFAULT_STREAMS: u64 = 64;

pub fn furstenberg_parallel(cyl: &CylinderSpace, seed: u64, samples: u64, streams: u64) -> kudo_core::Result<Estimate> {
    if samples < MIN_SAMPLES {
        return Err(kudo_core::Error::InsufficientSamples {
            got: samples,
            min: MIN_SAMPLES,
        });
    }
    let table = sampler::log_rn_table(cyl);
    let stats: Vec<StreamStats> = sampler::stream_sizes(samples, streams)
        .into_par_iter()
        .enumerate()
        .map(|(i, n)| sampler::entropy_stream(cyl, &table, RayParams::default(), seed, i as u64, n))
        .collect();
    sampler::merge_streams(&stats)
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads` is `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kudo_core::walk::harmonic::StepLaw;

    #[test]
    fn matches_sequential_and_ignores_thread_count() {
        let cyl = CylinderSpace::new(StepLaw::uniform(2).unwrap(), 3).unwrap();
        let seq = sampler::furstenberg_monte_carlo(&cyl, 11, 5000, 8).unwrap();
        let one = with_threads(Some(1), || furstenberg_parallel(&cyl, 11, 5000, 8).unwrap());
        let four = with_threads(Some(4), || furstenberg_parallel(&cyl, 11, 5000, 8).unwrap());
        assert_eq!(seq, one);
        assert_eq!(one, four);
    }
}
