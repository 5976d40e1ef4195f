//! Monte Carlo estimation of the Furstenberg entropy from sampled rays.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::cocycle::rn_on_cylinder;
use super::harmonic::{CylinderSpace, StepLaw};
use super::word::{Letter, Word};
use crate::error::{Error, Result};
use crate::math::{ln, sqrt};

/// When a walk is considered to have fixed the first `L` letters of its ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RayParams {
    /// Stop only once the word is longer than `L + extra_length`.
    pub extra_length: usize,
    /// ... and its length-`L` prefix has not changed for this many steps.
    pub stable_steps: usize,
}

impl Default for RayParams {
    fn default() -> Self {
        RayParams {
            extra_length: 32,
            stable_steps: 16,
        }
    }
}

/// Runs the walk from `e` and returns the first `depth` letters of its ray.
pub fn sample_ray_prefix<R: RngCore>(law: &StepLaw, depth: usize, params: RayParams, rng: &mut R) -> Vec<Letter> {
    let mut w = Word::identity();
    let mut stable = 0usize;
    loop {
        w.push(law.sample(rng));
        if w.len() >= depth {
            stable += 1;
        } else {
            stable = 0;
        }
        if w.len() > depth + params.extra_length && stable >= params.stable_steps {
            return w.letters()[..depth].to_vec();
        }
    }
}

/// Running sums of one stream of samples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StreamStats {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

/// Mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

pub const MIN_SAMPLES: u64 = 2;

/// Random generator of stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `−ln ρ_{x⁻¹}(c)` for every letter `x` and cylinder `c`.
pub fn log_rn_table(cyl: &CylinderSpace) -> Vec<Vec<f64>> {
    let h = cyl.harmonic();
    (0..cyl.law().probs().len() as Letter)
        .map(|x| {
            let inv = Word::letter(x).inverse();
            cyl.words().iter().map(|c| -ln(rn_on_cylinder(h, &inv, c.letters()))).collect()
        })
        .collect()
}

/// One stream: `samples` independent pairs (step `x ~ μ`, ray `b ~ ν`),
/// each contributing `−ln ρ_{x⁻¹}(b)`.
pub fn entropy_stream(
    cyl: &CylinderSpace,
    table: &[Vec<f64>],
    params: RayParams,
    seed: u64,
    stream: u64,
    samples: u64,
) -> StreamStats {
    let mut rng = stream_rng(seed, stream);
    let law = cyl.law();
    let mut stats = StreamStats::default();
    for _ in 0..samples {
        let ray = sample_ray_prefix(law, cyl.depth(), params, &mut rng);
        let x = law.sample(&mut rng);
        let v = table[x as usize][cyl.index_of(&ray)];
        stats.n += 1;
        stats.sum += v;
        stats.sum_sq += v * v;
    }
    stats
}

/// Combines streams in the given order.
pub fn merge_streams(streams: &[StreamStats]) -> Result<Estimate> {
    let mut total = StreamStats::default();
    for s in streams {
        total.n += s.n;
        total.sum += s.sum;
        total.sum_sq += s.sum_sq;
    }
    if total.n < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: total.n,
            min: MIN_SAMPLES,
        });
    }
    let n = total.n as f64;
    let mean = total.sum / n;
    let var = ((total.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(Estimate {
        mean,
        stderr: sqrt(var / n),
        samples: total.n,
    })
}

/// Splits `samples` over `streams` as evenly as possible.
pub fn stream_sizes(samples: u64, streams: u64) -> Vec<u64> {
    let streams = streams.max(1);
    (0..streams)
        .map(|i| samples / streams + u64::from(i < samples % streams))
        .collect()
}

/// Sequential Monte Carlo estimate over `streams` streams.
pub fn furstenberg_monte_carlo(cyl: &CylinderSpace, seed: u64, samples: u64, streams: u64) -> Result<Estimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: samples,
            min: MIN_SAMPLES,
        });
    }
    let table = log_rn_table(cyl);
    let stats: Vec<StreamStats> = stream_sizes(samples, streams)
        .into_iter()
        .enumerate()
        .map(|(i, n)| entropy_stream(cyl, &table, RayParams::default(), seed, i as u64, n))
        .collect();
    merge_streams(&stats)
}
