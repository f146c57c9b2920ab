//! Deterministic random streams and the worker pool.
//!
//! Every stream is a ChaCha8 generator keyed by `(seed, stream index)`, so a
//! shard draws the same numbers no matter which thread runs it. Work is split
//! into fixed-size shards and per-shard results are combined in shard order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Samples per shard. Part of the reproducibility contract: changing it
/// changes every stochastic output.
pub const SHARD_SIZE: u64 = 1 << 16;

/// Environment variable bounding the number of worker threads.
pub const THREADS_ENV: &str = "SUITA_LAB_THREADS";

/// Stream index reserved for direction sampling, far from shard indices.
const DIRECTION_STREAM: u64 = u64::MAX - 1;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `f` on a pool sized by `SUITA_LAB_THREADS` (default: rayon's choice).
pub fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok());
    match threads {
        Some(t) if t > 0 => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

/// Sums `per_shard(rng, count)` over the shards covering `total` samples.
pub fn sharded_sum<F>(total: u64, seed: u64, per_shard: F) -> u64
where
    F: Fn(&mut ChaCha8Rng, u64) -> u64 + Sync + Send,
{
    let shards = total.div_ceil(SHARD_SIZE);
    let counts: Vec<u64> = with_pool(|| {
        (0..shards)
            .into_par_iter()
            .map(|s| {
                let count = SHARD_SIZE.min(total - s * SHARD_SIZE);
                let mut rng = stream(seed, s);
                per_shard(&mut rng, count)
            })
            .collect()
    });
    counts.into_iter().sum()
}

/// Fills `out` with a standard complex Gaussian vector (real and imaginary
/// parts independent N(0,1)).
pub fn gaussian_vector<R: Rng>(rng: &mut R, out: &mut [Complex64]) {
    for c in out.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *c = Complex64::new(re, im);
    }
}

/// Uniform point of the ball of radius `radius` in C^n = R^{2n}.
pub fn uniform_in_ball<R: Rng>(rng: &mut R, radius: f64, out: &mut [Complex64]) {
    gaussian_vector(rng, out);
    let norm = out.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let real_dim = 2 * out.len();
    let u: f64 = rng.random();
    let r = radius * u.powf(1.0 / real_dim as f64);
    let s = r / norm;
    for c in out.iter_mut() {
        *c *= s;
    }
}

/// Unit directions in C^n: the coordinate axes, the normalized sums of pairs
/// of axes, then seeded uniform directions up to `count` in total.
pub fn unit_directions(n: usize, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut dirs = Vec::with_capacity(count);
    for i in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[i] = Complex64::new(1.0, 0.0);
        dirs.push(e);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for k in i + 1..n {
            for phase in [Complex64::new(h, 0.0), Complex64::new(-h, 0.0), Complex64::new(0.0, h)] {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[i] = Complex64::new(h, 0.0);
                e[k] = phase;
                dirs.push(e);
            }
        }
    }
    dirs.truncate(count);
    let mut rng = stream(seed, DIRECTION_STREAM);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    while dirs.len() < count {
        gaussian_vector(&mut rng, &mut buf);
        let norm = buf.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            dirs.push(buf.iter().map(|c| c / norm).collect());
        }
    }
    dirs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_keyed() {
        let a: u64 = stream(7, 0).random();
        let b: u64 = stream(7, 0).random();
        let c: u64 = stream(7, 1).random();
        let d: u64 = stream(8, 0).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn sharded_sum_independent_of_pool() {
        let count = |rng: &mut ChaCha8Rng, n: u64| (0..n).filter(|_| rng.random::<f64>() < 0.3).count() as u64;
        let total = 3 * SHARD_SIZE + 17;
        let parallel = sharded_sum(total, 11, count);
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| sharded_sum(total, 11, count));
        assert_eq!(parallel, serial);
    }

    #[test]
    fn ball_samples_stay_inside() {
        let mut rng = stream(1, 0);
        let mut buf = vec![Complex64::new(0.0, 0.0); 2];
        for _ in 0..1000 {
            uniform_in_ball(&mut rng, 2.5, &mut buf);
            let r = buf.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            assert!(r <= 2.5);
        }
    }

    #[test]
    fn directions_are_unit_and_reproducible() {
        let d1 = unit_directions(2, 500, 3);
        let d2 = unit_directions(2, 500, 3);
        assert_eq!(d1, d2);
        assert_eq!(d1.len(), 500);
        for d in &d1 {
            let r: f64 = d.iter().map(|c| c.norm_sqr()).sum();
            assert!((r - 1.0).abs() < 1e-12);
        }
    }
}
