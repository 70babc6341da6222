//! Execution policy for the data-parallel loops (Monte Carlo shards,
//! verification trials, brute-force enumeration).
//!
//! Work is always split into the same deterministic shards, each with its own
//! ChaCha stream derived from `(seed, shard)`, so results do not depend on the
//! policy or the thread count. With the `parallel` feature disabled,
//! [`Execution::Parallel`] silently runs sequentially.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Samples per Monte Carlo shard. Fixed so that aggregates are reproducible.
pub const SHARD_SIZE: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps `f` over `0..n`, preserving order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }
}

/// Generator for one shard: stream `shard` of the ChaCha8 sequence keyed by `seed`.
pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// Splits `total` items into shard lengths of at most [`SHARD_SIZE`].
pub fn shard_lengths(total: usize) -> Vec<usize> {
    let full = total / SHARD_SIZE;
    let rest = total % SHARD_SIZE;
    let mut out = vec![SHARD_SIZE; full];
    if rest > 0 {
        out.push(rest);
    }
    out
}

/// Running mean and centered second moment of a real sample, mergeable
/// across shards (Welford updates, Chan et al. merge).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeanAccumulator {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl MeanAccumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, other: &Self) -> Self {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return *other;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        let w = other.count as f64 / n;
        MeanAccumulator {
            count: self.count + other.count,
            mean: self.mean + d * w,
            m2: self.m2 + other.m2 + d * d * self.count as f64 * w,
        }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Standard error of the mean (unbiased variance).
    pub fn stderr(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        (self.m2.max(0.0) / (n - 1.0) / n).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn shards_cover_total() {
        assert_eq!(shard_lengths(0), Vec::<usize>::new());
        let lens = shard_lengths(3 * SHARD_SIZE + 7);
        assert_eq!(lens.len(), 4);
        assert_eq!(lens.iter().sum::<usize>(), 3 * SHARD_SIZE + 7);
    }

    #[test]
    fn policies_agree() {
        let f = |i: usize| shard_rng(11, i as u64).random::<u64>();
        assert_eq!(
            Execution::Sequential.map(9, f),
            Execution::Parallel.map(9, f)
        );
    }

    #[test]
    fn streams_differ() {
        let a: u64 = shard_rng(1, 0).random();
        let b: u64 = shard_rng(1, 1).random();
        assert_ne!(a, b);
    }

    #[test]
    fn accumulator_stats() {
        let mut acc = MeanAccumulator::default();
        for x in [1.0, 2.0, 3.0, 4.0] {
            acc.push(x);
        }
        assert_eq!(acc.mean(), 2.5);
        // sample variance 5/3, stderr sqrt(5/12)
        assert!((acc.stderr() - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        let merged = MeanAccumulator::default().merge(&acc);
        assert_eq!(merged, acc);
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| 1e8 + (i as f64 * 0.37).sin()).collect();
        let mut whole = MeanAccumulator::default();
        let (mut a, mut b) = (MeanAccumulator::default(), MeanAccumulator::default());
        for (i, &x) in xs.iter().enumerate() {
            whole.push(x);
            if i < 313 {
                a.push(x)
            } else {
                b.push(x)
            }
        }
        let m = a.merge(&b);
        assert_eq!(m.count, whole.count);
        assert!((m.mean() / whole.mean() - 1.0).abs() < 1e-13);
        assert!((m.stderr() / whole.stderr() - 1.0).abs() < 1e-9);
        assert!(whole.stderr() > 0.0);
    }
}
