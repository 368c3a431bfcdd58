//! Uniform sampling of pattern-avoiding permutations and Monte Carlo
//! estimates of positional win rates.
//!
//! Randomness comes from [`RngStream`], a ChaCha8 generator addressed by
//! `(seed, stream)`. ChaCha is counter based, so a given seed and stream
//! yield the same words on every platform, and independent workers take
//! distinct stream ids.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::count::catalan;
use crate::dyck::{perm_from_dyck, DyckPath, Step};
use crate::error::{domain, Result};
use crate::perm::{play_positional, Pattern, Permutation};

/// Seeded, stream-addressed random source.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Number of 32-bit words consumed so far.
    pub fn position(&self) -> u128 {
        self.rng.get_word_pos()
    }

    /// Uniform integer in `0..bound`; `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.rng.random_range(0..bound)
    }

    /// Uniform float in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform integer in `0..bound` by rejection on whole words.
    pub fn below_big(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero(), "empty range");
        let bits = bound.bits();
        let words = bits.div_ceil(64) as usize;
        let top_mask = if bits.is_multiple_of(64) { u64::MAX } else { (1u64 << (bits % 64)) - 1 };
        loop {
            let mut digits: Vec<u64> = (0..words).map(|_| self.next_u64()).collect();
            digits[words - 1] &= top_mask;
            let candidate = BigUint::from_slice(
                &digits
                    .iter()
                    .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                    .collect::<Vec<_>>(),
            );
            if &candidate < bound {
                return candidate;
            }
        }
    }
}

/// Monte Carlo win-rate estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WinEstimate {
    pub trials: u64,
    pub wins: u64,
    pub p_hat: f64,
    /// `sqrt(p_hat (1 - p_hat) / trials)`.
    pub stderr: f64,
}

impl WinEstimate {
    pub fn from_counts(trials: u64, wins: u64) -> Self {
        assert!(wins <= trials && trials > 0, "need 0 <= wins <= trials, trials >= 1");
        let p_hat = wins as f64 / trials as f64;
        WinEstimate {
            trials,
            wins,
            p_hat,
            stderr: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
        }
    }

    pub fn merge(&self, other: &WinEstimate) -> WinEstimate {
        WinEstimate::from_counts(self.trials + other.trials, self.wins + other.wins)
    }

    /// Distance from `target` in standard errors; infinite when the estimate
    /// has zero spread but misses the target.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.p_hat - target).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.stderr
        }
    }
}

/// Uniform Dyck path of size `n` by the cycle lemma: shuffle `n+1` north and
/// `n` east steps, rotate to the unique rotation whose partial sums stay
/// positive, and drop its leading north step.
pub fn sample_dyck_uniform(n: usize, rng: &mut RngStream) -> Result<DyckPath> {
    if n == 0 {
        return Err(domain!("Dyck paths need size >= 1"));
    }
    let len = 2 * n + 1;
    let mut seq: Vec<Step> = std::iter::repeat_n(Step::North, n + 1)
        .chain(std::iter::repeat_n(Step::East, n))
        .collect();
    for i in (1..len).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        seq.swap(i, j);
    }
    // last index attaining the minimum prefix sum
    let (mut sum, mut min, mut start) = (0i64, 0i64, 0usize);
    for (i, s) in seq[..len - 1].iter().enumerate() {
        sum += if *s == Step::North { 1 } else { -1 };
        if sum <= min {
            min = sum;
            start = i + 1;
        }
    }
    seq.rotate_left(start);
    debug_assert_eq!(seq[0], Step::North);
    Ok(DyckPath::from_steps_unchecked(seq.split_off(1)))
}

/// How the 231 sampler draws the position of the maximum inside a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SplitMode {
    /// Floating weights `C_j C_{s-1-j} / C_s` from a log-Catalan table.
    #[default]
    Float,
    /// Uniform big integer below `C_s` walked through exact cumulative
    /// weights; for audits at moderate sizes.
    Exact,
}

/// Reusable uniform sampler for the avoiders of 321 or 231.
#[derive(Clone, Debug)]
pub struct AvoiderSampler {
    n: usize,
    pattern: Pattern,
    mode: SplitMode,
    ln_catalan: Vec<f64>,
}

impl AvoiderSampler {
    pub fn new(n: usize, pattern: Pattern) -> Result<Self> {
        Self::with_mode(n, pattern, SplitMode::Float)
    }

    pub fn with_mode(n: usize, pattern: Pattern, mode: SplitMode) -> Result<Self> {
        if n == 0 {
            return Err(domain!("N must be >= 1"));
        }
        if !matches!(pattern, Pattern::P321 | Pattern::P231) {
            return Err(domain!("uniform sampling supports 321 and 231 only"));
        }
        let mut ln_catalan = Vec::new();
        if pattern == Pattern::P231 && mode == SplitMode::Float {
            ln_catalan.reserve(n + 1);
            ln_catalan.push(0.0);
            for m in 1..=n {
                let m = m as f64;
                let prev = ln_catalan[ln_catalan.len() - 1];
                ln_catalan.push(prev + (2.0 * (2.0 * m - 1.0) / (m + 1.0)).ln());
            }
        }
        Ok(AvoiderSampler {
            n,
            pattern,
            mode,
            ln_catalan,
        })
    }

    pub fn sample(&self, rng: &mut RngStream) -> Permutation {
        match self.pattern {
            Pattern::P321 => perm_from_dyck(&sample_dyck_uniform(self.n, rng).expect("n >= 1")),
            _ => self.sample_231(rng),
        }
    }

    // Every block is `L max R` with all of L below all of R.
    fn sample_231(&self, rng: &mut RngStream) -> Permutation {
        let mut values = vec![0u32; self.n];
        // (first position, smallest value, size)
        let mut blocks = vec![(0usize, 1u32, self.n)];
        while let Some((start, lo, size)) = blocks.pop() {
            if size == 0 {
                continue;
            }
            let left = match self.mode {
                SplitMode::Float => self.split_float(size, rng),
                SplitMode::Exact => split_exact(size, rng),
            };
            values[start + left] = lo + size as u32 - 1;
            blocks.push((start, lo, left));
            blocks.push((start + left + 1, lo + left as u32, size - 1 - left));
        }
        Permutation::from_vec_unchecked(values)
    }

    fn split_float(&self, size: usize, rng: &mut RngStream) -> usize {
        let u = rng.unit();
        let lc = &self.ln_catalan;
        let mut acc = 0.0;
        for j in 0..size {
            acc += (lc[j] + lc[size - 1 - j] - lc[size]).exp();
            if u < acc {
                return j;
            }
        }
        size - 1
    }
}

fn split_exact(size: usize, rng: &mut RngStream) -> usize {
    let r = rng.below_big(&catalan(size));
    let mut acc = BigUint::zero();
    for j in 0..size {
        acc += catalan(j) * catalan(size - 1 - j);
        if r < acc {
            return j;
        }
    }
    unreachable!("weights sum to C_size")
}

pub fn sample_avoider(n: usize, q: Pattern, rng: &mut RngStream) -> Result<Permutation> {
    Ok(AvoiderSampler::new(n, q)?.sample(rng))
}

pub fn estimate_win_rate(
    n: usize,
    k: usize,
    q: Pattern,
    trials: u64,
    rng: &mut RngStream,
) -> Result<WinEstimate> {
    if trials == 0 {
        return Err(domain!("trials must be >= 1"));
    }
    if k >= n {
        return Err(domain!("k = {k} outside 0..N-1 for N = {n}"));
    }
    let sampler = AvoiderSampler::new(n, q)?;
    let mut wins = 0;
    for _ in 0..trials {
        let p = sampler.sample(rng);
        if play_positional(&p, k)?.win {
            wins += 1;
        }
    }
    Ok(WinEstimate::from_counts(trials, wins))
}

/// Splits `trials` over `streams` independent streams of `seed` (stream `s`
/// takes the `s`-th share) and sums the results. The outcome depends only on
/// the arguments, not on thread scheduling.
pub fn estimate_win_rate_parallel(
    n: usize,
    k: usize,
    q: Pattern,
    trials: u64,
    seed: u64,
    streams: u64,
) -> Result<WinEstimate> {
    if streams == 0 || streams > trials {
        return Err(domain!("need 1 <= streams <= trials"));
    }
    let base = trials / streams;
    let extra = trials % streams;
    let parts = (0..streams)
        .into_par_iter()
        .map(|s| {
            let share = base + u64::from(s < extra);
            estimate_win_rate(n, k, q, share, &mut RngStream::with_stream(seed, s))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts
        .iter()
        .skip(1)
        .fold(parts[0], |acc, e| acc.merge(e)))
}
