//! Seeded string-pair workloads and a wall-clock harness that times the
//! distance kernels while checking they agree with the full DP.

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arsip_core::distance::{levenshtein_bitparallel_chars, levenshtein_bounded_chars, levenshtein_chars};

/// Lowercase ASCII with a handful of non-ASCII letters mixed in.
pub const ALPHABET: &[char] = &[
    'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q', 'r', 's', 't', 'u', 'v',
    'w', 'x', 'y', 'z', 'é', 'ü', 'ñ', 'ß',
];

pub type Pair = (Vec<char>, Vec<char>);

pub fn random_string(rng: &mut impl Rng, alphabet: &[char], len: usize) -> Vec<char> {
    (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect()
}

/// `n` pairs with independent lengths drawn from `min_len..=max_len`.
/// The same seed always yields the same pairs.
pub fn random_pairs(seed: u64, n: usize, min_len: usize, max_len: usize) -> Vec<Pair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let la = rng.random_range(min_len..=max_len);
            let lb = rng.random_range(min_len..=max_len);
            (random_string(&mut rng, ALPHABET, la), random_string(&mut rng, ALPHABET, lb))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Dp,
    Banded,
    BitParallel,
}

impl Algo {
    pub const ALL: [Algo; 3] = [Algo::Dp, Algo::Banded, Algo::BitParallel];
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Dp => "dp",
            Algo::Banded => "banded",
            Algo::BitParallel => "bitparallel",
        })
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dp" => Ok(Algo::Dp),
            "banded" => Ok(Algo::Banded),
            "bitparallel" => Ok(Algo::BitParallel),
            other => Err(format!("unknown algorithm {other:?}; expected dp, banded or bitparallel")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Timing {
    pub algo: Algo,
    pub elapsed: Duration,
    pub ops: usize,
}

impl Timing {
    pub fn ns_per_op(&self) -> f64 {
        self.elapsed.as_nanos() as f64 / self.ops.max(1) as f64
    }

    pub fn ops_per_sec(&self) -> f64 {
        self.ops as f64 / self.elapsed.as_secs_f64().max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub pairs: usize,
    pub band: usize,
    pub timings: Vec<Timing>,
    /// Pairs where some timed kernel disagreed with the DP.
    pub mismatches: usize,
}

impl Report {
    pub fn timing(&self, algo: Algo) -> Option<&Timing> {
        self.timings.iter().find(|t| t.algo == algo)
    }

    /// DP time divided by bit-parallel time, when both were measured.
    pub fn bitparallel_speedup(&self) -> Option<f64> {
        let dp = self.timing(Algo::Dp)?;
        let bp = self.timing(Algo::BitParallel)?;
        Some(dp.elapsed.as_secs_f64() / bp.elapsed.as_secs_f64().max(f64::MIN_POSITIVE))
    }

    pub fn agrees(&self) -> bool {
        self.mismatches == 0
    }
}

fn time<T>(pairs: &[Pair], f: impl Fn(&[char], &[char]) -> T) -> (Duration, Vec<T>) {
    let start = Instant::now();
    let out: Vec<T> = pairs.iter().map(|(a, b)| black_box(f(black_box(a), black_box(b)))).collect();
    (start.elapsed(), out)
}

/// Times each of `algos` over `pairs`. The banded kernel runs with bound
/// `band`. Results are always checked against the full DP, which is
/// computed untimed when `Algo::Dp` is not requested.
pub fn run(pairs: &[Pair], algos: &[Algo], band: usize) -> Report {
    let mut timings = Vec::new();
    let mut reference = None;
    if algos.contains(&Algo::Dp) {
        let (elapsed, out) = time(pairs, levenshtein_chars);
        timings.push(Timing { algo: Algo::Dp, elapsed, ops: pairs.len() });
        reference = Some(out);
    }
    let reference = reference.unwrap_or_else(|| time(pairs, levenshtein_chars).1);

    let mut bad = vec![false; pairs.len()];
    if algos.contains(&Algo::Banded) {
        let (elapsed, out) = time(pairs, |a, b| levenshtein_bounded_chars(a, b, band));
        timings.push(Timing { algo: Algo::Banded, elapsed, ops: pairs.len() });
        for (i, (got, &d)) in out.iter().zip(&reference).enumerate() {
            bad[i] |= *got != (d <= band).then_some(d);
        }
    }
    if algos.contains(&Algo::BitParallel) {
        let (elapsed, out) = time(pairs, levenshtein_bitparallel_chars);
        timings.push(Timing { algo: Algo::BitParallel, elapsed, ops: pairs.len() });
        for (i, (got, d)) in out.iter().zip(&reference).enumerate() {
            bad[i] |= got != d;
        }
    }

    Report {
        pairs: pairs.len(),
        band,
        timings,
        mismatches: bad.into_iter().filter(|&b| b).count(),
    }
}
