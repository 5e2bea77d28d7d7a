//! Entangling classes: exhaustive and sampled histograms over all
//! permutations of `[d] x [d]`, plus the extremal constructions and bounds.

mod checkpoint;
mod histogram;

pub use checkpoint::Checkpoint;
pub use histogram::{ClassHistogram, Mode, SampleStats};

use std::ops::Range;
use std::path::PathBuf;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::entangle::{epsilon_from_counts, q_of_cells, QScratch};
use crate::error::{Error, Result};
use crate::oracle::RunningStats;
use crate::perm::{
    factorial, for_each_flat_in_range, random_perm, worker_seed, BiPerm, ENUMERATION_MAX_D,
};
use crate::rational::Rational;

/// Permutations per exhaustive work unit (and per checkpoint file).
pub const EXHAUSTIVE_CHUNK: u64 = 5040;

/// Samples per seeded stream in sampled classification.
pub const SAMPLE_BLOCK: u64 = 4096;

/// Minimum sample size accepted by [`classify_sampled`].
pub const MIN_SAMPLES: u64 = 100;

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    /// Worker threads; `None` uses the global rayon pool, `Some(1)` runs inline.
    pub workers: Option<usize>,
    /// Permit exhaustive runs beyond `d = 3`.
    pub force: bool,
    /// Directory for per-chunk partial histograms; existing chunks are reused.
    pub checkpoint_dir: Option<PathBuf>,
}

fn run_with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Io(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Class counts indexed by `Q_P + Q_PS` for one rank range.
fn classify_range(d: usize, ranks: Range<u64>) -> Vec<u64> {
    let n = d * d;
    let mut by_q = vec![0u64; 2 * n * n + 1];
    let mut scratch = QScratch::default();
    let mut k = vec![0u8; n];
    let mut l = vec![0u8; n];
    let mut kt = vec![0u8; n];
    let mut lt = vec![0u8; n];
    let dd = d as u8;
    for_each_flat_in_range(n, ranks, |flat| {
        for (t, &v) in flat.iter().enumerate() {
            let (a, b) = (v / dd, v % dd);
            k[t] = a;
            l[t] = b;
            let (i, j) = (t / d, t % d);
            kt[j * d + i] = a;
            lt[j * d + i] = b;
        }
        let q = q_of_cells(d, &k, &l, &mut scratch) + q_of_cells(d, &kt, &lt, &mut scratch);
        by_q[q as usize] += 1;
    });
    by_q
}

fn histogram_from_q_counts(d: usize, by_q: &[u64], mode: Mode) -> Result<ClassHistogram> {
    let mut h = ClassHistogram::empty(d, mode);
    for (q, &count) in by_q.iter().enumerate() {
        if count > 0 {
            h.add(epsilon_from_counts(d, q as u64, 0)?, count);
        }
    }
    Ok(h)
}

/// Every permutation of `[d] x [d]` bucketed by exact entangling power.
pub fn classify_exhaustive(d: usize) -> Result<ClassHistogram> {
    classify_exhaustive_with(d, &ClassifyOptions::default())
}

pub fn classify_exhaustive_with(d: usize, opts: &ClassifyOptions) -> Result<ClassHistogram> {
    if d < 2 {
        return Err(Error::DegenerateDimension);
    }
    if d > ENUMERATION_MAX_D && !opts.force {
        return Err(Error::BudgetExceeded {
            what: format!("exhaustive classification of ({})! permutations for d = {d}", d * d),
        });
    }
    let total = factorial(d * d).ok_or_else(|| Error::Overflow {
        what: format!("({})! permutations", d * d),
    })?;
    let chunks: Vec<Range<u64>> = (0..total)
        .step_by(EXHAUSTIVE_CHUNK as usize)
        .map(|s| s..(s + EXHAUSTIVE_CHUNK).min(total))
        .collect();
    if let Some(dir) = &opts.checkpoint_dir {
        std::fs::create_dir_all(dir)?;
    }

    let work = |r: &Range<u64>| -> Result<ClassHistogram> {
        if let Some(dir) = &opts.checkpoint_dir {
            if let Some(cp) = Checkpoint::load_matching(dir, d, r)? {
                return Ok(cp.histogram);
            }
        }
        let h = histogram_from_q_counts(d, &classify_range(d, r.clone()), Mode::Exhaustive)?;
        if let Some(dir) = &opts.checkpoint_dir {
            Checkpoint {
                d,
                start: r.start,
                end: r.end,
                histogram: h.clone(),
            }
            .save(dir)?;
        }
        Ok(h)
    };

    let parts: Vec<Result<ClassHistogram>> = if opts.workers == Some(1) {
        chunks.iter().map(work).collect()
    } else {
        run_with_workers(opts.workers, || chunks.par_iter().map(work).collect())?
    };
    let mut h = ClassHistogram::empty(d, Mode::Exhaustive);
    for p in parts {
        h.merge(&p?)?;
    }
    Ok(h)
}

/// Histogram and mean over `samples` uniformly random permutations.
///
/// Block `b` of [`SAMPLE_BLOCK`] draws uses the stream `ChaCha8(seed ^ b)` and
/// blocks merge in index order, so the result depends only on
/// `(d, samples, seed)`.
pub fn classify_sampled(
    d: usize,
    samples: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<(ClassHistogram, SampleStats)> {
    if d < 2 {
        return Err(Error::DegenerateDimension);
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            min: MIN_SAMPLES as usize,
            got: samples as usize,
        });
    }
    let blocks = samples.div_ceil(SAMPLE_BLOCK);
    let block = |b: u64| -> Result<(ClassHistogram, RunningStats)> {
        let n = SAMPLE_BLOCK.min(samples - b * SAMPLE_BLOCK);
        let mut rng = ChaCha8Rng::seed_from_u64(worker_seed(seed, b));
        let mut scratch = QScratch::default();
        let mut h = ClassHistogram::empty(d, Mode::Sampled { seed, samples });
        let mut stats = RunningStats::default();
        for _ in 0..n {
            let p = random_perm(d, &mut rng)?;
            let e = crate::entangle::entangling_power_with(&p, &mut scratch)?.epsilon;
            stats.push(e.to_f64());
            h.add(e, 1);
        }
        Ok((h, stats))
    };
    let parts: Vec<Result<(ClassHistogram, RunningStats)>> = if workers == Some(1) {
        (0..blocks).map(block).collect()
    } else {
        run_with_workers(workers, || (0..blocks).into_par_iter().map(block).collect())?
    };
    let mut h = ClassHistogram::empty(d, Mode::Sampled { seed, samples });
    let mut stats = RunningStats::default();
    for p in parts {
        let (ph, ps) = p?;
        h.merge(&ph)?;
        stats = stats.merge(&ps);
    }
    let mean = h.mean()?.map_or(stats.mean, |m| m.to_f64());
    Ok((
        h,
        SampleStats {
            mean_epsilon: mean,
            std_error: stats.std_error(),
            samples,
            seed,
        },
    ))
}

/// Identity except that the last two cells of the bottom row trade images.
pub fn min_nonzero_perm(d: usize) -> Result<BiPerm> {
    if d < 2 {
        return Err(Error::InvalidDimension {
            d,
            reason: "needs d >= 2",
        });
    }
    let mut one_line: Vec<usize> = (1..=d * d).collect();
    one_line.swap(d * d - 2, d * d - 1);
    BiPerm::from_one_line(&one_line, d)
}

/// `8 (d-1) / (d (d+1)^2)`, the smallest nonzero entangling power of a permutation.
pub fn min_nonzero_epsilon(d: usize) -> Result<Rational> {
    if d < 2 {
        return Err(Error::DegenerateDimension);
    }
    let d = d as i64;
    Ok(Rational::new(8 * (d - 1), d * (d + 1) * (d + 1)))
}

/// `d / (d+1)`, the largest entangling power of any unitary.
pub fn max_epsilon(d: usize) -> Rational {
    Rational::new(d as i64, d as i64 + 1)
}

/// Upper bound `2 + (d^4 - d^2 - 8 (d-1)^2) / 2` on the number of classes.
pub fn class_bound(d: usize) -> Result<u64> {
    if d < 2 {
        return Err(Error::InvalidDimension {
            d,
            reason: "needs d >= 2",
        });
    }
    let d = d as u64;
    Ok(2 + (d.pow(4) - d * d - 8 * (d - 1) * (d - 1)) / 2)
}

/// Size of the non-entangling set and its share of all permutations.
#[derive(Clone, Debug, PartialEq)]
pub struct E0Stats {
    /// `2 (d!)^2`
    pub count: BigUint,
    /// `2 (d!)^2 / (d^2)!`
    pub fraction: BigRational,
}

pub fn e0_stats(d: usize) -> Result<E0Stats> {
    if d == 0 {
        return Err(Error::InvalidDimension {
            d,
            reason: "needs d >= 1",
        });
    }
    let fact = |n: usize| (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k));
    let count = BigUint::from(2u32) * fact(d) * fact(d);
    let fraction = BigRational::new(count.clone().into(), fact(d * d).into());
    Ok(E0Stats { count, fraction })
}
