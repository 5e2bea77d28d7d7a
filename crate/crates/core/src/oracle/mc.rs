//! Monte Carlo estimate of the entangling power from its defining average
//! over Haar-random product inputs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::state::{linear_entropy, Cut, PureState};
use super::Unitary;
use crate::error::{Error, Result};
use crate::perm::worker_seed;

/// Samples drawn from one seeded stream. Fixed so results do not depend on
/// the number of worker threads.
pub const MC_BLOCK: usize = 4096;

/// Haar-random unit vector in `C^d` (normalized complex Gaussian).
pub fn haar_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 0.0 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Welford accumulator with the pairwise merge of Chan et al.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunningStats {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &RunningStats) -> RunningStats {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / n as f64;
        RunningStats { count: n, mean, m2 }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Sample standard deviation over `sqrt(count)`.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Averages `S_L(U |psi1> |psi2>)` over independent Haar-random inputs.
///
/// Block `b` of [`MC_BLOCK`] samples draws from `ChaCha8(seed ^ b)`, and blocks
/// are merged in index order, so the estimate is a pure function of
/// `(U, samples, seed)`.
pub fn mc_power(u: &Unitary, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples < 2 {
        return Err(Error::InsufficientSamples { min: 2, got: samples });
    }
    let deviation = u.unitarity_deviation();
    if !(deviation <= crate::tolerance::STRUCTURAL) {
        return Err(Error::NotUnitary { deviation });
    }
    let d = u.d();
    let cut = Cut::parse("1|2")?;
    let blocks = samples.div_ceil(MC_BLOCK);
    let per_block: Vec<Result<RunningStats>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = MC_BLOCK.min(samples - b * MC_BLOCK);
            let mut rng = ChaCha8Rng::seed_from_u64(worker_seed(seed, b as u64));
            let mut stats = RunningStats::default();
            for _ in 0..n {
                let a = haar_state(d, &mut rng);
                let c = haar_state(d, &mut rng);
                let input: Vec<Complex64> = a.iter().flat_map(|x| c.iter().map(move |y| x * y)).collect();
                let out = PureState::new(vec![d, d], u.apply(&input))?;
                stats.push(linear_entropy(&out, &cut)?);
            }
            Ok(stats)
        })
        .collect();
    let mut total = RunningStats::default();
    for s in per_block {
        total = total.merge(&s?);
    }
    Ok(McEstimate {
        mean: total.mean,
        std_error: total.std_error(),
        samples: total.count,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn haar_vectors_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..6 {
            let v = haar_state(d, &mut rng);
            let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn haar_first_moment_is_uniform() {
        // E|v_0|^2 = 1/d for a Haar vector
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = 3;
        let mut s = RunningStats::default();
        for _ in 0..20_000 {
            s.push(haar_state(d, &mut rng)[0].norm_sqr());
        }
        assert!((s.mean - 1.0 / 3.0).abs() < 5.0 * s.std_error());
    }

    #[test]
    fn stats_merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut all = RunningStats::default();
        xs.iter().for_each(|&x| all.push(x));
        let mut a = RunningStats::default();
        let mut b = RunningStats::default();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        let m = a.merge(&b);
        assert_eq!(m.count, all.count);
        assert!((m.mean - all.mean).abs() < 1e-12);
        assert!((m.m2 - all.m2).abs() < 1e-8);
    }

    #[test]
    fn identity_gives_exactly_zero() {
        for d in 2..=4 {
            let est = mc_power(&Unitary::identity(d).unwrap(), 1000, 3).unwrap();
            assert!(est.mean.abs() < 1e-12, "d={d} mean={}", est.mean);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let u = Unitary::from_biperm(&builtins::cnot()).unwrap();
        let a = mc_power(&u, 9000, 11).unwrap();
        let b = mc_power(&u, 9000, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 9000);
        let c = mc_power(&u, 9000, 12).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn errors() {
        let u = Unitary::identity(2).unwrap();
        assert!(matches!(mc_power(&u, 1, 0), Err(Error::InsufficientSamples { .. })));
    }
}
