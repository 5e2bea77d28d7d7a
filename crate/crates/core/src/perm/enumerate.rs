use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;

use super::BiPerm;
use crate::error::{Error, Result};

/// Largest `d` enumerated without an explicit override (`9! = 362880` items).
pub const ENUMERATION_MAX_D: usize = 3;

// 20! is the largest factorial below 2^64.
const MAX_RANKED_N: usize = 20;

pub fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// Writes the lexicographically `rank`-th permutation of `0..buf.len()` into `buf`.
pub fn unrank_into(mut rank: u64, buf: &mut [u8]) {
    let n = buf.len();
    let mut pool: Vec<u8> = (0..n as u8).collect();
    for (pos, slot) in buf.iter_mut().enumerate() {
        let f = factorial(n - 1 - pos).expect("n <= 20");
        let idx = (rank / f) as usize;
        rank %= f;
        *slot = pool.remove(idx);
    }
}

/// Advances `buf` to the next permutation in lexicographic order.
/// Returns `false` (leaving `buf` untouched) at the last permutation.
pub fn next_permutation(buf: &mut [u8]) -> bool {
    let n = buf.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && buf[i - 1] >= buf[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while buf[j] <= buf[i - 1] {
        j -= 1;
    }
    buf.swap(i - 1, j);
    buf[i..].reverse();
    true
}

/// Calls `f` with the 0-based one-line form of every permutation of `[n]`
/// whose lexicographic rank lies in `ranks`.
pub fn for_each_flat_in_range<F: FnMut(&[u8])>(n: usize, ranks: Range<u64>, mut f: F) {
    if ranks.is_empty() {
        return;
    }
    let mut buf = vec![0u8; n];
    unrank_into(ranks.start, &mut buf);
    let mut remaining = ranks.end - ranks.start;
    loop {
        f(&buf);
        remaining -= 1;
        if remaining == 0 || !next_permutation(&mut buf) {
            break;
        }
    }
}

/// Lexicographic stream of grid permutations over a rank range.
pub struct PermIter {
    d: usize,
    buf: Vec<u8>,
    remaining: u64,
    started: bool,
}

impl PermIter {
    /// Items with lexicographic rank in `ranks` (ranks of the flat one-line form).
    pub fn range(d: usize, ranks: Range<u64>) -> Result<Self> {
        let n = d * d;
        let total = total_perms(d)?;
        if ranks.end > total || ranks.start > ranks.end {
            return Err(Error::IndexOutOfRange {
                index: ranks.end as usize,
                max: total as usize,
            });
        }
        let mut buf = vec![0u8; n];
        unrank_into(ranks.start.min(total.saturating_sub(1)), &mut buf);
        Ok(PermIter {
            d,
            buf,
            remaining: ranks.end - ranks.start,
            started: false,
        })
    }
}

impl Iterator for PermIter {
    type Item = BiPerm;

    fn next(&mut self) -> Option<BiPerm> {
        if self.remaining == 0 {
            return None;
        }
        if self.started && !next_permutation(&mut self.buf) {
            self.remaining = 0;
            return None;
        }
        self.started = true;
        self.remaining -= 1;
        Some(BiPerm::from_flat0_unchecked(self.d, &self.buf))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}

fn total_perms(d: usize) -> Result<u64> {
    let n = d * d;
    if d == 0 {
        return Err(Error::InvalidDimension {
            d,
            reason: "dimension must be positive",
        });
    }
    if n > MAX_RANKED_N {
        return Err(Error::Overflow {
            what: format!("({n})! does not fit in 64 bits"),
        });
    }
    Ok(factorial(n).expect("n <= 20"))
}

/// Every permutation of `[d] x [d]` exactly once, lexicographic in the
/// flat one-line form. Refuses `d > 3` unless `allow_large` is set.
pub fn enumerate_perms(d: usize, allow_large: bool) -> Result<PermIter> {
    if d > ENUMERATION_MAX_D && !allow_large {
        return Err(Error::BudgetExceeded {
            what: format!("enumerating all ({})! permutations for d = {d}", d * d),
        });
    }
    let total = total_perms(d)?;
    PermIter::range(d, 0..total)
}

/// Uniformly random grid permutation (Fisher-Yates over the flat form).
pub fn random_perm<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<BiPerm> {
    if d == 0 || d > super::MAX_DIMENSION {
        return Err(Error::InvalidDimension {
            d,
            reason: "dimension must be in 1..=215",
        });
    }
    let mut k = Vec::with_capacity(d * d);
    let mut l = Vec::with_capacity(d * d);
    let mut image: Vec<u32> = (0..(d * d) as u32).collect();
    image.shuffle(rng);
    for v in image {
        k.push((v as usize / d) as u8);
        l.push((v as usize % d) as u8);
    }
    BiPerm::from_cells0(d, k, l)
}

/// Seed of the independent stream owned by worker (or block) `index`.
pub fn worker_seed(base: u64, index: u64) -> u64 {
    base ^ index
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn counts() {
        assert_eq!(enumerate_perms(2, false).unwrap().count(), 24);
        assert_eq!(enumerate_perms(3, false).unwrap().count(), 362_880);
        assert_eq!(enumerate_perms(1, false).unwrap().count(), 1);
    }

    #[test]
    fn first_is_identity() {
        for d in 1..=3 {
            let first = enumerate_perms(d, false).unwrap().next().unwrap();
            assert_eq!(first, BiPerm::identity(d).unwrap());
        }
    }

    #[test]
    fn budget() {
        assert!(matches!(
            enumerate_perms(4, false),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(enumerate_perms(4, true).is_ok());
        assert!(matches!(enumerate_perms(5, true), Err(Error::Overflow { .. })));
    }

    #[test]
    fn lexicographic_and_distinct() {
        let all: Vec<Vec<usize>> = enumerate_perms(2, false)
            .unwrap()
            .map(|p| p.one_line())
            .collect();
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn ranges_partition_the_stream() {
        let whole: Vec<_> = enumerate_perms(2, false).unwrap().collect();
        let mut pieces = Vec::new();
        for r in [0..5u64, 5..5, 5..17, 17..24] {
            pieces.extend(PermIter::range(2, r).unwrap());
        }
        assert_eq!(whole, pieces);
        assert!(PermIter::range(2, 0..25).is_err());
    }

    #[test]
    fn unrank_matches_stepping() {
        let mut buf = vec![0u8; 5];
        unrank_into(0, &mut buf);
        for rank in 1..120u64 {
            assert!(next_permutation(&mut buf));
            let mut direct = vec![0u8; 5];
            unrank_into(rank, &mut direct);
            assert_eq!(buf, direct);
        }
        assert!(!next_permutation(&mut buf));
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_perm(4, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = random_perm(4, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_is_uniform_on_d2() {
        // 24 cells, 10^5 draws; every frequency within 5 standard errors of 1/24.
        let draws = 100_000u64;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..draws {
            *counts.entry(random_perm(2, &mut rng).unwrap().one_line()).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 24);
        let p = 1.0 / 24.0;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        let mut chi2 = 0.0;
        let expected = draws as f64 * p;
        for &c in counts.values() {
            let freq = c as f64 / draws as f64;
            assert!((freq - p).abs() < 5.0 * se, "freq {freq}");
            chi2 += (c as f64 - expected).powi(2) / expected;
        }
        // 23 degrees of freedom; 99.9% quantile is about 49.7
        assert!(chi2 < 49.7, "chi2 {chi2}");
    }
}
