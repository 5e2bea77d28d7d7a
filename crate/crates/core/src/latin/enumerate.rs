use rayon::prelude::*;

use super::LatinSquare;
use crate::error::{Error, Result};

/// Largest side enumerated exhaustively (161280 squares of side 5).
pub const LATIN_ENUMERATION_MAX_D: usize = 5;

/// Largest side for exhaustive orthogonal-pair counting.
pub const PAIR_COUNT_MAX_D: usize = 4;

/// Visits every Latin square of side `d` once, in lexicographic order of
/// the row-major cell sequence.
pub fn for_each_latin_square<F: FnMut(&LatinSquare)>(d: usize, mut f: F) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidDimension {
            d,
            reason: "side must be positive",
        });
    }
    if d > LATIN_ENUMERATION_MAX_D {
        return Err(Error::BudgetExceeded {
            what: format!("enumerating all Latin squares of side {d}"),
        });
    }
    let mut cells = vec![0u8; d * d];
    let mut row_used = vec![0u32; d];
    let mut col_used = vec![0u32; d];
    fill(d, 0, &mut cells, &mut row_used, &mut col_used, &mut f);
    Ok(())
}

fn fill<F: FnMut(&LatinSquare)>(
    d: usize,
    pos: usize,
    cells: &mut [u8],
    row_used: &mut [u32],
    col_used: &mut [u32],
    f: &mut F,
) {
    if pos == d * d {
        f(&LatinSquare::from_cells0_unchecked(d, cells.to_vec()));
        return;
    }
    let (i, j) = (pos / d, pos % d);
    for v in 0..d {
        let bit = 1u32 << v;
        if row_used[i] & bit != 0 || col_used[j] & bit != 0 {
            continue;
        }
        row_used[i] |= bit;
        col_used[j] |= bit;
        cells[pos] = v as u8;
        fill(d, pos + 1, cells, row_used, col_used, f);
        row_used[i] &= !bit;
        col_used[j] &= !bit;
    }
}

/// All Latin squares of side `d` (`d <= 5`).
pub fn enumerate_latin_squares(d: usize) -> Result<Vec<LatinSquare>> {
    let mut out = Vec::new();
    for_each_latin_square(d, |s| out.push(s.clone()))?;
    Ok(out)
}

/// Number of unordered pairs of orthogonal Latin squares of side `d` (`d <= 4`).
pub fn count_orthogonal_pairs(d: usize) -> Result<u64> {
    if d > PAIR_COUNT_MAX_D {
        return Err(Error::BudgetExceeded {
            what: format!("counting orthogonal pairs among all Latin squares of side {d}"),
        });
    }
    let squares = enumerate_latin_squares(d)?;
    // a square as, for each symbol, the bitmask of cells holding it
    let masks: Vec<Vec<u64>> = squares
        .iter()
        .map(|s| {
            let mut m = vec![0u64; d];
            for (t, &v) in s.cells0().iter().enumerate() {
                m[v as usize] |= 1 << t;
            }
            m
        })
        .collect();
    // orthogonal iff every symbol class of one meets every class of the other exactly once
    let count = (0..masks.len())
        .into_par_iter()
        .map(|a| {
            let ma = &masks[a];
            masks[a + 1..]
                .iter()
                .filter(|mb| {
                    ma.iter()
                        .all(|&x| mb.iter().all(|&y| (x & y).count_ones() == 1))
                })
                .count() as u64
        })
        .sum();
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latin::are_orthogonal;

    #[test]
    fn latin_square_counts() {
        assert_eq!(enumerate_latin_squares(1).unwrap().len(), 1);
        assert_eq!(enumerate_latin_squares(2).unwrap().len(), 2);
        assert_eq!(enumerate_latin_squares(3).unwrap().len(), 12);
        assert_eq!(enumerate_latin_squares(4).unwrap().len(), 576);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let all = enumerate_latin_squares(4).unwrap();
        for w in all.windows(2) {
            assert!(w[0].cells0() < w[1].cells0());
        }
    }

    #[test]
    fn enumeration_budget() {
        assert!(matches!(
            enumerate_latin_squares(6),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            count_orthogonal_pairs(5),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    /// Direct pairwise check with the public predicate.
    fn count_pairs_naive(d: usize) -> u64 {
        let all = enumerate_latin_squares(d).unwrap();
        let mut c = 0;
        for a in 0..all.len() {
            for b in a + 1..all.len() {
                c += are_orthogonal(&all[a], &all[b]) as u64;
            }
        }
        c
    }

    #[test]
    fn pair_counts() {
        assert_eq!(count_orthogonal_pairs(2).unwrap(), 0);
        assert_eq!(count_orthogonal_pairs(3).unwrap(), 36);
        assert_eq!(count_pairs_naive(3), 36);
        assert_eq!(count_orthogonal_pairs(4).unwrap(), 3456);
    }
}
