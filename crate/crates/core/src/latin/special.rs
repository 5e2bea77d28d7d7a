//! Explicit side-6 data.
//!
//! No orthogonal pair of side 6 exists, so the largest entangling power of a
//! `36 x 36` permutation is below `6/7`. [`special_d6_perm`] is a permutation
//! reaching `Q_P = 40`, `Q_PS = 36`, i.e. `eps = 628/735`.

use super::LatinSquare;
use crate::perm::BiPerm;

/// Cell `(i, j)` is the two-digit pair `kl` with `P(i, j) = (k, l)`.
const D6_HAT: [[u8; 6]; 6] = [
    [11, 22, 33, 44, 55, 66],
    [24, 13, 46, 35, 62, 51],
    [56, 65, 12, 21, 43, 34],
    [63, 54, 25, 16, 31, 42],
    [45, 36, 61, 52, 14, 23],
    [32, 41, 53, 64, 26, 15],
];

/// A second side-6 array built from two nearly orthogonal squares. It lists
/// the pairs 33 and 44 twice each and is therefore not a permutation.
const D6_TILDE: [[u8; 6]; 6] = [
    [11, 22, 33, 44, 55, 66],
    [23, 14, 45, 36, 61, 52],
    [32, 41, 64, 53, 16, 25],
    [46, 35, 51, 62, 24, 13],
    [54, 63, 26, 15, 42, 31],
    [65, 56, 12, 21, 33, 44],
];

const NEAR_FIRST: [[u8; 6]; 6] = [
    [1, 2, 3, 4, 5, 6],
    [2, 1, 4, 3, 6, 5],
    [3, 4, 6, 5, 1, 2],
    [4, 3, 5, 6, 2, 1],
    [5, 6, 2, 1, 4, 3],
    [6, 5, 1, 2, 3, 4],
];

const NEAR_SECOND: [[u8; 6]; 6] = [
    [1, 2, 3, 4, 5, 6],
    [3, 4, 5, 6, 1, 2],
    [2, 1, 4, 3, 6, 5],
    [6, 5, 1, 2, 4, 3],
    [4, 3, 6, 5, 2, 1],
    [5, 6, 2, 1, 3, 4],
];

fn split_pairs(a: &[[u8; 6]; 6]) -> Vec<Vec<(usize, usize)>> {
    a.iter()
        .map(|r| r.iter().map(|&c| ((c / 10) as usize, (c % 10) as usize)).collect())
        .collect()
}

/// The side-6 permutation with `Q_P = 40`, `Q_PS = 36`.
pub fn special_d6_perm() -> BiPerm {
    BiPerm::from_pair_array(&split_pairs(&D6_HAT)).expect("embedded array is a permutation")
}

/// The superimposition of [`near_orthogonal_d6_squares`] as a pair array.
pub fn superimposed_d6_array() -> Vec<Vec<(usize, usize)>> {
    split_pairs(&D6_TILDE)
}

/// Two Latin squares of side 6 that agree with orthogonality on all but
/// four cells.
pub fn near_orthogonal_d6_squares() -> (LatinSquare, LatinSquare) {
    let rows = |a: &[[u8; 6]; 6]| -> Vec<Vec<usize>> {
        a.iter().map(|r| r.iter().map(|&v| v as usize).collect()).collect()
    };
    (
        LatinSquare::from_rows(&rows(&NEAR_FIRST)).expect("embedded square is Latin"),
        LatinSquare::from_rows(&rows(&NEAR_SECOND)).expect("embedded square is Latin"),
    )
}
