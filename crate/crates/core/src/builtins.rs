//! Named permutations: the standard gates and the explicit extremal arrays.
//!
//! Permutation matrices are read with `m[s][t] = 1` iff flat index `s` is
//! sent to `t` (row = input).

use crate::classify::min_nonzero_perm;
use crate::error::{Error, Result};
use crate::latin::{construct_mols, special_d6_perm};
use crate::perm::BiPerm;

pub use crate::latin::special_d6_perm as d6_hat;

const CNOT_MATRIX: [[u8; 4]; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];

const M_MATRIX: [[u8; 4]; 4] = [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0]];

const R_MATRIX: [[u8; 9]; 9] = [
    [1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1],
    [0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0],
];

fn from_rows<const N: usize>(rows: &[[u8; N]; N]) -> BiPerm {
    let rows: Vec<Vec<u8>> = rows.iter().map(|r| r.to_vec()).collect();
    BiPerm::from_permutation_matrix(&rows).expect("embedded matrix is a permutation")
}

/// Controlled-NOT on two qubits.
pub fn cnot() -> BiPerm {
    from_rows(&CNOT_MATRIX)
}

/// The second maximal two-qubit permutation listed alongside CNOT.
pub fn matrix_m() -> BiPerm {
    from_rows(&M_MATRIX)
}

/// The 9x9 maximally entangling permutation built from a pair of
/// orthogonal Latin squares of side 3.
pub fn matrix_r() -> BiPerm {
    from_rows(&R_MATRIX)
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "identity", "swap", "cnot", "m", "r9", "d6hat", "min:<d>", "mols:<d>",
];

/// Resolves a builtin permutation by name. `d` is used by `identity` and
/// `swap` (default 2); `min:<d>` and `mols:<d>` carry their own dimension.
pub fn builtin(name: &str, d: Option<usize>) -> Result<BiPerm> {
    let parse_d = |s: &str| -> Result<usize> {
        s.parse().map_err(|_| Error::Parse {
            line: 1,
            column: name.find(':').map_or(1, |c| c + 2),
            message: format!("invalid dimension {s:?} in builtin {name:?}"),
        })
    };
    match name {
        "identity" => BiPerm::identity(d.unwrap_or(2)),
        "swap" => BiPerm::swap(d.unwrap_or(2)),
        "cnot" => Ok(cnot()),
        "m" => Ok(matrix_m()),
        "r9" => Ok(matrix_r()),
        "d6hat" => Ok(special_d6_perm()),
        _ => {
            if let Some(rest) = name.strip_prefix("min:") {
                min_nonzero_perm(parse_d(rest)?)
            } else if let Some(rest) = name.strip_prefix("mols:") {
                construct_mols(parse_d(rest)?).map(|pair| pair.superimpose())
            } else {
                Err(Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!(
                        "unknown builtin {name:?} (expected one of {})",
                        BUILTIN_NAMES.join(", ")
                    ),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::entangling_power;
    use crate::rational::Rational;

    #[test]
    fn cnot_is_flat_1243() {
        assert_eq!(cnot().one_line(), vec![1, 2, 4, 3]);
    }

    #[test]
    fn r_blocks_hold_the_superimposed_pair() {
        let k = [[1, 2, 3], [2, 3, 1], [3, 1, 2]];
        let l = [[1, 3, 2], [2, 1, 3], [3, 2, 1]];
        let want: Vec<Vec<(usize, usize)>> = (0..3)
            .map(|i| (0..3).map(|j| (k[i][j], l[i][j])).collect())
            .collect();
        assert_eq!(crate::entangle::block_array(&matrix_r()), Some(want));
        assert_eq!(
            matrix_r().k_matrix(),
            vec![vec![1, 2, 3], vec![3, 1, 2], vec![2, 3, 1]]
        );
        assert_eq!(
            matrix_r().l_matrix(),
            vec![vec![1, 3, 2], vec![3, 2, 1], vec![2, 1, 3]]
        );
        assert_eq!(crate::entangle::block_array(&cnot()), None);
    }

    #[test]
    fn two_qubit_gates_reach_four_ninths() {
        for p in [cnot(), matrix_m()] {
            // S * U swaps the output pair: (k, l) -> (l, k)
            let swapped_output = BiPerm::from_matrices(&p.l_matrix(), &p.k_matrix()).unwrap();
            for q in [p, swapped_output] {
                assert_eq!(entangling_power(&q).unwrap().epsilon, Rational::new(4, 9));
            }
        }
    }

    #[test]
    fn builtin_names() {
        assert_eq!(builtin("identity", Some(5)).unwrap().d(), 5);
        assert_eq!(builtin("swap", None).unwrap(), BiPerm::swap(2).unwrap());
        assert_eq!(builtin("min:4", None).unwrap().d(), 4);
        assert_eq!(builtin("mols:5", None).unwrap().d(), 5);
        assert!(matches!(builtin("mols:6", None), Err(Error::UnsupportedOrder { .. })));
        assert!(matches!(builtin("nope", None), Err(Error::Parse { .. })));
        assert!(matches!(builtin("min:x", None), Err(Error::Parse { .. })));
    }
}
