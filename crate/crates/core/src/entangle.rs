//! Exact entangling power of grid permutations from rectangle counts.
//!
//! For a permutation `P` with matrices `K`, `L`, the rectangle count is
//!
//! ```text
//! Q_P = sum_{i,j,m,n} a_ijm a_ijn b_imn b_jmn,
//!   a_ijm = [l_im == l_jm],  b_imn = [k_im == k_in]
//! ```
//!
//! and `eps(P) = (d^4 + d^2 - Q_P - Q_PS) / (d (d-1) (d+1)^2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::BiPerm;
use crate::rational::Rational;

/// `(d, Q_P, Q_PS, eps)` for one permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerReport {
    pub d: usize,
    pub q_p: u64,
    pub q_ps: u64,
    pub epsilon: Rational,
}

#[derive(Serialize, Deserialize)]
struct PowerReportRepr {
    d: usize,
    q_p: u64,
    q_ps: u64,
    epsilon: Rational,
    epsilon_float: f64,
}

impl Serialize for PowerReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PowerReportRepr {
            d: self.d,
            q_p: self.q_p,
            q_ps: self.q_ps,
            epsilon: self.epsilon,
            epsilon_float: self.epsilon.to_f64(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PowerReport {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = PowerReportRepr::deserialize(de)?;
        Ok(PowerReport {
            d: r.d,
            q_p: r.q_p,
            q_ps: r.q_ps,
            epsilon: r.epsilon,
        })
    }
}

/// Denominator `d (d-1) (d+1)^2` of the entangling power.
pub fn power_denominator(d: usize) -> u64 {
    let d = d as u64;
    d * (d - 1) * (d + 1) * (d + 1)
}

/// `eps` from the two rectangle counts.
pub fn epsilon_from_counts(d: usize, q_p: u64, q_ps: u64) -> Result<Rational> {
    if d < 2 {
        return Err(Error::DegenerateDimension);
    }
    let d2 = (d * d) as i64;
    let num = d2 * d2 + d2 - q_p as i64 - q_ps as i64;
    Ok(Rational::new(num, power_denominator(d) as i64))
}

/// Reusable buffer for [`q_of_cells`].
#[derive(Default)]
pub struct QScratch {
    counts: Vec<u32>,
    touched: Vec<usize>,
}

/// `Q_P` over 0-based row-major symbol arrays in `O(d^3)`.
///
/// For each row pair `(i, j)` the columns with `l_im == l_jm` are grouped by
/// the key `(k_im, k_jm)`; each group of size `g` contributes `g^2`.
pub fn q_of_cells(d: usize, k: &[u8], l: &[u8], scratch: &mut QScratch) -> u64 {
    scratch.counts.clear();
    scratch.counts.resize(d * d, 0);
    scratch.touched.clear();
    let mut total = 0u64;
    for i in 0..d {
        let (ki, li) = (&k[i * d..(i + 1) * d], &l[i * d..(i + 1) * d]);
        for j in i..d {
            let (kj, lj) = (&k[j * d..(j + 1) * d], &l[j * d..(j + 1) * d]);
            let mut sub = 0u64;
            for m in 0..d {
                if li[m] == lj[m] {
                    let key = ki[m] as usize * d + kj[m] as usize;
                    let c = &mut scratch.counts[key];
                    if *c == 0 {
                        scratch.touched.push(key);
                    }
                    // (c+1)^2 - c^2
                    sub += 2 * *c as u64 + 1;
                    *c += 1;
                }
            }
            for &key in &scratch.touched {
                scratch.counts[key] = 0;
            }
            scratch.touched.clear();
            total += if i == j { sub } else { 2 * sub };
        }
    }
    total
}

/// Rectangle count `Q_P`.
pub fn q_of(p: &BiPerm) -> u64 {
    q_of_cells(p.d(), p.k0(), p.l0(), &mut QScratch::default())
}

/// The literal quadruple sum, kept as the reference for [`q_of`].
pub fn q_of_reference(p: &BiPerm) -> u64 {
    let d = p.d();
    let (k, l) = (p.k0(), p.l0());
    let a = |i: usize, j: usize, m: usize| (l[i * d + m] == l[j * d + m]) as u64;
    let b = |i: usize, m: usize, n: usize| (k[i * d + m] == k[i * d + n]) as u64;
    let mut q = 0;
    for i in 0..d {
        for j in 0..d {
            for m in 0..d {
                for n in 0..d {
                    q += a(i, j, m) * a(i, j, n) * b(i, m, n) * b(j, m, n);
                }
            }
        }
    }
    q
}

/// Entangling power of `p` as an exact fraction, with both rectangle counts.
pub fn entangling_power(p: &BiPerm) -> Result<PowerReport> {
    let mut scratch = QScratch::default();
    entangling_power_with(p, &mut scratch)
}

pub fn entangling_power_with(p: &BiPerm, scratch: &mut QScratch) -> Result<PowerReport> {
    let d = p.d();
    if d < 2 {
        return Err(Error::DegenerateDimension);
    }
    let q_p = q_of_cells(d, p.k0(), p.l0(), scratch);
    let ps = p.compose_with_swap();
    let q_ps = q_of_cells(d, ps.k0(), ps.l0(), scratch);
    Ok(PowerReport {
        d,
        q_p,
        q_ps,
        epsilon: epsilon_from_counts(d, q_p, q_ps)?,
    })
}

/// Indicator bits for the rectangle on rows `i, j` and columns `m, n` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RectangleFlags {
    pub i: usize,
    pub j: usize,
    pub m: usize,
    pub n: usize,
    pub a_ijm: bool,
    pub a_ijn: bool,
    pub b_imn: bool,
    pub b_jmn: bool,
    pub r_ijmn: bool,
}

pub fn rectangle_flags(p: &BiPerm, i: usize, j: usize, m: usize, n: usize) -> Result<RectangleFlags> {
    let d = p.d();
    for idx in [i, j, m, n] {
        if idx == 0 || idx > d {
            return Err(Error::IndexOutOfRange { index: idx, max: d });
        }
    }
    let (k, l) = (p.k0(), p.l0());
    let (i0, j0, m0, n0) = (i - 1, j - 1, m - 1, n - 1);
    let a_ijm = l[i0 * d + m0] == l[j0 * d + m0];
    let a_ijn = l[i0 * d + n0] == l[j0 * d + n0];
    let b_imn = k[i0 * d + m0] == k[i0 * d + n0];
    let b_jmn = k[j0 * d + m0] == k[j0 * d + n0];
    Ok(RectangleFlags {
        i,
        j,
        m,
        n,
        a_ijm,
        a_ijn,
        b_imn,
        b_jmn,
        r_ijmn: a_ijm && a_ijn && b_imn && b_jmn,
    })
}

/// The four block conditions that characterise maximal entangling power.
///
/// The `d^2 x d^2` matrix is read with rows indexed by the input `(i, j)` and
/// columns by the output `(k, l)`, cut into `d x d` blocks: block `(i, k)` has
/// a one at sub-position `(j, l)` exactly when `P(i, j) = (k, l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockConditions {
    /// Every block contains exactly one nonzero entry.
    pub one_per_block: bool,
    /// All blocks differ.
    pub blocks_distinct: bool,
    /// Nonzeros sharing a block-row sit in different sub-columns.
    pub block_row_distinct_sub_columns: bool,
    /// Nonzeros sharing a block-column sit in different sub-rows.
    pub block_col_distinct_sub_rows: bool,
}

impl BlockConditions {
    pub fn all(&self) -> bool {
        self.one_per_block
            && self.blocks_distinct
            && self.block_row_distinct_sub_columns
            && self.block_col_distinct_sub_rows
    }
}

/// The `d x d` array whose cell `(i, k)` is the 1-based sub-position `(j, l)`
/// of the single nonzero entry in block `(i, k)` of the permutation matrix,
/// or `None` when some block is empty or holds several entries.
pub fn block_array(p: &BiPerm) -> Option<Vec<Vec<(usize, usize)>>> {
    let d = p.d();
    let mut cells = vec![vec![None; d]; d];
    for i in 1..=d {
        for j in 1..=d {
            let (k, l) = p.image(i, j);
            if cells[i - 1][k - 1].replace((j, l)).is_some() {
                return None;
            }
        }
    }
    cells.into_iter().map(|row| row.into_iter().collect()).collect()
}

pub fn check_block_conditions(p: &BiPerm) -> BlockConditions {
    let d = p.d();
    let (k, l) = (p.k0(), p.l0());
    // contents[block] = sorted sub-positions
    let mut contents: Vec<Vec<(u8, u8)>> = vec![Vec::new(); d * d];
    for i in 0..d {
        for j in 0..d {
            let t = i * d + j;
            contents[i * d + k[t] as usize].push((j as u8, l[t]));
        }
    }
    let one_per_block = contents.iter().all(|c| c.len() == 1);

    let mut sorted: Vec<Vec<(u8, u8)>> = contents
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    sorted.sort_unstable();
    let blocks_distinct = sorted.windows(2).all(|w| w[0] != w[1]);

    fn distinct(d: usize, mut it: impl Iterator<Item = u8>) -> bool {
        let mut seen = vec![false; d];
        it.all(|v| !std::mem::replace(&mut seen[v as usize], true))
    }
    // block-row i: sub-columns l over all entries
    let block_row_distinct_sub_columns = (0..d).all(|i| {
        distinct(d, (0..d).flat_map(|kk| contents[i * d + kk].iter().map(|&(_, sc)| sc)))
    });
    // block-column k: sub-rows j over all entries
    let block_col_distinct_sub_rows = (0..d).all(|kk| {
        distinct(d, (0..d).flat_map(|i| contents[i * d + kk].iter().map(|&(sr, _)| sr)))
    });

    BlockConditions {
        one_per_block,
        blocks_distinct,
        block_row_distinct_sub_columns,
        block_col_distinct_sub_rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::perm::{detect_non_entangling, enumerate_perms};

    fn cnot() -> BiPerm {
        BiPerm::from_one_line(&[1, 2, 4, 3], 2).unwrap()
    }

    #[test]
    fn q_examples() {
        for d in 1..=6u64 {
            let id = BiPerm::identity(d as usize).unwrap();
            let sw = BiPerm::swap(d as usize).unwrap();
            assert_eq!(q_of(&id), d.pow(4));
            assert_eq!(q_of(&sw), d.pow(2));
        }
        // hand evaluation of the 16 terms: rows agree in L on column 1 only
        assert_eq!(q_of_reference(&cnot()), 8);
        assert_eq!(q_of(&cnot()), 8);
        assert_eq!(q_of(&cnot().compose_with_swap()), 4);
    }

    #[test]
    fn power_examples() {
        let r = entangling_power(&BiPerm::identity(3).unwrap()).unwrap();
        assert_eq!(r.epsilon, Rational::ZERO);
        let r = entangling_power(&builtins::matrix_r()).unwrap();
        assert_eq!(r.epsilon, Rational::new(3, 4));
        let r = entangling_power(&cnot()).unwrap();
        assert_eq!(r.epsilon, Rational::new(4, 9));
        assert_eq!(
            entangling_power(&BiPerm::identity(1).unwrap()),
            Err(Error::DegenerateDimension)
        );
    }

    #[test]
    fn rectangle_examples() {
        let id = BiPerm::identity(3).unwrap();
        let sw = BiPerm::swap(3).unwrap();
        for (i, j, m, n) in [(1, 2, 1, 3), (3, 3, 2, 2), (1, 3, 2, 2)] {
            let f = rectangle_flags(&id, i, j, m, n).unwrap();
            assert!(f.a_ijm && f.a_ijn && f.b_imn && f.b_jmn && f.r_ijmn);
        }
        assert!(!rectangle_flags(&sw, 1, 2, 1, 3).unwrap().r_ijmn);
        for p in enumerate_perms(2, false).unwrap() {
            for i in 1..=2 {
                for m in 1..=2 {
                    assert!(rectangle_flags(&p, i, i, m, m).unwrap().r_ijmn);
                }
            }
        }
        assert_eq!(
            rectangle_flags(&id, 0, 1, 1, 1),
            Err(Error::IndexOutOfRange { index: 0, max: 3 })
        );
        assert!(rectangle_flags(&id, 1, 1, 1, 4).is_err());
    }

    #[test]
    fn rectangle_sum_and_symmetry() {
        let p = builtins::d6_hat();
        let d = p.d();
        let mut total = 0;
        for i in 1..=d {
            for j in 1..=d {
                for m in 1..=d {
                    for n in 1..=d {
                        let f = rectangle_flags(&p, i, j, m, n).unwrap();
                        assert_eq!(f.r_ijmn, rectangle_flags(&p, j, i, m, n).unwrap().r_ijmn);
                        assert_eq!(f.r_ijmn, rectangle_flags(&p, i, j, n, m).unwrap().r_ijmn);
                        total += f.r_ijmn as u64;
                    }
                }
            }
        }
        assert_eq!(total, q_of(&p));
    }

    #[test]
    fn block_condition_examples() {
        assert!(check_block_conditions(&builtins::matrix_r()).all());

        let id = check_block_conditions(&BiPerm::identity(3).unwrap());
        assert!(!id.one_per_block);
        assert!(!id.blocks_distinct);

        let sw = check_block_conditions(&BiPerm::swap(3).unwrap());
        assert!(sw.one_per_block);
        assert!(sw.blocks_distinct);
        assert!(!sw.block_row_distinct_sub_columns);
        assert!(!sw.block_col_distinct_sub_rows);
    }

    #[test]
    fn block_conditions_iff_maximal_on_d3() {
        let max = Rational::new(3, 4);
        for p in enumerate_perms(3, false).unwrap().step_by(7) {
            let e = entangling_power(&p).unwrap().epsilon;
            assert_eq!(check_block_conditions(&p).all(), e == max);
        }
    }

    #[test]
    fn exhaustive_d2_fast_equals_reference() {
        for p in enumerate_perms(2, false).unwrap() {
            assert_eq!(q_of(&p), q_of_reference(&p));
            let w = detect_non_entangling(&p);
            let e = entangling_power(&p).unwrap().epsilon;
            assert_eq!(w.is_some(), e.is_zero());
        }
    }

    #[test]
    fn report_json_shape() {
        let r = entangling_power(&cnot()).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"d":2,"q_p":8,"q_ps":4,"epsilon":{"num":4,"den":9},"epsilon_float":0.4444444444444444}"#
        );
        let back: PowerReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
