//! Permutations of the product basis `[d] x [d]`.
//!
//! The public surface is 1-based throughout: a [`BiPerm`] sends the grid cell
//! `(i, j)` to `(k_ij, l_ij)` with all four values in `1..=d`. Flat indices
//! follow the row-major convention `t = (i - 1) * d + j`.

mod enumerate;
mod text;

pub use enumerate::{
    enumerate_perms, factorial, for_each_flat_in_range, next_permutation, random_perm,
    unrank_into, worker_seed, PermIter, ENUMERATION_MAX_D,
};

use crate::error::{Error, Result};

/// Largest supported local dimension. Keeps `d^4` below `2^63`.
pub const MAX_DIMENSION: usize = 215;

/// A permutation of `[n]` in one-line form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FlatPerm {
    // 0-based images
    image: Vec<u32>,
}

impl FlatPerm {
    /// Builds a permutation from its 1-based one-line form.
    pub fn new(one_line: &[usize]) -> Result<Self> {
        let n = one_line.len();
        let mut seen = vec![false; n];
        let mut image = Vec::with_capacity(n);
        for &v in one_line {
            if v == 0 || v > n {
                return Err(Error::ValueOutOfRange { value: v, max: n });
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::NotBijection { value: v });
            }
            image.push((v - 1) as u32);
        }
        Ok(FlatPerm { image })
    }

    pub fn identity(n: usize) -> Self {
        FlatPerm {
            image: (0..n as u32).collect(),
        }
    }

    pub(crate) fn from_zero_based_unchecked(image: Vec<u32>) -> Self {
        FlatPerm { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// Image of `t` (1-based).
    pub fn apply(&self, t: usize) -> usize {
        self.image[t - 1] as usize + 1
    }

    /// The 1-based one-line form.
    pub fn one_line(&self) -> Vec<usize> {
        self.image.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }
}

/// A permutation of the grid `[d] x [d]`, stored as the matrix pair `(K, L)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiPerm {
    d: usize,
    // row-major, 0-based symbols
    k: Vec<u8>,
    l: Vec<u8>,
}

fn check_dimension(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidDimension {
            d,
            reason: "dimension must be positive",
        });
    }
    if d > MAX_DIMENSION {
        return Err(Error::InvalidDimension {
            d,
            reason: "dimension exceeds 215 (d^4 must stay below 2^63)",
        });
    }
    Ok(())
}

impl BiPerm {
    /// Builds from 0-based row-major symbol arrays, validating the bijection.
    pub(crate) fn from_cells0(d: usize, k: Vec<u8>, l: Vec<u8>) -> Result<Self> {
        check_dimension(d)?;
        let n = d * d;
        if k.len() != n || l.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: k.len().min(l.len()),
            });
        }
        let mut seen = vec![false; n];
        for (&a, &b) in k.iter().zip(&l) {
            let (a, b) = (a as usize, b as usize);
            if a >= d {
                return Err(Error::ValueOutOfRange { value: a + 1, max: d });
            }
            if b >= d {
                return Err(Error::ValueOutOfRange { value: b + 1, max: d });
            }
            if std::mem::replace(&mut seen[a * d + b], true) {
                return Err(Error::NotBijection { value: a * d + b + 1 });
            }
        }
        Ok(BiPerm { d, k, l })
    }

    /// Builds from a flat 0-based image slice of length `d^2`, trusting it is a bijection.
    pub(crate) fn from_flat0_unchecked(d: usize, image: &[u8]) -> Self {
        let dd = d as u8;
        BiPerm {
            d,
            k: image.iter().map(|&v| v / dd).collect(),
            l: image.iter().map(|&v| v % dd).collect(),
        }
    }

    /// Reads a permutation of `[d^2]` as a grid permutation (row-major flattening).
    pub fn from_flat(p: &FlatPerm, d: usize) -> Result<Self> {
        check_dimension(d)?;
        if p.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                actual: p.len(),
            });
        }
        let k = p.image.iter().map(|&v| (v as usize / d) as u8).collect();
        let l = p.image.iter().map(|&v| (v as usize % d) as u8).collect();
        Ok(BiPerm { d, k, l })
    }

    /// Builds from a 1-based one-line form of a permutation of `[d^2]`.
    pub fn from_one_line(one_line: &[usize], d: usize) -> Result<Self> {
        let p = FlatPerm::new(one_line)?;
        Self::from_flat(&p, d)
    }

    /// Builds from the 1-based matrices `K = (k_ij)` and `L = (l_ij)`.
    pub fn from_matrices(k: &[Vec<usize>], l: &[Vec<usize>]) -> Result<Self> {
        let d = k.len();
        check_dimension(d)?;
        let flatten = |m: &[Vec<usize>]| -> Result<Vec<u8>> {
            if m.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: m.len(),
                });
            }
            let mut out = Vec::with_capacity(d * d);
            for row in m {
                if row.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        actual: row.len(),
                    });
                }
                for &v in row {
                    if v == 0 || v > d {
                        return Err(Error::ValueOutOfRange { value: v, max: d });
                    }
                    out.push((v - 1) as u8);
                }
            }
            Ok(out)
        };
        Self::from_cells0(d, flatten(k)?, flatten(l)?)
    }

    /// Builds from a `d x d` array whose cell `(i, j)` holds the pair `(k_ij, l_ij)`.
    pub fn from_pair_array(cells: &[Vec<(usize, usize)>]) -> Result<Self> {
        let k: Vec<Vec<usize>> = cells.iter().map(|r| r.iter().map(|c| c.0).collect()).collect();
        let l: Vec<Vec<usize>> = cells.iter().map(|r| r.iter().map(|c| c.1).collect()).collect();
        Self::from_matrices(&k, &l)
    }

    /// Reads a `d^2 x d^2` 0/1 permutation matrix with the convention
    /// `m[s][t] = 1` iff the permutation sends flat index `s` to `t`.
    pub fn from_permutation_matrix(m: &[Vec<u8>]) -> Result<Self> {
        let n = m.len();
        let d = (n as f64).sqrt().round() as usize;
        if d * d != n {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                actual: n,
            });
        }
        let mut one_line = Vec::with_capacity(n);
        for row in m {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            let ones: Vec<usize> = row
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(t, _)| t + 1)
                .collect();
            match ones.as_slice() {
                [t] => one_line.push(*t),
                _ => {
                    return Err(Error::NotBijection {
                        value: one_line.len() + 1,
                    })
                }
            }
        }
        Self::from_one_line(&one_line, d)
    }

    /// `(i, j) -> (i, j)`.
    pub fn identity(d: usize) -> Result<Self> {
        check_dimension(d)?;
        let k = (0..d * d).map(|t| (t / d) as u8).collect();
        let l = (0..d * d).map(|t| (t % d) as u8).collect();
        Ok(BiPerm { d, k, l })
    }

    /// `(i, j) -> (j, i)`.
    pub fn swap(d: usize) -> Result<Self> {
        check_dimension(d)?;
        let k = (0..d * d).map(|t| (t % d) as u8).collect();
        let l = (0..d * d).map(|t| (t / d) as u8).collect();
        Ok(BiPerm { d, k, l })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `(k_ij, l_ij)` for 1-based `(i, j)`.
    pub fn image(&self, i: usize, j: usize) -> (usize, usize) {
        let t = (i - 1) * self.d + (j - 1);
        (self.k[t] as usize + 1, self.l[t] as usize + 1)
    }

    pub fn k_matrix(&self) -> Vec<Vec<usize>> {
        self.k
            .chunks(self.d)
            .map(|r| r.iter().map(|&v| v as usize + 1).collect())
            .collect()
    }

    pub fn l_matrix(&self) -> Vec<Vec<usize>> {
        self.l
            .chunks(self.d)
            .map(|r| r.iter().map(|&v| v as usize + 1).collect())
            .collect()
    }

    pub(crate) fn k0(&self) -> &[u8] {
        &self.k
    }

    pub(crate) fn l0(&self) -> &[u8] {
        &self.l
    }

    pub fn to_flat(&self) -> FlatPerm {
        let d = self.d as u32;
        FlatPerm::from_zero_based_unchecked(
            self.k
                .iter()
                .zip(&self.l)
                .map(|(&a, &b)| a as u32 * d + b as u32)
                .collect(),
        )
    }

    /// The 1-based one-line form of the flattened permutation.
    pub fn one_line(&self) -> Vec<usize> {
        self.to_flat().one_line()
    }

    /// The product `P S`, i.e. the permutation `(i, j) -> P(j, i)`.
    pub fn compose_with_swap(&self) -> BiPerm {
        let d = self.d;
        let mut k = vec![0u8; d * d];
        let mut l = vec![0u8; d * d];
        for i in 0..d {
            for j in 0..d {
                k[i * d + j] = self.k[j * d + i];
                l[i * d + j] = self.l[j * d + i];
            }
        }
        BiPerm { d, k, l }
    }

    /// Inverse permutation of the grid.
    pub fn inverse(&self) -> BiPerm {
        let d = self.d;
        let mut k = vec![0u8; d * d];
        let mut l = vec![0u8; d * d];
        for t in 0..d * d {
            let s = self.k[t] as usize * d + self.l[t] as usize;
            k[s] = (t / d) as u8;
            l[s] = (t % d) as u8;
        }
        BiPerm { d, k, l }
    }
}

impl std::fmt::Debug for BiPerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BiPerm")
            .field("d", &self.d)
            .field("k", &self.k_matrix())
            .field("l", &self.l_matrix())
            .finish()
    }
}

/// How a non-entangling permutation factors into local permutations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// `(i, j) -> (p_a(i), p_b(j))`
    IdentityLike,
    /// `(i, j) -> (p_a(j), p_b(i))`
    SwapLike,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonEntanglingWitness {
    pub kind: WitnessKind,
    pub p_a: FlatPerm,
    pub p_b: FlatPerm,
}

impl NonEntanglingWitness {
    /// Rebuilds the grid permutation described by this witness.
    pub fn reconstruct(&self) -> BiPerm {
        let d = self.p_a.len();
        let mut k = Vec::with_capacity(d * d);
        let mut l = Vec::with_capacity(d * d);
        for i in 1..=d {
            for j in 1..=d {
                let (a, b) = match self.kind {
                    WitnessKind::IdentityLike => (self.p_a.apply(i), self.p_b.apply(j)),
                    WitnessKind::SwapLike => (self.p_a.apply(j), self.p_b.apply(i)),
                };
                k.push((a - 1) as u8);
                l.push((b - 1) as u8);
            }
        }
        BiPerm { d, k, l }
    }
}

/// Returns a witness when `p` is a product of local permutations, optionally
/// followed by the swap. These are exactly the permutations that never
/// create entanglement.
pub fn detect_non_entangling(p: &BiPerm) -> Option<NonEntanglingWitness> {
    let d = p.d;
    let at = |m: &[u8], i: usize, j: usize| m[i * d + j];

    let k_by_row = (0..d).all(|i| (1..d).all(|j| at(&p.k, i, j) == at(&p.k, i, 0)));
    let l_by_col = (0..d).all(|j| (1..d).all(|i| at(&p.l, i, j) == at(&p.l, 0, j)));
    if k_by_row && l_by_col {
        let p_a = (0..d).map(|i| at(&p.k, i, 0) as usize + 1).collect::<Vec<_>>();
        let p_b = (0..d).map(|j| at(&p.l, 0, j) as usize + 1).collect::<Vec<_>>();
        return Some(NonEntanglingWitness {
            kind: WitnessKind::IdentityLike,
            p_a: FlatPerm::new(&p_a).ok()?,
            p_b: FlatPerm::new(&p_b).ok()?,
        });
    }

    let k_by_col = (0..d).all(|j| (1..d).all(|i| at(&p.k, i, j) == at(&p.k, 0, j)));
    let l_by_row = (0..d).all(|i| (1..d).all(|j| at(&p.l, i, j) == at(&p.l, i, 0)));
    if k_by_col && l_by_row {
        let p_a = (0..d).map(|j| at(&p.k, 0, j) as usize + 1).collect::<Vec<_>>();
        let p_b = (0..d).map(|i| at(&p.l, i, 0) as usize + 1).collect::<Vec<_>>();
        return Some(NonEntanglingWitness {
            kind: WitnessKind::SwapLike,
            p_a: FlatPerm::new(&p_a).ok()?,
            p_b: FlatPerm::new(&p_b).ok()?,
        });
    }
    None
}
