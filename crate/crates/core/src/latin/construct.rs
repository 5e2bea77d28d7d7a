use std::collections::BTreeMap;
use std::path::Path;

use super::gf::{prime_power, GaloisField};
use super::{parse_square_blocks, square_from_block, LatinSquare, OrthogonalPair};
use crate::error::{Error, Result};

/// Externally supplied orthogonal pairs, keyed by side.
///
/// Files use the pair format (squares separated by blank lines); a file may
/// hold several pairs back to back. Every pair is checked on load.
#[derive(Clone, Debug, Default)]
pub struct MolsTable {
    pairs: BTreeMap<usize, OrthogonalPair>,
}

impl MolsTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, pair: OrthogonalPair) {
        self.pairs.insert(pair.d(), pair);
    }

    pub fn get(&self, d: usize) -> Option<&OrthogonalPair> {
        self.pairs.get(&d)
    }

    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.keys().copied()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let blocks = parse_square_blocks(text)?;
        if blocks.len() % 2 != 0 {
            return Err(Error::Parse {
                line: blocks.last().map_or(1, |b| b.0),
                column: 1,
                message: "odd number of squares; table entries come in pairs".into(),
            });
        }
        let mut table = MolsTable::new();
        let mut it = blocks.into_iter();
        while let (Some((l1, r1)), Some((l2, r2))) = (it.next(), it.next()) {
            let a = square_from_block(l1, r1)?;
            let b = square_from_block(l2, r2)?;
            let pair = OrthogonalPair::new(a, b).map_err(|e| Error::Parse {
                line: l2,
                column: 1,
                message: e.to_string(),
            })?;
            table.insert(pair);
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// `((i + j) mod d, (i + 2j) mod d)` on 0-based indices; valid for odd `d`.
pub fn mols_cyclic(d: usize) -> Result<OrthogonalPair> {
    if d.is_multiple_of(2) || d == 1 {
        return Err(Error::UnsupportedOrder {
            d,
            reason: "the cyclic construction needs an odd order of at least 3".into(),
        });
    }
    let mut a = Vec::with_capacity(d * d);
    let mut b = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            a.push(((i + j) % d) as u8);
            b.push(((i + 2 * j) % d) as u8);
        }
    }
    OrthogonalPair::new(
        LatinSquare::from_cells0_unchecked(d, a),
        LatinSquare::from_cells0_unchecked(d, b),
    )
}

/// Rows `a * x_i + x_j` over `GF(q)` for the multipliers `a = 1` and `a = 2`
/// (the element encoded as 2, distinct from 1 in every field of order > 2).
pub fn mols_finite_field(q: usize) -> Result<OrthogonalPair> {
    if q < 3 {
        return Err(Error::UnsupportedOrder {
            d: q,
            reason: "a field of order at least 3 is needed for two distinct nonzero multipliers"
                .into(),
        });
    }
    let f = GaloisField::new(q)?;
    let square = |a: usize| {
        let cells = (0..q)
            .flat_map(|i| (0..q).map(move |j| (i, j)))
            .map(|(i, j)| f.add(f.mul(a, i), j) as u8)
            .collect();
        LatinSquare::from_cells0(q, cells)
    };
    OrthogonalPair::new(square(1)?, square(2)?)
}

/// Kronecker product of two pairs: side `m * n`, cell symbols combined in
/// mixed radix `(x, y) -> x * n + y`.
pub fn mols_product(outer: &OrthogonalPair, inner: &OrthogonalPair) -> Result<OrthogonalPair> {
    let (m, n) = (outer.d(), inner.d());
    let d = m * n;
    if d > crate::perm::MAX_DIMENSION {
        return Err(Error::InvalidDimension {
            d,
            reason: "product side exceeds 215",
        });
    }
    let combine = |x: &LatinSquare, y: &LatinSquare| {
        let mut cells = vec![0u8; d * d];
        for i1 in 0..m {
            for i2 in 0..n {
                for j1 in 0..m {
                    for j2 in 0..n {
                        let v = x.cells[i1 * m + j1] as usize * n + y.cells[i2 * n + j2] as usize;
                        cells[(i1 * n + i2) * d + (j1 * n + j2)] = v as u8;
                    }
                }
            }
        }
        LatinSquare::from_cells0(d, cells)
    };
    OrthogonalPair::new(
        combine(&outer.first, &inner.first)?,
        combine(&outer.second, &inner.second)?,
    )
}

/// An orthogonal pair of side `d` from the built-in constructions.
///
/// Odd orders use the cyclic pair, prime powers the finite-field pair, and
/// other orders a product of supported factors. Orders 2 and 6 have no
/// orthogonal pair at all; other orders `d = 2 (mod 4)` do, but their
/// construction is not shipped and must come from a [`MolsTable`].
pub fn construct_mols(d: usize) -> Result<OrthogonalPair> {
    construct_mols_with(d, None)
}

pub fn construct_mols_with(d: usize, table: Option<&MolsTable>) -> Result<OrthogonalPair> {
    if d < 3 && d != 2 {
        return Err(Error::InvalidDimension {
            d,
            reason: "orthogonal pairs are constructed for d >= 3",
        });
    }
    if let Some(pair) = table.and_then(|t| t.get(d)) {
        return Ok(pair.clone());
    }
    match d {
        2 => {
            return Err(Error::UnsupportedOrder {
                d,
                reason: "no pair of orthogonal Latin squares of side 2 exists".into(),
            })
        }
        6 => {
            return Err(Error::UnsupportedOrder {
                d,
                reason: "no pair of orthogonal Latin squares of side 6 exists"
                    .into(),
            })
        }
        _ => {}
    }
    if d % 2 == 1 {
        return mols_cyclic(d);
    }
    if prime_power(d).is_some() {
        return mols_finite_field(d);
    }
    for m in (3..d).filter(|m| d.is_multiple_of(*m) && d / m >= 3) {
        if let (Ok(a), Ok(b)) = (construct_mols_with(m, table), construct_mols_with(d / m, table)) {
            return mols_product(&a, &b);
        }
    }
    Err(Error::UnsupportedOrder {
        d,
        reason: "orders congruent to 2 mod 4 have orthogonal pairs (Bose, Shrikhande and Parker) \
                 but no construction is shipped; supply one through a MOLS table file"
            .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::{check_block_conditions, entangling_power};
    use crate::latin::are_orthogonal;
    use crate::rational::Rational;

    fn check_maximal(pair: &OrthogonalPair) {
        let d = pair.d();
        assert!(are_orthogonal(pair.first(), pair.second()));
        let p = pair.superimpose();
        let e = entangling_power(&p).unwrap();
        assert_eq!(e.epsilon, Rational::new(d as i64, d as i64 + 1), "d={d}");
        assert_eq!((e.q_p, e.q_ps), ((d * d) as u64, (d * d) as u64));
        assert!(check_block_conditions(&p).all());
    }

    #[test]
    fn dispatch_covers_supported_orders() {
        for d in [3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 20, 24] {
            check_maximal(&construct_mols(d).unwrap());
        }
    }

    #[test]
    fn unsupported_orders() {
        for d in [2, 6, 10, 14, 18] {
            assert!(
                matches!(construct_mols(d), Err(Error::UnsupportedOrder { .. })),
                "d={d}"
            );
        }
        assert!(construct_mols(1).is_err());
        assert!(construct_mols(0).is_err());
    }

    #[test]
    fn finite_field_odd_prime_powers() {
        for q in [3, 5, 9, 25, 27] {
            check_maximal(&mols_finite_field(q).unwrap());
        }
        assert!(mols_finite_field(6).is_err());
        assert!(mols_finite_field(2).is_err());
    }

    #[test]
    fn d4_pair_shape() {
        let pair = construct_mols(4).unwrap();
        assert_eq!(pair.first().rows()[0], vec![1, 2, 3, 4]);
        check_maximal(&pair);
    }

    #[test]
    fn product_construction() {
        let p = mols_product(&mols_cyclic(3).unwrap(), &mols_cyclic(5).unwrap()).unwrap();
        check_maximal(&p);
    }

    #[test]
    fn table_supplies_missing_orders() {
        // a valid side-10 pair obtained externally would be loaded the same way;
        // here a side-5 cyclic pair is routed through the table to exercise the path
        let src = mols_cyclic(5).unwrap().to_string();
        let table = MolsTable::parse(&src).unwrap();
        assert_eq!(table.orders().collect::<Vec<_>>(), vec![5]);
        assert_eq!(construct_mols_with(5, Some(&table)).unwrap(), mols_cyclic(5).unwrap());

        let mut bad = src.clone();
        bad.push('\n');
        bad.push_str(&mols_cyclic(3).unwrap().first().to_string());
        assert!(MolsTable::parse(&bad).is_err());

        let same = format!("{}\n{}", mols_cyclic(5).unwrap().first(), mols_cyclic(5).unwrap().first());
        assert!(MolsTable::parse(&same).is_err());
    }

    #[test]
    fn table_enables_products_with_loaded_factors() {
        // pretend order 3 were only available from a table: 12 = 4 * 3 still works
        let table = MolsTable::parse(&mols_cyclic(3).unwrap().to_string()).unwrap();
        check_maximal(&construct_mols_with(12, Some(&table)).unwrap());
    }
}
