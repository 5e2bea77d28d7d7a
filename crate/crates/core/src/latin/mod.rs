//! Latin squares, orthogonal pairs and their superimposition into
//! maximally entangling permutations.

mod construct;
mod enumerate;
pub mod gf;
mod special;

pub use construct::{
    construct_mols, construct_mols_with, mols_cyclic, mols_finite_field, mols_product, MolsTable,
};
pub use enumerate::{
    count_orthogonal_pairs, enumerate_latin_squares, for_each_latin_square, LATIN_ENUMERATION_MAX_D,
    PAIR_COUNT_MAX_D,
};
pub use special::{near_orthogonal_d6_squares, special_d6_perm, superimposed_d6_array};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::BiPerm;

/// A `d x d` array over `[d]` whose rows and columns are permutations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatinSquare {
    d: usize,
    // row-major, 0-based symbols
    cells: Vec<u8>,
}

fn latin_violation(d: usize, cells: &[u8]) -> Option<String> {
    for i in 0..d {
        let mut seen = vec![false; d];
        for j in 0..d {
            let v = cells[i * d + j] as usize;
            if std::mem::replace(&mut seen[v], true) {
                return Some(format!("symbol {} repeats in row {}", v + 1, i + 1));
            }
        }
    }
    for j in 0..d {
        let mut seen = vec![false; d];
        for i in 0..d {
            let v = cells[i * d + j] as usize;
            if std::mem::replace(&mut seen[v], true) {
                return Some(format!("symbol {} repeats in column {}", v + 1, j + 1));
            }
        }
    }
    None
}

/// Converts 1-based rows to 0-based cells, checking shape and symbol range.
fn to_cells(rows: &[Vec<usize>]) -> Result<(usize, Vec<u8>)> {
    let d = rows.len();
    if d == 0 || d > crate::perm::MAX_DIMENSION {
        return Err(Error::InvalidDimension {
            d,
            reason: "side must be in 1..=215",
        });
    }
    let mut cells = Vec::with_capacity(d * d);
    for row in rows {
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
            cells.push((v - 1) as u8);
        }
    }
    Ok((d, cells))
}

/// True when `rows` is square over `[d]` with every row and column a permutation.
pub fn is_latin(rows: &[Vec<usize>]) -> bool {
    match to_cells(rows) {
        Ok((d, cells)) => latin_violation(d, &cells).is_none(),
        Err(_) => false,
    }
}

/// True when the superimposed pairs `(a_ij, b_ij)` are pairwise distinct.
pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> bool {
    first_repeated_pair(a, b).is_none()
}

fn first_repeated_pair(a: &LatinSquare, b: &LatinSquare) -> Option<(usize, usize)> {
    if a.d != b.d {
        return Some((0, 0));
    }
    let d = a.d;
    let mut seen = vec![false; d * d];
    for (&x, &y) in a.cells.iter().zip(&b.cells) {
        let key = x as usize * d + y as usize;
        if std::mem::replace(&mut seen[key], true) {
            return Some((x as usize + 1, y as usize + 1));
        }
    }
    None
}

impl LatinSquare {
    /// Validates 1-based rows.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let (d, cells) = to_cells(rows)?;
        Self::from_cells0(d, cells)
    }

    pub(crate) fn from_cells0(d: usize, cells: Vec<u8>) -> Result<Self> {
        if let Some(reason) = latin_violation(d, &cells) {
            return Err(Error::NotLatin { reason });
        }
        Ok(LatinSquare { d, cells })
    }

    pub(crate) fn from_cells0_unchecked(d: usize, cells: Vec<u8>) -> Self {
        debug_assert!(latin_violation(d, &cells).is_none());
        LatinSquare { d, cells }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Symbol at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[(i - 1) * self.d + (j - 1)] as usize + 1
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells
            .chunks(self.d)
            .map(|r| r.iter().map(|&v| v as usize + 1).collect())
            .collect()
    }

    pub(crate) fn cells0(&self) -> &[u8] {
        &self.cells
    }

    pub fn transpose(&self) -> LatinSquare {
        let d = self.d;
        let mut cells = vec![0u8; d * d];
        for i in 0..d {
            for j in 0..d {
                cells[j * d + i] = self.cells[i * d + j];
            }
        }
        LatinSquare { d, cells }
    }
}

impl fmt::Debug for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatinSquare{:?}", self.rows())
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Parses blocks of whitespace-separated integers separated by blank lines.
/// Returns each block as rows together with the line number it starts on.
pub(crate) fn parse_square_blocks(s: &str) -> Result<Vec<(usize, Vec<Vec<usize>>)>> {
    let mut blocks = Vec::new();
    let mut current: Option<(usize, Vec<Vec<usize>>)> = None;
    for (n, line) in s.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            if let Some(b) = current.take() {
                blocks.push(b);
            }
            continue;
        }
        let mut row = Vec::new();
        let mut col = 1;
        for tok in line.split_whitespace() {
            let offset = line[col - 1..].find(tok).unwrap_or(0);
            col += offset;
            let v = tok.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                column: col,
                message: format!("invalid integer {tok:?}"),
            })?;
            row.push(v);
            col += tok.len();
        }
        current.get_or_insert((line_no, Vec::new())).1.push(row);
    }
    if let Some(b) = current.take() {
        blocks.push(b);
    }
    Ok(blocks)
}

fn square_from_block(line: usize, rows: Vec<Vec<usize>>) -> Result<LatinSquare> {
    LatinSquare::from_rows(&rows).map_err(|e| Error::Parse {
        line,
        column: 1,
        message: format!("square starting here is invalid: {e}"),
    })
}

impl FromStr for LatinSquare {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = parse_square_blocks(s)?;
        match blocks.len() {
            1 => {
                let (line, rows) = blocks.remove(0);
                square_from_block(line, rows)
            }
            0 => Err(Error::Parse {
                line: 1,
                column: 1,
                message: "empty input".into(),
            }),
            _ => Err(Error::Parse {
                line: blocks[1].0,
                column: 1,
                message: "expected a single square".into(),
            }),
        }
    }
}

/// Two Latin squares of the same side whose superimposition lists every
/// ordered pair exactly once.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrthogonalPair {
    first: LatinSquare,
    second: LatinSquare,
}

impl OrthogonalPair {
    pub fn new(first: LatinSquare, second: LatinSquare) -> Result<Self> {
        if first.d != second.d {
            return Err(Error::DimensionMismatch {
                expected: first.d,
                actual: second.d,
            });
        }
        if let Some((x, y)) = first_repeated_pair(&first, &second) {
            return Err(Error::NotOrthogonal(x, y));
        }
        Ok(OrthogonalPair { first, second })
    }

    pub fn first(&self) -> &LatinSquare {
        &self.first
    }

    pub fn second(&self) -> &LatinSquare {
        &self.second
    }

    pub fn d(&self) -> usize {
        self.first.d
    }

    /// The permutation `(i, j) -> (first_ij, second_ij)`.
    pub fn superimpose(&self) -> BiPerm {
        BiPerm::from_cells0(self.d(), self.first.cells.clone(), self.second.cells.clone())
            .expect("orthogonal pair superimposes to a bijection")
    }
}

/// Superimposes two squares into a grid permutation, failing when pairs repeat.
pub fn superimpose(first: &LatinSquare, second: &LatinSquare) -> Result<BiPerm> {
    Ok(OrthogonalPair::new(first.clone(), second.clone())?.superimpose())
}

impl fmt::Display for OrthogonalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\n{}", self.first, self.second)
    }
}

impl FromStr for OrthogonalPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let blocks = parse_square_blocks(s)?;
        if blocks.len() != 2 {
            return Err(Error::Parse {
                line: blocks.get(2).map_or(1, |b| b.0),
                column: 1,
                message: format!("expected two squares, found {}", blocks.len()),
            });
        }
        let mut it = blocks.into_iter();
        let (l1, r1) = it.next().expect("two blocks");
        let (l2, r2) = it.next().expect("two blocks");
        let a = square_from_block(l1, r1)?;
        let b = square_from_block(l2, r2)?;
        OrthogonalPair::new(a, b).map_err(|e| Error::Parse {
            line: l2,
            column: 1,
            message: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::entangling_power;
    use crate::rational::Rational;

    fn k3() -> Vec<Vec<usize>> {
        vec![vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2]]
    }

    fn l3() -> Vec<Vec<usize>> {
        vec![vec![1, 3, 2], vec![2, 1, 3], vec![3, 2, 1]]
    }

    #[test]
    fn side_three_pair_is_orthogonal() {
        let k = LatinSquare::from_rows(&k3()).unwrap();
        let l = LatinSquare::from_rows(&l3()).unwrap();
        assert!(is_latin(&k3()) && is_latin(&l3()));
        assert!(are_orthogonal(&k, &l));
        assert!(!are_orthogonal(&k, &k));
        let p = superimpose(&k, &l).unwrap();
        assert_eq!(p.k_matrix(), k3());
        assert_eq!(p.l_matrix(), l3());
        assert_eq!(entangling_power(&p).unwrap().epsilon, Rational::new(3, 4));
        // the block array of the displayed 9x9 matrix is this superimposition
        let cells: Vec<Vec<(usize, usize)>> = (1..=3)
            .map(|i| (1..=3).map(|j| p.image(i, j)).collect())
            .collect();
        assert_eq!(crate::entangle::block_array(&crate::builtins::matrix_r()), Some(cells));
    }

    #[test]
    fn non_orthogonal_pair_is_rejected() {
        let k = LatinSquare::from_rows(&k3()).unwrap();
        assert!(matches!(superimpose(&k, &k), Err(Error::NotOrthogonal(2, 2))));
        let t = k.transpose();
        // this K is symmetric, so transposing gives the same square
        assert!(superimpose(&k, &t).is_err());
    }

    #[test]
    fn is_latin_rejects() {
        assert!(!is_latin(&[vec![1, 2], vec![1, 2]]));
        assert!(!is_latin(&[vec![1, 2], vec![2, 3]]));
        assert!(!is_latin(&[vec![1, 2, 3], vec![2, 3, 1]]));
        assert!(!is_latin(&[]));
        assert!(is_latin(&[vec![1]]));
        assert!(matches!(
            LatinSquare::from_rows(&[vec![1, 2], vec![2, 2]]),
            Err(Error::NotLatin { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let k = LatinSquare::from_rows(&k3()).unwrap();
        let l = LatinSquare::from_rows(&l3()).unwrap();
        let pair = OrthogonalPair::new(k, l).unwrap();
        let text = pair.to_string();
        assert_eq!(text, "1 2 3\n2 3 1\n3 1 2\n\n1 3 2\n2 1 3\n3 2 1\n");
        assert_eq!(text.parse::<OrthogonalPair>().unwrap(), pair);
    }

    #[test]
    fn pair_parse_errors() {
        let err = "1 2 3\n2 3 1\n3 1 2\n\n1 2 3\n2 3 1\n3 1 2\n"
            .parse::<OrthogonalPair>()
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err:?}");
        let err = "1 2\n2 x\n".parse::<LatinSquare>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 3, .. }), "{err:?}");
        assert!("1 2\n2 1\n".parse::<OrthogonalPair>().is_err());
    }
}
