use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::{COMPARISON, STRUCTURAL};

/// A normalized pure state of several parties with the given local dimensions.
///
/// Amplitudes are stored with the first party as the most significant index.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    parts: Vec<usize>,
    amps: Vec<Complex64>,
}

impl PureState {
    pub fn new(parts: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        let len: usize = parts.iter().product();
        if parts.is_empty() || parts.contains(&0) || amps.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                actual: amps.len(),
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !((norm - 1.0).abs() <= STRUCTURAL) {
            return Err(Error::UnnormalizedState { norm });
        }
        Ok(PureState { parts, amps })
    }

    /// Product state `|a> (x) |b>` of two normalized vectors.
    pub fn product(a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        let amps = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        Self::new(vec![a.len(), b.len()], amps)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Amplitude of the basis state with 0-based local indices `idx`.
    pub fn amplitude(&self, idx: &[usize]) -> Complex64 {
        let flat = idx
            .iter()
            .zip(&self.parts)
            .fold(0usize, |acc, (&i, &d)| acc * d + i);
        self.amps[flat]
    }
}

/// A bipartition of parties `1..=n` into two nonempty groups.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Cut {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Cut {
    /// Parties are 1-based.
    pub fn new(mut left: Vec<usize>, mut right: Vec<usize>) -> Result<Self> {
        left.sort_unstable();
        right.sort_unstable();
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidCut {
                reason: "both sides must be nonempty".into(),
            });
        }
        let mut all: Vec<usize> = left.iter().chain(&right).copied().collect();
        all.sort_unstable();
        if all.iter().enumerate().any(|(i, &p)| p != i + 1) {
            return Err(Error::InvalidCut {
                reason: format!("parties {all:?} are not exactly 1..={}", all.len()),
            });
        }
        Ok(Cut { left, right })
    }

    /// Parses forms like `12|34` or `1|234` (single-digit party labels).
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s.split_once('|').ok_or_else(|| Error::InvalidCut {
            reason: format!("missing '|' in {s:?}"),
        })?;
        let digits = |t: &str| -> Result<Vec<usize>> {
            t.trim()
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&v| v > 0)
                        .map(|v| v as usize)
                        .ok_or_else(|| Error::InvalidCut {
                            reason: format!("invalid party label {c:?} in {s:?}"),
                        })
                })
                .collect()
        };
        Cut::new(digits(a)?, digits(b)?)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn parties(&self) -> usize {
        self.left.len() + self.right.len()
    }

    fn flipped(&self) -> Cut {
        Cut {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.left {
            write!(f, "{p}")?;
        }
        write!(f, "|")?;
        for p in &self.right {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity and trace to the structural tolerance and the
    /// smallest eigenvalue against `-COMPARISON`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        let bad = |reason: String| Err(Error::InvalidDensityMatrix { reason });
        for a in 0..dim {
            for b in 0..dim {
                let dev = (entries[a * dim + b] - entries[b * dim + a].conj()).norm();
                if !(dev <= STRUCTURAL) {
                    return bad(format!("not Hermitian at ({a}, {b}), deviation {dev:e}"));
                }
            }
        }
        let trace: f64 = (0..dim).map(|a| entries[a * dim + a].re).sum();
        if !((trace - 1.0).abs() <= STRUCTURAL) {
            return bad(format!("trace {trace}"));
        }
        if !shifted_cholesky_succeeds(dim, &entries, COMPARISON) {
            return bad(format!("an eigenvalue lies below -{COMPARISON:e}"));
        }
        Ok(DensityMatrix { dim, entries })
    }

    /// Partial trace of `|psi><psi|` over the right side of `cut`.
    pub fn reduced(psi: &PureState, cut: &Cut) -> Result<Self> {
        let (m, rows, cols) = bipartite_matrix(psi, cut)?;
        let mut rho = vec![Complex64::new(0.0, 0.0); rows * rows];
        for a in 0..rows {
            for b in a..rows {
                let s: Complex64 = (0..cols).map(|c| m[a * cols + c] * m[b * cols + c].conj()).sum();
                rho[a * rows + b] = s;
                rho[b * rows + a] = s.conj();
            }
        }
        Ok(DensityMatrix {
            dim: rows,
            entries: rho,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, a: usize, b: usize) -> Complex64 {
        self.entries[a * self.dim + b]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|a| self.entries[a * self.dim + a].re).sum()
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Cholesky factorization of `rho + shift * I`; succeeds iff every
/// eigenvalue of `rho` exceeds `-shift` (up to rounding).
fn shifted_cholesky_succeeds(n: usize, rho: &[Complex64], shift: f64) -> bool {
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut diag = rho[j * n + j].re + shift;
        for k in 0..j {
            diag -= l[j * n + k].norm_sqr();
        }
        if !(diag > 0.0) {
            return false;
        }
        let djj = diag.sqrt();
        l[j * n + j] = Complex64::new(djj, 0.0);
        for i in j + 1..n {
            let mut s = rho[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / djj;
        }
    }
    true
}

/// Reshapes the amplitudes into a `dim(left) x dim(right)` matrix.
fn bipartite_matrix(psi: &PureState, cut: &Cut) -> Result<(Vec<Complex64>, usize, usize)> {
    let parts = psi.parts();
    if cut.parties() != parts.len() {
        return Err(Error::InvalidCut {
            reason: format!("cut {cut} has {} parties, state has {}", cut.parties(), parts.len()),
        });
    }
    let rows: usize = cut.left().iter().map(|&p| parts[p - 1]).product();
    let cols: usize = cut.right().iter().map(|&p| parts[p - 1]).product();
    let mut m = vec![Complex64::new(0.0, 0.0); rows * cols];
    let mut idx = vec![0usize; parts.len()];
    for &amp in psi.amplitudes() {
        let r = cut
            .left()
            .iter()
            .fold(0usize, |acc, &p| acc * parts[p - 1] + idx[p - 1]);
        let c = cut
            .right()
            .iter()
            .fold(0usize, |acc, &p| acc * parts[p - 1] + idx[p - 1]);
        m[r * cols + c] = amp;
        // odometer over the party indices, last party fastest
        for p in (0..parts.len()).rev() {
            idx[p] += 1;
            if idx[p] < parts[p] {
                break;
            }
            idx[p] = 0;
        }
    }
    Ok((m, rows, cols))
}

/// `D/(D-1) (1 - Tr rho^2)` with `D` the dimension of the smaller side.
pub fn linear_entropy(psi: &PureState, cut: &Cut) -> Result<f64> {
    let norm = psi.norm();
    if !((norm - 1.0).abs() <= STRUCTURAL) {
        return Err(Error::UnnormalizedState { norm });
    }
    let parts = psi.parts();
    if cut.parties() != parts.len() {
        return Err(Error::InvalidCut {
            reason: format!("cut {cut} has {} parties, state has {}", cut.parties(), parts.len()),
        });
    }
    let dim_of = |side: &[usize]| side.iter().map(|&p| parts[p - 1]).product::<usize>();
    let (dl, dr) = (dim_of(cut.left()), dim_of(cut.right()));
    let small = dl.min(dr);
    if small == 1 {
        return Ok(0.0);
    }
    let rho = if dl <= dr {
        DensityMatrix::reduced(psi, cut)?
    } else {
        DensityMatrix::reduced(psi, &cut.flipped())?
    };
    let dd = small as f64;
    Ok(dd / (dd - 1.0) * (1.0 - rho.purity()))
}
