//! Dense linear-algebra route to the entangling power.
//!
//! A unitary `U` on `C^d (x) C^d` is mapped to the four-party state
//! `|U> = (1/d) sum <kl|U|im> |k i l m>` on systems `1, 2, 3, 4`. The entangling
//! power is `d/(d+1) [S_L(|U>) + S_L(|US>) - 1]` with both entropies taken
//! across the cut `12|34`. Everything here works on explicit amplitudes and is
//! independent of the rectangle-counting formula.

mod mc;
mod state;

pub use mc::{haar_state, mc_power, McEstimate, RunningStats};
pub use state::{linear_entropy, Cut, DensityMatrix, PureState};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::perm::BiPerm;
use crate::tolerance::{ORACLE_MAX_D, STRUCTURAL};

/// A unitary on `C^d (x) C^d` stored as a dense `d^2 x d^2` row-major matrix.
///
/// Basis index of `|a b>` is `a * d + b` (0-based).
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    d: usize,
    entries: Vec<Complex64>,
}

fn check_oracle_dimension(d: usize) -> Result<()> {
    if !(2..=ORACLE_MAX_D).contains(&d) {
        return Err(Error::InvalidDimension {
            d,
            reason: "the dense oracle supports 2 <= d <= 12",
        });
    }
    Ok(())
}

impl Unitary {
    /// Validates `U^dagger U = I` to within the structural tolerance.
    pub fn new(d: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_oracle_dimension(d)?;
        let n = d * d;
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: entries.len(),
            });
        }
        let u = Unitary { d, entries };
        let deviation = u.unitarity_deviation();
        if !(deviation <= STRUCTURAL) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(u)
    }

    /// Max-abs entry of `U^dagger U - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for r in 0..n {
                    s += self.entries[r * n + a].conj() * self.entries[r * n + b];
                }
                if a == b {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    /// The operator `sum |k_ij l_ij><ij|`.
    pub fn from_biperm(p: &BiPerm) -> Result<Self> {
        let d = p.d();
        check_oracle_dimension(d)?;
        let n = d * d;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for (input, target) in p.to_flat().one_line().into_iter().enumerate() {
            entries[(target - 1) * n + input] = Complex64::new(1.0, 0.0);
        }
        Ok(Unitary { d, entries })
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::from_biperm(&BiPerm::identity(d)?)
    }

    pub fn swap(d: usize) -> Result<Self> {
        Self::from_biperm(&BiPerm::swap(d)?)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Matrix size `d^2`.
    pub fn dim(&self) -> usize {
        self.d * self.d
    }

    /// `<row|U|col>`.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Unitary) -> Result<Unitary> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                actual: other.d,
            });
        }
        let n = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] += a * other.entries[k * n + c];
                }
            }
        }
        Ok(Unitary {
            d: self.d,
            entries: out,
        })
    }

    /// `U S`.
    pub fn times_swap(&self) -> Unitary {
        let d = self.d;
        let n = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for i in 0..d {
                for j in 0..d {
                    out[r * n + i * d + j] = self.entries[r * n + j * d + i];
                }
            }
        }
        Unitary { d, entries: out }
    }

    /// `U |v>` for a vector of length `d^2`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .map(|r| {
                self.entries[r * n..(r + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// The four-party state of a unitary, systems ordered `(1, 2, 3, 4)`:
/// amplitude of `|k i l m>` is `<kl|U|im> / d`.
pub fn state_of_unitary(u: &Unitary) -> Result<PureState> {
    let d = u.d();
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d * d * d];
    for k in 0..d {
        for i in 0..d {
            for l in 0..d {
                for m in 0..d {
                    let idx = ((k * d + i) * d + l) * d + m;
                    amps[idx] = u.entry(k * d + l, i * d + m) / d as f64;
                }
            }
        }
    }
    PureState::new(vec![d; 4], amps)
}

/// Entangling power through the linear entropies of `|U>` and `|US>`.
pub fn oracle_power(u: &Unitary) -> Result<f64> {
    let d = u.d() as f64;
    let cut = Cut::parse("12|34")?;
    let s_u = linear_entropy(&state_of_unitary(u)?, &cut)?;
    let s_us = linear_entropy(&state_of_unitary(&u.times_swap())?, &cut)?;
    Ok(d / (d + 1.0) * (s_u + s_us - 1.0))
}

/// Closed form for two-qubit gates in terms of the canonical parameters
/// `c1 >= c2 >= |c3|`, `c1 <= pi/4`.
pub fn two_qubit_power(c1: f64, c2: f64, c3: f64) -> Result<f64> {
    let slack = STRUCTURAL;
    let ordered = c3.abs() <= c2 + slack && c2 <= c1 + slack && c1 <= std::f64::consts::FRAC_PI_4 + slack;
    if !ordered {
        return Err(Error::ParameterOrderViolation { c1, c2, c3 });
    }
    let (a, b, c) = ((4.0 * c1).cos(), (4.0 * c2).cos(), (4.0 * c3).cos());
    Ok(1.0 / 3.0 - (a * b + a * c + b * c) / 9.0)
}

/// The seven bipartitions of four parties, in the order
/// `12|34, 13|24, 14|23, 1|234, 2|134, 3|124, 4|123`.
pub const SPLITS: [&str; 7] = ["12|34", "13|24", "14|23", "1|234", "2|134", "3|124", "4|123"];

/// Linear entropy of `|U>` across every bipartition in [`SPLITS`].
pub fn split_entropies(u: &Unitary) -> Result<Vec<(Cut, f64)>> {
    let psi = state_of_unitary(u)?;
    SPLITS
        .iter()
        .map(|s| {
            let cut = Cut::parse(s)?;
            let e = linear_entropy(&psi, &cut)?;
            Ok((cut, e))
        })
        .collect()
}
