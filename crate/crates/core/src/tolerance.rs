//! Numerical tolerances shared by the dense oracle and its tests.

/// Structural checks: unitarity, normalization, Hermiticity, unit trace.
pub const STRUCTURAL: f64 = 1e-12;

/// Comparisons between independently computed entangling powers and
/// entropies, and the lower bound on density-matrix eigenvalues.
pub const COMPARISON: f64 = 1e-10;

/// Largest local dimension accepted by the dense oracle (`d^4` amplitudes).
pub const ORACLE_MAX_D: usize = 12;
