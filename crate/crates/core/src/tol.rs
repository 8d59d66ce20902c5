//! Numerical tolerances shared by every check.
//!
//! Integer paths are compared exactly and never consult these values.

/// Relative tolerance for Fourier-side identities on random complex data.
pub const FOURIER_REL: f64 = 1e-8;

/// Round-trip error allowed for `idft(dft(f))`.
pub const ROUND_TRIP_REL: f64 = 1e-9;

/// Weighted inequalities with a complex weight.
pub const WEIGHT_REL: f64 = 1e-9;

/// Real-exponent corollaries (fractional powers of integer sums).
pub const POWER_REL: f64 = 1e-9;

/// Spectral identities that go through a Jacobi diagonalization.
pub const SPECTRAL_REL: f64 = 1e-8;

/// Cycle sums compared against `sum mu^k`.
pub const CYCLE_REL: f64 = 1e-7;

/// Character orthonormality.
pub const CHARACTER: f64 = 1e-10;

/// Character-side multiplicative energies.
pub const MULT_ENERGY_REL: f64 = 1e-7;

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the full Frobenius norm.
pub const JACOBI_OFF_REL: f64 = 1e-12;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvector orthonormality and reconstruction.
pub const EIGVEC: f64 = 1e-8;

/// Non-integer energy exponents.
pub const REAL_ENERGY_REL: f64 = 1e-12;

/// Tolerance scaled by magnitude, never below a small absolute floor.
pub fn scaled(rel: f64, a: f64, b: f64) -> f64 {
    rel * a.abs().max(b.abs()).max(1.0)
}
