//! Quasi-entropy of a nonsingular matrix.
//!
//! For a nonsingular M the products p_ij = M(i,j)·M⁻¹(j,i) behave like signed
//! probabilities: each row of (p_ij) sums to exactly 1 (it is a diagonal entry
//! of M·M⁻¹), but individual entries may be negative or exceed 1. The
//! quasi-entropy
//!
//!   Φ(M) = Σ_{i,j} f̂(M(i,j), M⁻¹(j,i)),   f̂(x,y) = −x·y·log₂|x·y|
//!
//! extends the Shannon entropy of the squared rows of an orthogonal matrix
//! (where M⁻¹(j,i) = M(i,j), so p_ij = M(i,j)² ≥ 0) to arbitrary nonsingular
//! matrices. Φ(Id) = 0; for the n-point Walsh–Hadamard matrix every p_ij is
//! 1/n and Φ = n·log₂ n, the maximum over orthogonal matrices.
//!
//! Φ is insensitive to row rescaling: replacing M by D·M for a nonzero
//! diagonal D scales M(i,j) by d_i and M⁻¹(j,i) by 1/d_i, leaving every
//! product — hence Φ — unchanged.
//!
//! The partial variant Φ_n restricts the column sum to the first n
//! coordinates; it is the right potential when a circuit carries extra
//! workspace coordinates whose contribution should not be counted.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Products below this magnitude are treated as the zero case of f̂.
/// t·log₂ t → 0 as t → 0, so the induced error is below 1e−297 per term.
pub const UNDERFLOW_CUTOFF: f64 = 1e-300;

/// f̂(x,y) = −x·y·log₂|x·y|, with f̂ = 0 when the product vanishes (or
/// underflows past the cutoff).
#[inline(always)]
pub fn fhat(x: f64, y: f64) -> f64 {
    let p = x * y;
    if p.abs() < UNDERFLOW_CUTOFF {
        0.0
    } else {
        -p * p.abs().log2()
    }
}

/// Φ(M) = Σ_{i,j} f̂(M(i,j), M⁻¹(j,i)). The caller supplies the inverse so
/// that residual control stays in one place (see [`quasi_entropy_of`] for the
/// convenience path that inverts internally).
pub fn quasi_entropy(m: &DenseMatrix, minv: &DenseMatrix) -> f64 {
    assert!(m.is_square() && minv.is_square());
    assert_eq!(m.rows(), minv.rows(), "matrix/inverse dimension mismatch");
    partial_quasi_entropy(m, minv, m.rows())
}

/// Φ_n(M): the quasi-entropy restricted to the first `n` columns of M (and
/// the first `n` rows of M⁻¹). Equals [`quasi_entropy`] when n = dim.
pub fn partial_quasi_entropy(m: &DenseMatrix, minv: &DenseMatrix, n: usize) -> f64 {
    assert!(m.is_square() && minv.is_square());
    assert_eq!(m.rows(), minv.rows(), "matrix/inverse dimension mismatch");
    assert!(n <= m.rows(), "column range exceeds dimension");
    let dim = m.rows();
    let mut phi = 0.0;
    for i in 0..dim {
        let row = m.row(i);
        for j in 0..n {
            phi += fhat(row[j], minv.get(j, i));
        }
    }
    phi
}

/// Inverts via LU (residual-checked at 1e−8) and evaluates Φ.
pub fn quasi_entropy_of(m: &DenseMatrix) -> Result<f64> {
    let minv = m.inverse_checked(1e-8)?;
    Ok(quasi_entropy(m, &minv))
}

/// One row of quasi-probabilities p_ij = M(i,j)·M⁻¹(j,i).
#[derive(Clone, Debug)]
pub struct QuasiProbRow {
    /// 0-based row index.
    pub row: usize,
    pub values: Vec<f64>,
}

impl QuasiProbRow {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// All quasi-probability rows of a nonsingular M; each row sums to 1 up to
/// the quality of the supplied inverse.
pub fn quasi_prob_rows(m: &DenseMatrix, minv: &DenseMatrix) -> Vec<QuasiProbRow> {
    assert!(m.is_square() && minv.is_square());
    assert_eq!(m.rows(), minv.rows(), "matrix/inverse dimension mismatch");
    let n = m.rows();
    (0..n)
        .map(|i| {
            let row = m.row(i);
            QuasiProbRow {
                row: i,
                values: (0..n).map(|j| row[j] * minv.get(j, i)).collect(),
            }
        })
        .collect()
}

/// Errors unless the supplied pair passes the 1e−8 residual gate.
pub fn check_inverse_pair(m: &DenseMatrix, minv: &DenseMatrix, tolerance: f64) -> Result<()> {
    let residual = m.inverse_residual(minv);
    if residual > tolerance {
        return Err(Error::ResidualExceeded {
            residual,
            tolerance,
        });
    }
    Ok(())
}
