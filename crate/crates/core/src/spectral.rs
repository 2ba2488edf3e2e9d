//! Spectral norm via power iteration on MᵀM, and the condition number
//! κ(M) = ‖M‖·‖M⁻¹‖ built from it.
//!
//! The start vector is deterministic — normalized all-ones plus a fixed
//! per-coordinate perturbation derived from splitmix64 — so repeated runs
//! produce identical reports. The perturbation breaks the measure-zero case
//! of a start vector orthogonal to the top singular subspace.

use crate::matrix::DenseMatrix;

pub const POWER_ITERATION_RTOL: f64 = 1e-10;
pub const POWER_ITERATION_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug)]
pub struct SpectralNorm {
    /// Largest singular value (best available estimate when not converged).
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic start vector: all-ones with a small fixed perturbation.
pub fn power_iteration_start(n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let r = splitmix64(i as u64) as f64 / u64::MAX as f64; // in [0,1]
            1.0 + 1e-3 * (r - 0.5)
        })
        .collect();
    let norm = l2(&v);
    for x in v.iter_mut() {
        *x /= norm;
    }
    v
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest singular value of a (possibly rectangular) matrix.
pub fn spectral_norm(m: &DenseMatrix) -> SpectralNorm {
    let mut v = power_iteration_start(m.cols());
    spectral_norm_warm(m, &mut v)
}

/// Power iteration reusing `v` as the start (and leaving the final right
/// singular vector estimate in it). Along a circuit trace, rotations leave
/// MᵀM unchanged, so the previous layer's vector is already converged and
/// per-layer cost drops to a couple of products.
pub fn spectral_norm_warm(m: &DenseMatrix, v: &mut Vec<f64>) -> SpectralNorm {
    assert_eq!(v.len(), m.cols(), "start vector length mismatch");
    let norm0 = l2(v);
    if norm0 == 0.0 || !norm0.is_finite() {
        *v = power_iteration_start(m.cols());
    } else if (norm0 - 1.0).abs() > 1e-12 {
        for x in v.iter_mut() {
            *x /= norm0;
        }
    }
    let mut sigma = l2(&m.matvec(v));
    if sigma == 0.0 {
        // Zero start image; fall back to the canonical start once.
        *v = power_iteration_start(m.cols());
        sigma = l2(&m.matvec(v));
        if sigma == 0.0 {
            return SpectralNorm {
                value: 0.0,
                converged: true,
                iterations: 0,
            };
        }
    }
    for it in 1..=POWER_ITERATION_CAP {
        let mv = m.matvec(v);
        let w = m.matvec_transpose(&mv); // MᵀM v
        let wn = l2(&w);
        if wn == 0.0 {
            return SpectralNorm {
                value: 0.0,
                converged: true,
                iterations: it,
            };
        }
        for (x, y) in v.iter_mut().zip(&w) {
            *x = y / wn;
        }
        let next = l2(&m.matvec(v));
        let rel = (next - sigma).abs() / next.max(f64::MIN_POSITIVE);
        sigma = next;
        if rel <= POWER_ITERATION_RTOL {
            return SpectralNorm {
                value: sigma,
                converged: true,
                iterations: it,
            };
        }
    }
    SpectralNorm {
        value: sigma,
        converged: false,
        iterations: POWER_ITERATION_CAP,
    }
}

/// κ(M) = ‖M‖·‖M⁻¹‖ from a maintained inverse.
pub fn condition_number(m: &DenseMatrix, minv: &DenseMatrix) -> f64 {
    spectral_norm(m).value * spectral_norm(minv).value
}
