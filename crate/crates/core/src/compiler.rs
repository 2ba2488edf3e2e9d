//! Compilation of explicit matrices into rotation/constant-gate circuits.
//!
//! Orthogonal matrices are factored by Givens elimination: working column by
//! column, bottom-up, a rotation on rows (j, i) with θ = atan2(R(i,j), R(j,j))
//! zeroes the subdiagonal entry R(i,j) while keeping the pivot positive.
//! After elimination G_T···G_1·Q = D with D = diag(±1), so
//! Q = Gᵀ_1···Gᵀ_T·D and the circuit is the sign-flip constants of D followed
//! by the eliminating rotations in reverse order with negated angles — at
//! most n(n−1)/2 rotations, every intermediate orthogonal.
//!
//! General invertible matrices go through a one-sided Jacobi SVD
//! A = U·diag(σ)·Vᵀ (columns of the working matrix are orthogonalized in
//! place by plane rotations accumulated into V; singular values come out in
//! no particular order). The circuit is then Vᵀ's rotations, one constant
//! gate per singular value, and U's rotations, so the uniform condition
//! number of the synthesized circuit stays within a constant factor of κ(A).

use crate::error::{Error, Result};
use crate::gate::{Circuit, Gate};
use crate::matrix::DenseMatrix;
use crate::trace::{build_trace, uniform_condition_number, CondTracking, TraceOptions};
use serde::Serialize;

pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-8;
pub const SIGMA_RATIO_FLOOR: f64 = 1e-10;
/// Per-layer condition tracking is used up to this dimension; above it,
/// compile results report a checkpoint-sampled lower bound instead.
pub const EXACT_COND_DIM_LIMIT: usize = 128;

#[derive(Clone, Debug, Serialize)]
pub struct CompileResult {
    #[serde(skip)]
    pub circuit: Circuit,
    /// ‖M_circuit − A‖_max against the compile target.
    pub reconstruction_error: f64,
    pub rotation_count: usize,
    pub constant_count: usize,
    pub uniform_condition: f64,
    /// Whether `uniform_condition` covered every layer (exact) or only
    /// checkpoints (lower bound).
    pub uniform_condition_exact: bool,
}

#[derive(Clone, Debug)]
pub struct SvdDecomposition {
    /// Orthonormal left factor; A = U·diag(σ)·Vᵀ.
    pub u: DenseMatrix,
    /// Singular values in no particular order, as produced by the sweep.
    pub sigma: Vec<f64>,
    /// Orthonormal right factor (not transposed).
    pub v: DenseMatrix,
    pub sweeps: usize,
    pub converged: bool,
}

fn require_square_finite(a: &DenseMatrix, what: &str) -> Result<()> {
    if a.rows() != a.cols() || a.rows() == 0 {
        return Err(Error::InvalidInput(format!(
            "{what} requires a nonempty square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if !a.get(i, j).is_finite() {
                return Err(Error::InvalidInput(format!(
                    "{what}: entry ({i}, {j}) is not finite"
                )));
            }
        }
    }
    Ok(())
}

fn orthogonality_defect(q: &DenseMatrix) -> f64 {
    let n = q.rows();
    let prod = q.transpose().matmul(q);
    prod.max_abs_diff(&DenseMatrix::identity(n))
}

/// Gate list realizing an orthogonal matrix, via Givens elimination.
fn givens_gates_for_orthogonal(q: &DenseMatrix) -> Vec<Gate> {
    let n = q.rows();
    let mut r = q.clone();
    let mut eliminations: Vec<(usize, usize, f64)> = Vec::new();
    for j in 0..n {
        for i in (j + 1..n).rev() {
            let b = r.get(i, j);
            if b == 0.0 {
                continue;
            }
            let a = r.get(j, j);
            let theta = b.atan2(a);
            r.rotate_rows(j, i, theta);
            eliminations.push((j, i, theta));
        }
    }
    let mut gates = Vec::with_capacity(eliminations.len() + n);
    for k in 0..n {
        if r.get(k, k) < 0.0 {
            gates.push(Gate::constant(k + 1, -1.0));
        }
    }
    for &(j, i, theta) in eliminations.iter().rev() {
        gates.push(Gate::rotation(j + 1, i + 1, -theta));
    }
    gates
}

fn finish_compile(target: &DenseMatrix, circuit: Circuit) -> Result<CompileResult> {
    let exact = circuit.dim <= EXACT_COND_DIM_LIMIT;
    let options = TraceOptions {
        track_phi: false,
        track_phi_n: false,
        cond: if exact {
            CondTracking::Every(1)
        } else {
            CondTracking::Checkpoints
        },
        checkpoint_every: None,
        keep_layers: false,
    };
    let trace = build_trace(&circuit, &options)?;
    let uc = uniform_condition_number(&trace);
    Ok(CompileResult {
        reconstruction_error: trace.final_m.max_abs_diff(target),
        rotation_count: circuit.rotation_count(),
        constant_count: circuit.constant_count(),
        uniform_condition: uc.value,
        uniform_condition_exact: uc.exact,
        circuit,
    })
}

/// Compile an orthogonal matrix into rotations plus sign-flip constants.
/// Requires ‖QᵀQ − Id‖_max ≤ 1e−8; uses at most n(n−1)/2 rotations and every
/// intermediate matrix is orthogonal (uniform condition number 1).
pub fn givens_qr_circuit(q: &DenseMatrix) -> Result<CompileResult> {
    require_square_finite(q, "Givens compilation")?;
    let defect = orthogonality_defect(q);
    if defect > ORTHOGONALITY_TOLERANCE {
        return Err(Error::InvalidInput(format!(
            "input is not orthogonal: ||Q'Q - Id||_max = {defect:.3e} > {ORTHOGONALITY_TOLERANCE:.0e}"
        )));
    }
    let mut circuit = Circuit::new(q.rows());
    for g in givens_gates_for_orthogonal(q) {
        circuit.push(g);
    }
    finish_compile(q, circuit)
}

/// One-sided Jacobi SVD: repeatedly orthogonalize column pairs of a working
/// copy by right-rotations accumulated into V, until all pairs are
/// numerically orthogonal. Returns A = U·diag(σ)·Vᵀ with σ unsorted.
pub fn jacobi_svd(a: &DenseMatrix) -> Result<SvdDecomposition> {
    require_square_finite(a, "Jacobi SVD")?;
    let n = a.rows();
    let mut w = a.clone();
    let mut v = DenseMatrix::identity(n);
    const MAX_SWEEPS: usize = 60;
    const PAIR_TOLERANCE: f64 = 1e-14;
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (mut app, mut aqq, mut apq) = (0.0f64, 0.0f64, 0.0f64);
                for row in 0..n {
                    let wp = w.get(row, p);
                    let wq = w.get(row, q);
                    app += wp * wp;
                    aqq += wq * wq;
                    apq += wp * wq;
                }
                if apq.abs() <= PAIR_TOLERANCE * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // Right-multiply by [[c, s], [−s, c]] in the (p, q) plane:
                // col_p ← c·col_p − s·col_q, col_q ← s·col_p + c·col_q.
                for row in 0..n {
                    let wp = w.get(row, p);
                    let wq = w.get(row, q);
                    w.set(row, p, c * wp - s * wq);
                    w.set(row, q, s * wp + c * wq);
                    let vp = v.get(row, p);
                    let vq = v.get(row, q);
                    v.set(row, p, c * vp - s * vq);
                    v.set(row, q, s * vp + c * vq);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    let mut sigma = vec![0.0f64; n];
    let mut u = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut norm_sq = 0.0;
        for row in 0..n {
            norm_sq += w.get(row, j) * w.get(row, j);
        }
        let norm = norm_sq.sqrt();
        sigma[j] = norm;
        if norm > 0.0 {
            for row in 0..n {
                u.set(row, j, w.get(row, j) / norm);
            }
        } else {
            u.set(j, j, 1.0);
        }
    }
    Ok(SvdDecomposition {
        u,
        sigma,
        v,
        sweeps,
        converged,
    })
}

/// Compile a well-conditioned invertible matrix through its SVD: rotations
/// realizing Vᵀ, one constant gate per singular value (skipping values equal
/// to 1 within 1e−12), then rotations realizing U. Rejects inputs with
/// σ_min ≤ 1e−10·σ_max.
pub fn svd_circuit(a: &DenseMatrix) -> Result<CompileResult> {
    require_square_finite(a, "SVD compilation")?;
    let svd = jacobi_svd(a)?;
    if !svd.converged {
        return Err(Error::InvalidInput(
            "Jacobi SVD did not converge; input may be too ill-conditioned".into(),
        ));
    }
    let sigma_max = svd.sigma.iter().cloned().fold(0.0f64, f64::max);
    let sigma_min = svd.sigma.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(sigma_min > SIGMA_RATIO_FLOOR * sigma_max) || sigma_max == 0.0 {
        return Err(Error::InvalidInput(format!(
            "matrix is numerically singular: sigma_min/sigma_max = {:.3e}",
            if sigma_max > 0.0 { sigma_min / sigma_max } else { 0.0 }
        )));
    }
    let n = a.rows();
    let mut circuit = Circuit::new(n);
    for g in givens_gates_for_orthogonal(&svd.v.transpose()) {
        circuit.push(g);
    }
    for (k, &s) in svd.sigma.iter().enumerate() {
        if (s - 1.0).abs() > 1e-12 {
            circuit.push(Gate::constant(k + 1, s));
        }
    }
    for g in givens_gates_for_orthogonal(&svd.u) {
        circuit.push(g);
    }
    finish_compile(a, circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_orthogonal(n: usize, seed: u64) -> DenseMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = Circuit::new(n);
        for _ in 0..5 * n {
            let k = rng.gen_range(1..n);
            let l = rng.gen_range(k + 1..=n);
            c.push(Gate::rotation(k, l, rng.gen_range(-3.0..3.0)));
        }
        c.final_matrix().unwrap()
    }

    #[test]
    fn identity_compiles_to_empty_circuit() {
        let r = givens_qr_circuit(&DenseMatrix::identity(6)).unwrap();
        assert_eq!(r.circuit.len(), 0);
        assert_eq!(r.reconstruction_error, 0.0);
        assert_eq!(r.uniform_condition, 1.0);
        assert!(r.uniform_condition_exact);
    }

    #[test]
    fn single_rotation_matrix_recovers_one_gate() {
        let mut c = Circuit::new(2);
        c.push(Gate::rotation(1, 2, 0.7));
        let q = c.final_matrix().unwrap();
        let r = givens_qr_circuit(&q).unwrap();
        assert_eq!(r.rotation_count, 1);
        assert!(r.reconstruction_error < 1e-14);
    }

    #[test]
    fn random_orthogonal_round_trips() {
        for seed in [1u64, 2, 3] {
            let q = random_orthogonal(8, seed);
            let r = givens_qr_circuit(&q).unwrap();
            assert!(r.rotation_count <= 8 * 7 / 2);
            assert!(
                r.reconstruction_error < 1e-13,
                "seed {seed}: {}",
                r.reconstruction_error
            );
            assert!((r.uniform_condition - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_non_orthogonal_input() {
        let a = DenseMatrix::from_rows(vec![vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(givens_qr_circuit(&a).is_err());
    }

    #[test]
    fn jacobi_on_diagonal_matrix_is_immediate() {
        let a = DenseMatrix::from_rows(vec![vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
        let svd = jacobi_svd(&a).unwrap();
        assert!(svd.converged);
        assert_eq!(svd.sigma, vec![2.0, 3.0]);
        assert!(svd.u.max_abs_diff(&DenseMatrix::identity(2)) < 1e-15);
        assert!(svd.v.max_abs_diff(&DenseMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn jacobi_reconstructs_general_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 6;
        let a = DenseMatrix::from_fn(n, n, |i, j| {
            let _ = (i, j);
            rng.gen_range(-1.0..1.0)
        });
        let svd = jacobi_svd(&a).unwrap();
        assert!(svd.converged);
        let mut us = svd.u.clone();
        for j in 0..n {
            us.scale_col(j, svd.sigma[j]);
        }
        let recon = us.matmul(&svd.v.transpose());
        assert!(recon.max_abs_diff(&a) < 1e-12);
        assert!(orthogonality_defect(&svd.u) < 1e-12);
        assert!(orthogonality_defect(&svd.v) < 1e-12);
    }

    #[test]
    fn svd_circuit_on_diagonal_uses_only_constants() {
        let a = DenseMatrix::from_rows(vec![vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
        let r = svd_circuit(&a).unwrap();
        assert_eq!(r.rotation_count, 0);
        assert_eq!(r.constant_count, 2);
        assert!(r.reconstruction_error < 1e-12);
        // Layers run Id → diag(2,1) → diag(2,3); the middle layer has κ = 2.
        assert!((r.uniform_condition - 2.0).abs() < 1e-6);
    }

    #[test]
    fn svd_circuit_reconstructs_well_conditioned_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 8;
        // Orthogonal times moderate diagonal times orthogonal: known κ ≤ 4.
        let q1 = random_orthogonal(n, 11);
        let q2 = random_orthogonal(n, 12);
        let mut d = DenseMatrix::identity(n);
        for k in 0..n {
            d.set(k, k, rng.gen_range(0.5..2.0));
        }
        let a = q1.matmul(&d).matmul(&q2);
        let r = svd_circuit(&a).unwrap();
        assert!(
            r.reconstruction_error < 1e-10,
            "error {}",
            r.reconstruction_error
        );
        assert!(r.uniform_condition < 8.0);
    }

    #[test]
    fn svd_circuit_rejects_singular_input() {
        let a = DenseMatrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(svd_circuit(&a).is_err());
    }
}
