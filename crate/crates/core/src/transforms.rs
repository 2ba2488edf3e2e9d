//! Orthogonal transform matrices and gate realizations.
//!
//! The Walsh–Hadamard circuit uses the standard in-place butterfly network:
//! each butterfly (a, b) ↦ ((a+b)/√2, (a−b)/√2) is one rotation by π/4
//! followed by a sign flip on the second coordinate, for a total of
//! (n/2)·log₂n rotations. Every intermediate matrix is orthogonal, so the
//! circuit has uniform condition number 1.
//!
//! The DFT is realized on the 2m-dimensional real embedding
//! F = [[A, −B], [B, A]] with A(a,b) = cos(2πab/m)/√m and
//! B(a,b) = −sin(2πab/m)/√m, i.e. coordinates (x_a, x_{a+m}) carry the real
//! and imaginary parts of channel a. The circuit is the radix-2
//! decimation-in-time FFT: bit-reversal swaps (each a rotation by π/2 plus a
//! sign flip, applied to both the real and imaginary blocks), then per stage
//! a twiddle rotation by 2πj/2^s acting on a (real, imaginary) pair — which
//! multiplies that complex coordinate by e^{−2πij/2^s} — followed by the same
//! π/4 butterflies as above on both blocks. Rotation count is ≤ 2·m·log₂m.

use crate::error::{Error, Result};
use crate::gate::{Circuit, Gate};
use crate::matrix::DenseMatrix;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

fn require_power_of_two(n: usize, what: &str) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "{what} must be a positive power of two, got {n}"
        )));
    }
    Ok(())
}

/// Orthonormal Walsh–Hadamard matrix, H(i,j) = (−1)^popcount(i AND j) / √n.
pub fn walsh_hadamard_matrix(n: usize) -> Result<DenseMatrix> {
    require_power_of_two(n, "Walsh-Hadamard size")?;
    let scale = 1.0 / (n as f64).sqrt();
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        let parity = (i & j).count_ones() & 1;
        if parity == 0 {
            scale
        } else {
            -scale
        }
    }))
}

/// Real 2m×2m embedding of the unitary DFT matrix with kernel
/// e^(−2πi·ab/m)/√m: block form [[A, −B], [B, A]] where A is the elementwise
/// real part and B the imaginary part.
pub fn dft_real_embedding(m: usize) -> Result<DenseMatrix> {
    require_power_of_two(m, "DFT size")?;
    let scale = 1.0 / (m as f64).sqrt();
    let mf = m as f64;
    Ok(DenseMatrix::from_fn(2 * m, 2 * m, |i, j| {
        let (a, re_row) = if i < m { (i, true) } else { (i - m, false) };
        let (b, re_col) = if j < m { (j, true) } else { (j - m, false) };
        let angle = 2.0 * PI * ((a * b) % m) as f64 / mf;
        let a_entry = angle.cos() * scale;
        let b_entry = -angle.sin() * scale;
        match (re_row, re_col) {
            (true, true) | (false, false) => a_entry,
            (true, false) => -b_entry,
            (false, true) => b_entry,
        }
    }))
}

/// One butterfly (a, b) ↦ ((a+b)/√2, (a−b)/√2) on 1-based coordinates (k, l).
fn push_butterfly(circuit: &mut Circuit, k: usize, l: usize) {
    circuit.push(Gate::rotation(k, l, FRAC_PI_4));
    circuit.push(Gate::constant(l, -1.0));
}

/// Swap of 1-based coordinates (k, l): rotation by π/2 then a sign flip.
fn push_swap(circuit: &mut Circuit, k: usize, l: usize) {
    circuit.push(Gate::rotation(k, l, FRAC_PI_2));
    circuit.push(Gate::constant(l, -1.0));
}

/// Butterfly network computing the orthonormal Walsh–Hadamard transform;
/// (n/2)·log₂n rotations, all intermediate matrices orthogonal.
pub fn wht_circuit(n: usize) -> Result<Circuit> {
    require_power_of_two(n, "Walsh-Hadamard size")?;
    let mut circuit = Circuit::new(n);
    let mut h = 1;
    while h < n {
        let mut start = 0;
        while start < n {
            for j in start..start + h {
                push_butterfly(&mut circuit, j + 1, j + h + 1);
            }
            start += 2 * h;
        }
        h *= 2;
    }
    Ok(circuit)
}

/// Append one constant gate per coordinate, scaling the final matrix by c.
/// Lets generated transforms exercise the row-rescaling insensitivity of the
/// entropy potential without leaving the gate model.
pub fn append_uniform_scale(circuit: &mut Circuit, c: f64) -> Result<()> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidGate(format!(
            "uniform scale must be finite and nonzero, got {c}"
        )));
    }
    for k in 1..=circuit.dim {
        circuit.push(Gate::constant(k, c));
    }
    Ok(())
}

fn bit_reverse(i: usize, bits: u32) -> usize {
    let mut r = 0;
    let mut x = i;
    for _ in 0..bits {
        r = (r << 1) | (x & 1);
        x >>= 1;
    }
    r
}

/// Radix-2 decimation-in-time FFT on the real embedding of dimension 2m;
/// the final matrix equals `dft_real_embedding(m)`. Rotation count is at
/// most 2·m·log₂m.
pub fn fft_circuit(m: usize) -> Result<Circuit> {
    require_power_of_two(m, "DFT size")?;
    let stages = m.trailing_zeros();
    let mut circuit = Circuit::new(2 * m);
    // Reorder inputs into bit-reversed positions, on both blocks.
    for i in 0..m {
        let r = bit_reverse(i, stages);
        if i < r {
            push_swap(&mut circuit, i + 1, r + 1);
            push_swap(&mut circuit, i + m + 1, r + m + 1);
        }
    }
    for s in 1..=stages {
        let half = 1usize << (s - 1);
        let size = 1usize << s;
        let mut start = 0;
        while start < m {
            for j in 0..half {
                let u = start + j;
                let v = start + j + half;
                if j != 0 {
                    // Multiply complex coordinate v by e^(−2πij/2^s).
                    let theta = 2.0 * PI * j as f64 / size as f64;
                    circuit.push(Gate::rotation(v + 1, v + m + 1, theta));
                }
                push_butterfly(&mut circuit, u + 1, v + 1);
                push_butterfly(&mut circuit, u + m + 1, v + m + 1);
            }
            start += size;
        }
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wht_matrix_small_cases() {
        let h1 = walsh_hadamard_matrix(1).unwrap();
        assert_eq!(h1.get(0, 0), 1.0);
        let h2 = walsh_hadamard_matrix(2).unwrap();
        let r = 0.5f64.sqrt();
        let expect =
            DenseMatrix::from_rows(vec![vec![r, r], vec![r, -r]]).unwrap();
        assert!(h2.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn wht_matrix_is_orthogonal_and_symmetric() {
        let h = walsh_hadamard_matrix(16).unwrap();
        let prod = h.matmul(&h.transpose());
        assert!(prod.max_abs_diff(&DenseMatrix::identity(16)) < 1e-14);
        assert!(h.max_abs_diff(&h.transpose()) < 1e-15);
    }

    #[test]
    fn rejects_non_powers_of_two() {
        assert!(walsh_hadamard_matrix(0).is_err());
        assert!(walsh_hadamard_matrix(3).is_err());
        assert!(dft_real_embedding(6).is_err());
        assert!(wht_circuit(12).is_err());
        assert!(fft_circuit(0).is_err());
    }

    #[test]
    fn wht_circuit_matches_matrix() {
        for n in [1usize, 2, 4, 8, 16, 32] {
            let c = wht_circuit(n).unwrap();
            let log2n = n.trailing_zeros() as usize;
            assert_eq!(c.rotation_count(), n / 2 * log2n);
            let m = c.final_matrix().unwrap();
            let h = walsh_hadamard_matrix(n).unwrap();
            assert!(
                m.max_abs_diff(&h) < 1e-13,
                "n={n} error {}",
                m.max_abs_diff(&h)
            );
        }
    }

    #[test]
    fn dft_embedding_of_size_one_is_identity() {
        let f = dft_real_embedding(1).unwrap();
        assert!(f.max_abs_diff(&DenseMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn dft_embedding_is_orthogonal() {
        for m in [2usize, 4, 8, 16] {
            let f = dft_real_embedding(m).unwrap();
            let prod = f.matmul(&f.transpose());
            assert!(prod.max_abs_diff(&DenseMatrix::identity(2 * m)) < 1e-13);
        }
    }

    #[test]
    fn fft_circuit_matches_embedding() {
        for m in [1usize, 2, 4, 8, 16] {
            let c = fft_circuit(m).unwrap();
            let got = c.final_matrix().unwrap();
            let want = dft_real_embedding(m).unwrap();
            assert!(
                got.max_abs_diff(&want) < 1e-12,
                "m={m} error {}",
                got.max_abs_diff(&want)
            );
        }
    }

    #[test]
    fn uniform_scale_multiplies_final_matrix() {
        let mut c = wht_circuit(4).unwrap();
        append_uniform_scale(&mut c, 2.5).unwrap();
        let m = c.final_matrix().unwrap();
        let mut want = walsh_hadamard_matrix(4).unwrap();
        for k in 0..4 {
            want.scale_row(k, 2.5);
        }
        assert!(m.max_abs_diff(&want) < 1e-14);
        let mut bad = Circuit::new(2);
        assert!(append_uniform_scale(&mut bad, 0.0).is_err());
    }

    #[test]
    fn fft_rotation_counts_are_within_budget() {
        let expected = [(2usize, 2usize), (4, 11), (8, 33), (16, 93), (32, 233)];
        for (m, count) in expected {
            let c = fft_circuit(m).unwrap();
            assert_eq!(c.rotation_count(), count, "m={m}");
            let log2m = m.trailing_zeros() as usize;
            assert!(c.rotation_count() <= 2 * m * log2m);
        }
    }
}
