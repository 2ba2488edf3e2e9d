//! Deterministic builders for the benchmarks: seeded circuits and matrices
//! sized for steady-state throughput measurement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotent_core::{Circuit, DenseMatrix, Gate};

/// Circuit of `gates` random plane rotations on `dim` coordinates.
pub fn random_rotation_circuit(dim: usize, gates: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut circuit = Circuit::new(dim);
    for _ in 0..gates {
        circuit.push(random_rotation(&mut rng, dim));
    }
    circuit
}

/// Circuit mixing rotations with occasional constant gates (1 in 5), the
/// shape the incremental-entropy tracker sees in practice.
pub fn random_mixed_circuit(dim: usize, gates: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut circuit = Circuit::new(dim);
    for _ in 0..gates {
        if rng.gen_range(0..5) == 0 {
            let k = rng.gen_range(1..=dim);
            let c = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            circuit.push(Gate::constant(k, c));
        } else {
            circuit.push(random_rotation(&mut rng, dim));
        }
    }
    circuit
}

fn random_rotation(rng: &mut ChaCha8Rng, dim: usize) -> Gate {
    let k = rng.gen_range(1..dim);
    let l = rng.gen_range(k + 1..=dim);
    Gate::rotation(k, l, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Orthogonal matrix built from 4·dim random plane rotations.
pub fn random_orthogonal(dim: usize, seed: u64) -> DenseMatrix {
    random_rotation_circuit(dim, 4 * dim, seed)
        .final_matrix()
        .expect("rotation circuits are always invertible")
}

/// Dense matrix with independent uniform(−1, 1) entries.
pub fn random_dense(dim: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0))
}
