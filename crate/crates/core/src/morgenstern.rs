//! Brute-force submatrix-determinant potential: the maximum of |det| over all
//! square submatrices (every row subset × column subset of equal size).
//!
//! One plane rotation applied to a matrix can at most double this potential,
//! which makes it a (weaker) alternative to the quasi-entropy for counting
//! arguments; it is exposed here for comparison at tiny sizes. The sweep is
//! exhaustive and exponential, hence the hard size cap.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

pub const MAX_EXHAUSTIVE_DIM: usize = 10;

/// Max |det| over all square submatrices. Errors when min(rows, cols) exceeds
/// [`MAX_EXHAUSTIVE_DIM`].
pub fn morgenstern_potential(m: &DenseMatrix) -> Result<f64> {
    let max_k = m.rows().min(m.cols());
    if max_k > MAX_EXHAUSTIVE_DIM {
        return Err(Error::InvalidInput(format!(
            "exhaustive submatrix sweep capped at dimension {MAX_EXHAUSTIVE_DIM}, got {max_k}"
        )));
    }
    let mut best = 0.0f64;
    for k in 1..=max_k {
        for_each_combination(m.rows(), k, &mut |rows_idx| {
            for_each_combination(m.cols(), k, &mut |cols_idx| {
                let d = m.submatrix(rows_idx, cols_idx).determinant().abs();
                if d > best {
                    best = d;
                }
            });
        });
    }
    Ok(best)
}

/// Calls `f` with every size-k subset of {0..n}, in lexicographic order.
fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        f(&idx);
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
