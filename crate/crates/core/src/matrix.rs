//! Dense row-major matrices with the handful of operations the rest of the
//! crate needs: LU inversion with partial pivoting, residual checks, row/column
//! rotations and scalings (the in-place updates circuits are built from), and
//! CSV I/O.
//!
//! Everything here targets desk scale (n ≤ a few thousand); there is no
//! blocking, no SIMD dispatch, and no sparse representation on purpose.

use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DenseMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Builds from nested rows, verifying rectangularity.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("matrix has no rows".into()));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::InvalidInput("matrix has no columns".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::InvalidInput(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    r.len(),
                    cols
                )));
            }
        }
        let nrows = rows.len();
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        Ok(DenseMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline(always)]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline(always)]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Two disjoint mutable row views (needed for in-place row rotations).
    pub fn two_rows_mut(&mut self, a: usize, b: usize) -> (&mut [f64], &mut [f64]) {
        assert!(a < b, "row pair must be ordered");
        let (lo, hi) = self.data.split_at_mut(b * self.cols);
        (
            &mut lo[a * self.cols..(a + 1) * self.cols],
            &mut hi[..self.cols],
        )
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        // ikj order keeps the inner loop streaming over contiguous rows.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for j in 0..other.cols {
                    dst[j] += a * src[j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matvec shape mismatch");
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = 0.0;
            for j in 0..self.cols {
                acc += row[j] * x[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Computes selfᵀ·x without materializing the transpose.
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, x.len(), "matvec shape mismatch");
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            let row = self.row(i);
            for j in 0..self.cols {
                out[j] += xi * row[j];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Entry-wise max-norm of self·other − Id; the drift measure for a
    /// maintained inverse.
    pub fn inverse_residual(&self, other: &DenseMatrix) -> f64 {
        assert!(self.is_square() && other.is_square());
        assert_eq!(self.rows, other.rows);
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let mut acc = vec![0.0; n];
            let row = self.row(i);
            for k in 0..n {
                let a = row[k];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                for j in 0..n {
                    acc[j] += a * src[j];
                }
            }
            acc[i] -= 1.0;
            for v in acc {
                worst = worst.max(v.abs());
            }
        }
        worst
    }

    /// Extracts the block with the given (0-based, half-open) row/column ranges.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> DenseMatrix {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        DenseMatrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> DenseMatrix {
        DenseMatrix::from_fn(row_idx.len(), col_idx.len(), |i, j| {
            self.get(row_idx[i], col_idx[j])
        })
    }

    pub fn scale_row(&mut self, i: usize, c: f64) {
        for v in self.row_mut(i) {
            *v *= c;
        }
    }

    pub fn scale_col(&mut self, j: usize, c: f64) {
        for i in 0..self.rows {
            self.data[i * self.cols + j] *= c;
        }
    }

    /// Replaces rows (k, l) by (cos·k + sin·l, −sin·k + cos·l); the row action
    /// of a plane rotation. Requires k < l.
    pub fn rotate_rows(&mut self, k: usize, l: usize, theta: f64) {
        let (c, s) = (theta.cos(), theta.sin());
        let (rk, rl) = self.two_rows_mut(k, l);
        for (a, b) in rk.iter_mut().zip(rl.iter_mut()) {
            let (va, vb) = (*a, *b);
            *a = c * va + s * vb;
            *b = -s * va + c * vb;
        }
    }

    /// Replaces columns (k, l) by (cos·k + sin·l, −sin·k + cos·l); the column
    /// action that keeps a maintained inverse in sync with `rotate_rows` on
    /// the primal (M⁻¹ picks up the transposed rotation on the right).
    pub fn rotate_cols(&mut self, k: usize, l: usize, theta: f64) {
        let (c, s) = (theta.cos(), theta.sin());
        for i in 0..self.rows {
            let base = i * self.cols;
            let (va, vb) = (self.data[base + k], self.data[base + l]);
            self.data[base + k] = c * va + s * vb;
            self.data[base + l] = -s * va + c * vb;
        }
    }

    /// Determinant via LU with partial pivoting (small matrices only; used by
    /// the submatrix-determinant potential).
    pub fn determinant(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut lu = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut piv = col;
            let mut best = lu[col * n + col].abs();
            for r in col + 1..n {
                let v = lu[r * n + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..n {
                    lu.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let d = lu[col * n + col];
            det *= d;
            for r in col + 1..n {
                let f = lu[r * n + col] / d;
                if f == 0.0 {
                    continue;
                }
                for j in col + 1..n {
                    lu[r * n + j] -= f * lu[col * n + j];
                }
            }
        }
        det
    }

    /// Inverse via LU with partial pivoting.
    pub fn lu_inverse(&self) -> Result<DenseMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut piv = col;
            let mut best = lu[col * n + col].abs();
            for r in col + 1..n {
                let v = lu[r * n + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular);
            }
            if piv != col {
                for j in 0..n {
                    lu.swap(col * n + j, piv * n + j);
                }
                perm.swap(col, piv);
            }
            let d = lu[col * n + col];
            for r in col + 1..n {
                let f = lu[r * n + col] / d;
                lu[r * n + col] = f;
                if f == 0.0 {
                    continue;
                }
                for j in col + 1..n {
                    lu[r * n + j] -= f * lu[col * n + j];
                }
            }
        }
        // Solve for each unit vector; inv column perm[k] solves P·e_k.
        let mut inv = DenseMatrix::zeros(n, n);
        let mut x = vec![0.0; n];
        for k in 0..n {
            for v in x.iter_mut() {
                *v = 0.0;
            }
            // Forward substitution against the permuted right-hand side.
            for i in 0..n {
                let mut acc = if perm[i] == k { 1.0 } else { 0.0 };
                for j in 0..i {
                    acc -= lu[i * n + j] * x[j];
                }
                x[i] = acc;
            }
            for i in (0..n).rev() {
                let mut acc = x[i];
                for j in i + 1..n {
                    acc -= lu[i * n + j] * x[j];
                }
                x[i] = acc / lu[i * n + i];
            }
            for i in 0..n {
                inv.data[i * n + k] = x[i];
            }
        }
        Ok(inv)
    }

    /// LU inverse plus a residual gate: rejects results with
    /// ‖M·M⁻¹ − Id‖_max above the tolerance.
    pub fn inverse_checked(&self, tolerance: f64) -> Result<DenseMatrix> {
        let inv = self.lu_inverse()?;
        let residual = self.inverse_residual(&inv);
        if residual > tolerance {
            return Err(Error::ResidualExceeded {
                residual,
                tolerance,
            });
        }
        Ok(inv)
    }

    /// Reads a headerless CSV of decimal doubles, validating rectangularity.
    pub fn read_csv(path: impl AsRef<Path>) -> Result<DenseMatrix> {
        let file = std::fs::File::open(path)?;
        let reader = std::io::BufReader::new(file);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let row: Vec<f64> = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<f64>().map_err(|_| {
                        Error::Parse(format!("line {}: bad number {:?}", lineno + 1, tok.trim()))
                    })
                })
                .collect::<Result<_>>()?;
            if let Some(first) = rows.first() {
                if row.len() != first.len() {
                    return Err(Error::Parse(format!(
                        "line {}: {} fields, expected {}",
                        lineno + 1,
                        row.len(),
                        first.len()
                    )));
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse("empty matrix file".into()));
        }
        let cols = rows[0].len();
        let nrows = rows.len();
        let data = rows.into_iter().flatten().collect();
        Ok(DenseMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        for i in 0..self.rows {
            let row = self.row(i);
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(w, ",")?;
                }
                write!(w, "{}", v)?;
            }
            writeln!(w)?;
        }
        w.flush()?;
        Ok(())
    }
}
