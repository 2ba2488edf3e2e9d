//! The two-gate circuit model over ℝ^dim.
//!
//! A circuit is an ordered list of gates, each acting on one or two
//! coordinates of the ambient space:
//!
//! * `Rotation { k, l, theta }` applies the plane rotation
//!   [[cos θ, sin θ], [−sin θ, cos θ]] to coordinates (k, l), k < l;
//! * `Constant { k, c }` multiplies coordinate k by a nonzero scalar c.
//!
//! The i-th defining matrix M_i is the linear map taking the input layer to
//! layer i; M_0 = Id and M_i = G_i·M_{i−1} where G_i is the gate's matrix.
//! Because gates act on at most two coordinates, M_i differs from M_{i−1} in
//! at most two rows, and M_i⁻¹ = M_{i−1}⁻¹·G_iᵀ (rotations) differs in at
//! most two columns — which is what makes O(dim)-per-gate maintenance
//! possible (see the trace module).
//!
//! `io_dim` marks how many leading coordinates are input/output; circuits may
//! carry `dim − io_dim` extra workspace coordinates (initialized to zero)
//! whose entropy contribution is tracked separately.
//!
//! Coordinate indices are 1-based both here and in the file format.

use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    /// Plane rotation on coordinates (k, l), 1-based, k < l.
    Rotation { k: usize, l: usize, theta: f64 },
    /// Coordinate k scaled by c ≠ 0.
    Constant { k: usize, c: f64 },
}

impl Gate {
    pub fn rotation(k: usize, l: usize, theta: f64) -> Gate {
        Gate::Rotation { k, l, theta }
    }

    pub fn constant(k: usize, c: f64) -> Gate {
        Gate::Constant { k, c }
    }

    pub fn is_rotation(&self) -> bool {
        matches!(self, Gate::Rotation { .. })
    }

    /// Violation message if the gate is malformed for the given dimension.
    pub fn check(&self, dim: usize) -> Option<String> {
        match *self {
            Gate::Rotation { k, l, theta } => {
                if k == 0 || l == 0 || k > dim || l > dim {
                    Some(format!(
                        "rotation ({k},{l}): index out of range 1..={dim}"
                    ))
                } else if k >= l {
                    Some(format!("rotation ({k},{l}): requires k < l"))
                } else if !theta.is_finite() {
                    Some(format!("rotation ({k},{l}): non-finite angle"))
                } else {
                    None
                }
            }
            Gate::Constant { k, c } => {
                if k == 0 || k > dim {
                    Some(format!("constant ({k}): index out of range 1..={dim}"))
                } else if c == 0.0 {
                    Some(format!("constant ({k}): c = 0"))
                } else if !c.is_finite() {
                    Some(format!("constant ({k}): non-finite scalar"))
                } else {
                    None
                }
            }
        }
    }
}

/// Applies one gate to a state vector, returning the new state. Only the
/// touched coordinates change; rotations preserve the Euclidean norm of the
/// (k, l) pair.
pub fn apply_gate(state: &[f64], gate: Gate) -> Result<Vec<f64>> {
    if let Some(v) = gate.check(state.len()) {
        return Err(Error::InvalidGate(v));
    }
    let mut out = state.to_vec();
    apply_gate_in_place(&mut out, gate);
    Ok(out)
}

/// Unchecked fast path; callers validate the circuit once up front.
#[inline]
pub fn apply_gate_in_place(state: &mut [f64], gate: Gate) {
    match gate {
        Gate::Rotation { k, l, theta } => {
            let (c, s) = (theta.cos(), theta.sin());
            let (a, b) = (state[k - 1], state[l - 1]);
            state[k - 1] = c * a + s * b;
            state[l - 1] = -s * a + c * b;
        }
        Gate::Constant { k, c } => {
            state[k - 1] *= c;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    /// Total coordinate count (input/output plus workspace).
    pub dim: usize,
    /// Leading coordinates carrying input/output; io_dim ≤ dim.
    pub io_dim: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(dim: usize) -> Circuit {
        Circuit {
            dim,
            io_dim: dim,
            gates: Vec::new(),
        }
    }

    pub fn with_workspace(io_dim: usize, extra: usize) -> Circuit {
        Circuit {
            dim: io_dim + extra,
            io_dim,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn rotation_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_rotation()).count()
    }

    pub fn constant_count(&self) -> usize {
        self.gates.len() - self.rotation_count()
    }

    /// All gate-invariant violations (empty means valid). Violations are
    /// data, not errors: generators assert emptiness, readers report them.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.io_dim > self.dim {
            out.push(format!(
                "io_dim {} exceeds dimension {}",
                self.io_dim, self.dim
            ));
        }
        for (i, g) in self.gates.iter().enumerate() {
            if let Some(v) = g.check(self.dim) {
                out.push(format!("gate {}: {}", i + 1, v));
            }
        }
        out
    }

    fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidCircuit(violations.join("; ")))
        }
    }

    /// Runs the circuit on an input vector. Accepts either a full-length
    /// input or an io_dim-length input (workspace coordinates start at zero).
    pub fn simulate(&self, input: &[f64]) -> Result<Vec<f64>> {
        self.ensure_valid()?;
        let mut state = if input.len() == self.dim {
            input.to_vec()
        } else if input.len() == self.io_dim {
            let mut s = vec![0.0; self.dim];
            s[..self.io_dim].copy_from_slice(input);
            s
        } else {
            return Err(Error::DimensionMismatch(format!(
                "input length {} (circuit has dim {}, io_dim {})",
                input.len(),
                self.dim,
                self.io_dim
            )));
        };
        for &g in &self.gates {
            apply_gate_in_place(&mut state, g);
        }
        Ok(state)
    }

    /// The defining matrix after `layer` gates (replayed from the identity).
    pub fn defining_matrix(&self, layer: usize) -> Result<DenseMatrix> {
        self.ensure_valid()?;
        if layer > self.gates.len() {
            return Err(Error::InvalidInput(format!(
                "layer {} exceeds gate count {}",
                layer,
                self.gates.len()
            )));
        }
        let mut m = DenseMatrix::identity(self.dim);
        for &g in &self.gates[..layer] {
            apply_gate_to_matrix(&mut m, g);
        }
        Ok(m)
    }

    /// The final defining matrix M_m.
    pub fn final_matrix(&self) -> Result<DenseMatrix> {
        self.defining_matrix(self.gates.len())
    }

    /// The circuit with every constant c replaced by 1/c (rotations
    /// unchanged). Its i-th defining matrix is (M_i⁻¹)ᵀ — the inverse
    /// transpose of this circuit's — which is why maintaining M⁻¹ by column
    /// operations is sound.
    pub fn dual(&self) -> Result<Circuit> {
        self.ensure_valid()?;
        let gates = self
            .gates
            .iter()
            .map(|&g| match g {
                Gate::Rotation { .. } => g,
                Gate::Constant { k, c } => Gate::Constant { k, c: 1.0 / c },
            })
            .collect();
        Ok(Circuit {
            dim: self.dim,
            io_dim: self.io_dim,
            gates,
        })
    }

    /// Writes the JSON-lines format: a header record then one record per gate.
    pub fn write_jsonl(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        let header = Header {
            version: 1,
            dim: self.dim,
            io_dim: self.io_dim,
        };
        serde_json::to_writer(&mut w, &header)?;
        writeln!(w)?;
        for &g in &self.gates {
            let rec = GateRecord::from(g);
            serde_json::to_writer(&mut w, &rec)?;
            writeln!(w)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the JSON-lines format, rejecting unknown gate kinds and any
    /// version other than 1.
    pub fn read_jsonl(path: impl AsRef<Path>) -> Result<Circuit> {
        let file = std::fs::File::open(path)?;
        let reader = std::io::BufReader::new(file);
        let mut lines = reader.lines();
        let header_line = loop {
            match lines.next() {
                Some(line) => {
                    let line = line?;
                    if !line.trim().is_empty() {
                        break line;
                    }
                }
                None => return Err(Error::Parse("empty circuit file".into())),
            }
        };
        let header: Header = serde_json::from_str(&header_line)
            .map_err(|e| Error::Parse(format!("bad header: {e}")))?;
        if header.version != 1 {
            return Err(Error::Parse(format!(
                "unsupported version {}",
                header.version
            )));
        }
        let mut circuit = Circuit {
            dim: header.dim,
            io_dim: header.io_dim,
            gates: Vec::new(),
        };
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: GateRecord = serde_json::from_str(&line)
                .map_err(|e| Error::Parse(format!("gate line {}: {e}", lineno + 2)))?;
            circuit.gates.push(rec.into());
        }
        Ok(circuit)
    }
}

/// Left-multiplies the matrix by the gate: rows (k, l) rotated, or row k
/// scaled.
pub fn apply_gate_to_matrix(m: &mut DenseMatrix, gate: Gate) {
    match gate {
        Gate::Rotation { k, l, theta } => m.rotate_rows(k - 1, l - 1, theta),
        Gate::Constant { k, c } => m.scale_row(k - 1, c),
    }
}

/// Right-multiplies the inverse by the gate's transpose, keeping M⁻¹ in sync
/// after `apply_gate_to_matrix` on the primal: columns (k, l) rotated, or
/// column k scaled by 1/c.
pub fn apply_gate_to_inverse(minv: &mut DenseMatrix, gate: Gate) {
    match gate {
        Gate::Rotation { k, l, theta } => minv.rotate_cols(k - 1, l - 1, theta),
        Gate::Constant { k, c } => minv.scale_col(k - 1, 1.0 / c),
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    version: u32,
    dim: usize,
    io_dim: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "g")]
enum GateRecord {
    #[serde(rename = "rot")]
    Rot { k: usize, l: usize, theta: f64 },
    #[serde(rename = "const")]
    Const { k: usize, c: f64 },
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        match g {
            Gate::Rotation { k, l, theta } => GateRecord::Rot { k, l, theta },
            Gate::Constant { k, c } => GateRecord::Const { k, c },
        }
    }
}

impl From<GateRecord> for Gate {
    fn from(r: GateRecord) -> Self {
        match r {
            GateRecord::Rot { k, l, theta } => Gate::Rotation { k, l, theta },
            GateRecord::Const { k, c } => Gate::Constant { k, c },
        }
    }
}
