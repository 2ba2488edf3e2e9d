//! Layer-by-layer execution of a circuit with incremental maintenance of the
//! defining matrix, its inverse, and the entropy potentials.
//!
//! Per gate, M changes in at most two rows and M⁻¹ in at most two columns
//! (M_i = G·M_{i−1} ⟹ M_i⁻¹ = M_{i−1}⁻¹·Gᵀ), so both are updated in O(dim).
//! The quasi-entropy change is also O(dim): a rotation on coordinates (k, l)
//! only touches the products involving rows k, l of M and columns k, l of
//! M⁻¹, i.e. for each column q the quadruple
//!
//!   (M(k,q), M⁻¹(q,k), M(l,q), M⁻¹(q,l))
//!
//! is replaced by its plane-rotated image, and ΔΦ is the sum over q of the
//! two-term entropy difference. A constant gate scales a row of M and the
//! matching column of M⁻¹ reciprocally, leaving every product — and hence Φ —
//! unchanged up to roundoff; the delta is still measured honestly rather than
//! assumed zero.
//!
//! Floating-point drift in the maintained inverse is controlled at
//! checkpoints (default every 4·dim gates, plus the final layer): the
//! residual ‖M·M⁻¹ − Id‖_max is measured, the inverse is replaced by a fresh
//! LU inverse when the residual exceeds 1e−8, and the running Φ accumulators
//! are re-anchored to a full recomputation, recording the pre-resync drift.
//!
//! Storage: per-layer scalars (Φ, Φ_n, κ where covered) plus the final
//! matrices. Keeping every layer's dense matrices is opt-in (`keep_layers`)
//! and intended for small dimensions only.

use crate::entropy::{fhat, partial_quasi_entropy, quasi_entropy};
use crate::error::Result;
use crate::gate::{Circuit, Gate};
use crate::matrix::DenseMatrix;
use crate::spectral::spectral_norm_warm;

pub const CHECKPOINT_RESIDUAL_TOLERANCE: f64 = 1e-8;

/// How often to measure κ along the trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CondTracking {
    Off,
    /// Only at drift checkpoints (and the final layer).
    Checkpoints,
    /// Every k layers (1 = every layer; exact uniform condition number).
    Every(usize),
}

#[derive(Clone, Debug)]
pub struct TraceOptions {
    pub track_phi: bool,
    /// Track the partial entropy over the first io_dim columns as well.
    pub track_phi_n: bool,
    pub cond: CondTracking,
    /// Gates between drift checkpoints; default 4·dim.
    pub checkpoint_every: Option<usize>,
    /// Keep (M_i, M_i⁻¹) for every layer. Memory is Θ(m·dim²) — small
    /// circuits only.
    pub keep_layers: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            track_phi: true,
            track_phi_n: false,
            cond: CondTracking::Checkpoints,
            checkpoint_every: None,
            keep_layers: false,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckpointRecord {
    pub layer: usize,
    /// ‖M·M⁻¹ − Id‖_max of the maintained inverse, before any repair.
    pub residual: f64,
    /// |Φ_incremental − Φ_full| / max(1, |Φ_full|), before resync.
    pub phi_drift: f64,
    pub phi_n_drift: f64,
    /// Whether the maintained inverse was replaced by a fresh LU inverse.
    pub repaired: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct UniformCondition {
    pub value: f64,
    /// True when every layer was covered; otherwise the value is a lower
    /// bound on the true maximum.
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct CircuitTrace {
    pub dim: usize,
    pub io_dim: usize,
    pub gates: Vec<Gate>,
    /// Φ after each layer; phi[0] = 0 for the identity. All zeros when the
    /// trace was built with `track_phi` off.
    pub phi: Vec<f64>,
    /// Φ_io_dim after each layer, when tracked.
    pub phi_n: Option<Vec<f64>>,
    /// (layer, κ) at covered layers, ascending.
    pub kappa: Vec<(usize, f64)>,
    pub kappa_every_layer: bool,
    pub final_m: DenseMatrix,
    pub final_minv: DenseMatrix,
    pub checkpoints: Vec<CheckpointRecord>,
    /// Per-layer (M_i, M_i⁻¹) including layer 0, in `keep_layers` mode.
    pub layers: Option<Vec<(DenseMatrix, DenseMatrix)>>,
}

impl CircuitTrace {
    pub fn phi_final(&self) -> f64 {
        *self.phi.last().unwrap()
    }

    pub fn phi_n_final(&self) -> Option<f64> {
        self.phi_n.as_ref().map(|v| *v.last().unwrap())
    }

    /// κ at a given layer, when that layer was covered.
    pub fn kappa_at(&self, layer: usize) -> Option<f64> {
        self.kappa
            .binary_search_by_key(&layer, |&(l, _)| l)
            .ok()
            .map(|i| self.kappa[i].1)
    }

    pub fn max_residual(&self) -> f64 {
        self.checkpoints
            .iter()
            .fold(0.0, |m, c| m.max(c.residual))
    }

    pub fn max_phi_drift(&self) -> f64 {
        self.checkpoints
            .iter()
            .fold(0.0, |m, c| m.max(c.phi_drift))
    }
}

/// Max κ over the covered layers. With per-layer coverage this is the exact
/// uniform condition number of the circuit; otherwise a lower bound.
pub fn uniform_condition_number(trace: &CircuitTrace) -> UniformCondition {
    let value = trace.kappa.iter().fold(1.0f64, |m, &(_, k)| m.max(k));
    UniformCondition {
        value,
        exact: trace.kappa_every_layer,
    }
}

pub fn build_trace(circuit: &Circuit, options: &TraceOptions) -> Result<CircuitTrace> {
    let violations = circuit.validate();
    if !violations.is_empty() {
        return Err(crate::error::Error::InvalidCircuit(violations.join("; ")));
    }
    let dim = circuit.dim;
    let io_dim = circuit.io_dim;
    let total = circuit.gates.len();
    let cp_every = options.checkpoint_every.unwrap_or(4 * dim.max(1)).max(1);

    let mut m = DenseMatrix::identity(dim);
    let mut minv = DenseMatrix::identity(dim);
    let mut cur_phi = 0.0f64;
    let mut cur_phi_n = 0.0f64;
    let mut phi = Vec::with_capacity(total + 1);
    phi.push(0.0);
    let mut phi_n = options.track_phi_n.then(|| {
        let mut v = Vec::with_capacity(total + 1);
        v.push(0.0);
        v
    });
    let mut kappa: Vec<(usize, f64)> = Vec::new();
    let mut checkpoints: Vec<CheckpointRecord> = Vec::new();
    let mut layers = options
        .keep_layers
        .then(|| vec![(m.clone(), minv.clone())]);

    // Warm power-iteration state; rotations leave MᵀM (and (M⁻¹)(M⁻¹)ᵀ's
    // gram) unchanged, so these stay nearly converged along the trace.
    let mut warm_m = crate::spectral::power_iteration_start(dim);
    let mut warm_minv = crate::spectral::power_iteration_start(dim);
    let kappa_of = |m: &DenseMatrix, minv: &DenseMatrix,
                    wm: &mut Vec<f64>, wi: &mut Vec<f64>| {
        spectral_norm_warm(m, wm).value * spectral_norm_warm(minv, wi).value
    };

    let cond_due = |layer: usize| match options.cond {
        CondTracking::Off => false,
        CondTracking::Checkpoints => layer == total || (layer > 0 && layer % cp_every == 0),
        CondTracking::Every(k) => {
            layer == total || layer % k.max(1) == 0
        }
    };
    if options.cond != CondTracking::Off {
        kappa.push((0, 1.0)); // M₀ = Id
    }

    for (idx, &gate) in circuit.gates.iter().enumerate() {
        let layer = idx + 1;
        let (mut d_full, mut d_io) = (0.0f64, 0.0f64);
        match gate {
            Gate::Rotation { k, l, theta } => {
                let (k0, l0) = (k - 1, l - 1);
                let (c, s) = (theta.cos(), theta.sin());
                if options.track_phi || phi_n.is_some() {
                    for q in 0..dim {
                        let w = m.get(k0, q);
                        let y = m.get(l0, q);
                        let x = minv.get(q, k0);
                        let z = minv.get(q, l0);
                        let old = fhat(w, x) + fhat(y, z);
                        // Same expressions the in-place updates use, so the
                        // delta matches the stored entries bit for bit.
                        let nw = c * w + s * y;
                        let ny = -s * w + c * y;
                        let nx = c * x + s * z;
                        let nz = -s * x + c * z;
                        let new = fhat(nw, nx) + fhat(ny, nz);
                        let dq = new - old;
                        d_full += dq;
                        if q < io_dim {
                            d_io += dq;
                        }
                    }
                }
                m.rotate_rows(k0, l0, theta);
                minv.rotate_cols(k0, l0, theta);
            }
            Gate::Constant { k, c } => {
                let k0 = k - 1;
                let inv_c = 1.0 / c;
                if options.track_phi || phi_n.is_some() {
                    for q in 0..dim {
                        let w = m.get(k0, q);
                        let x = minv.get(q, k0);
                        let dq = fhat(c * w, x * inv_c) - fhat(w, x);
                        d_full += dq;
                        if q < io_dim {
                            d_io += dq;
                        }
                    }
                }
                m.scale_row(k0, c);
                minv.scale_col(k0, inv_c);
            }
        }
        cur_phi += d_full;
        cur_phi_n += d_io;
        phi.push(cur_phi);
        if let Some(v) = phi_n.as_mut() {
            v.push(cur_phi_n);
        }

        if cond_due(layer) {
            kappa.push((layer, kappa_of(&m, &minv, &mut warm_m, &mut warm_minv)));
        }

        if layer % cp_every == 0 || layer == total {
            let residual = m.inverse_residual(&minv);
            let mut repaired = false;
            if residual > CHECKPOINT_RESIDUAL_TOLERANCE {
                minv = m.lu_inverse()?;
                repaired = true;
            }
            let phi_drift = if options.track_phi {
                let full_phi = quasi_entropy(&m, &minv);
                let d = (cur_phi - full_phi).abs() / full_phi.abs().max(1.0);
                cur_phi = full_phi;
                d
            } else {
                0.0
            };
            let phi_n_drift = if phi_n.is_some() {
                let full_pn = partial_quasi_entropy(&m, &minv, io_dim);
                let d = (cur_phi_n - full_pn).abs() / full_pn.abs().max(1.0);
                cur_phi_n = full_pn;
                d
            } else {
                0.0
            };
            checkpoints.push(CheckpointRecord {
                layer,
                residual,
                phi_drift,
                phi_n_drift,
                repaired,
            });
        }

        if let Some(ls) = layers.as_mut() {
            ls.push((m.clone(), minv.clone()));
        }
    }

    Ok(CircuitTrace {
        dim,
        io_dim,
        gates: circuit.gates.clone(),
        phi,
        phi_n,
        kappa,
        kappa_every_layer: matches!(options.cond, CondTracking::Every(1)),
        final_m: m,
        final_minv: minv,
        checkpoints,
        layers,
    })
}
