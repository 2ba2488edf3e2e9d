//! Rotation/constant-gate linear circuits with entropy-potential analytics.
//!
//! The model: a circuit over ℝ^dim is an ordered list of gates, each either a
//! plane rotation acting on two coordinates or a nonzero scaling of one
//! coordinate. The i-th defining matrix M_i maps the input layer to layer i,
//! with M_0 = Id. This crate provides:
//!
//! * the circuit model itself with O(dim)-per-gate incremental maintenance of
//!   M, M⁻¹, the quasi-entropy potential Φ(M) = Σ f̂(M(i,j), M⁻¹(j,i)), the
//!   partial potential over leading columns, and condition numbers along the
//!   trace ([`gate`], [`trace`]);
//! * dense-matrix analytics: Φ, quasi-probability rows, spectral norm by
//!   power iteration, and a brute-force maximal-subdeterminant potential
//!   ([`matrix`], [`entropy`], [`spectral`], [`morgenstern`]);
//! * Walsh–Hadamard and FFT circuit generators whose defining matrices
//!   reproduce the exact transform matrices ([`transforms`]);
//! * a compiler from explicit orthogonal or well-conditioned matrices into
//!   the gate model via Givens elimination and a one-sided Jacobi SVD
//!   ([`compiler`]);
//! * numerical verifiers for the inequalities connecting Φ to gate counts:
//!   the rotated-quadruple gap constant, per-gate ΔΦ bounds, the entropy
//!   range bound, the perturbed flat-row bound with its empirical critical
//!   radius, and the extra-space entropy checks ([`lemma`]).

pub mod compiler;
pub mod entropy;
pub mod error;
pub mod gate;
pub mod lemma;
pub mod matrix;
pub mod morgenstern;
pub mod spectral;
pub mod trace;
pub mod transforms;

pub use compiler::{givens_qr_circuit, jacobi_svd, svd_circuit, CompileResult, SvdDecomposition};
pub use entropy::{
    check_inverse_pair, fhat, partial_quasi_entropy, quasi_entropy, quasi_entropy_of,
    quasi_prob_rows, QuasiProbRow,
};
pub use error::{Error, Result};
pub use gate::{apply_gate, Circuit, Gate};
pub use lemma::{
    alpha_beta, canonical_form, estimate_c0, estimate_lemma1_constant, g_phi, psi, psi_rotated,
    verify_extra_space_entropy, verify_gate_delta_bound, verify_perturbed_flat_row,
    verify_quasi_entropy_range, C0Report, CanonicalForm, DeltaBoundReport, ExtraSpaceReport,
    FlatRowCheck, LemmaEstimate, RangeCheck,
};
pub use matrix::DenseMatrix;
pub use morgenstern::morgenstern_potential;
pub use spectral::{condition_number, spectral_norm, SpectralNorm};
pub use trace::{
    build_trace, uniform_condition_number, CheckpointRecord, CircuitTrace, CondTracking,
    TraceOptions, UniformCondition,
};
pub use transforms::{
    append_uniform_scale, dft_real_embedding, fft_circuit, walsh_hadamard_matrix, wht_circuit,
};
